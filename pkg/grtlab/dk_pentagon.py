"""
Drinfeld–Kohno algebras and the pentagon residual.

A `PresentedLieAlgebra` is the graded quotient of a free Lie algebra by
homogeneous relations.  The ideal is generated degree by degree: its
degree-d component is spanned by the degree-d relations together with the
brackets of every generator with a basis of the degree-(d-1) component.
A second round bracketing every relation with the whole free basis of the
complementary degree certifies that nothing was missed; its outcome is
kept in ``saturated``.

Each degree holds an exact reduced row echelon form over the rationals,
kept fully reduced as rows are added.  Pivots are the largest Lyndon word
of a row, so the quotient basis consists of the remaining (non-pivot)
words of that degree, in Lyndon order, and coordinates do not depend on
the order in which ideal vectors were produced.
"""
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple

from tqdm import tqdm

from .lie_core import LieAlgebraError, LieSeries, LyndonWord, bracket, lyndon_basis, substitute, witt_dimension
from .lie_format import format_series, format_word
from .utils import get_logger

logger = get_logger(__name__)

Vector = Dict[LyndonWord, Fraction]


class PresentationError(ValueError):
    """Bad presentation: n < 2, inhomogeneous relation or foreign generators."""


class TruncationError(ValueError):
    """A value has non-zero terms above the algebra's max_degree."""


class _RowSpace:
    """Incrementally maintained reduced row echelon form of sparse rational vectors."""

    def __init__(self) -> None:
        self.rows: Dict[LyndonWord, Vector] = {}
        # column -> pivots of the rows where the column occurs
        self._occurs: Dict[LyndonWord, Set[LyndonWord]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[LyndonWord, Fraction]) -> Vector:
        out = dict(vec)
        for p in [c for c in vec if c in self.rows]:
            c = out.pop(p, 0)
            if not c:
                continue
            for col, v in self.rows[p].items():
                if col == p:
                    continue
                nv = out.get(col, 0) - c * v
                if nv:
                    out[col] = nv
                else:
                    out.pop(col, None)
        return out

    def add(self, vec: Mapping[LyndonWord, Fraction]) -> bool:
        """Add a vector to the span; False when it was already in it."""
        r = self.reduce(vec)
        if not r:
            return False
        p = max(r)
        lead = r[p]
        r = {c: v / lead for c, v in r.items()}
        for q in sorted(self._occurs.pop(p, ())):
            row = self.rows[q]
            c = row.pop(p)
            for col, v in r.items():
                if col == p:
                    continue
                nv = row.get(col, 0) - c * v
                if nv:
                    row[col] = nv
                    self._occurs.setdefault(col, set()).add(q)
                else:
                    row.pop(col, None)
                    self._occurs.get(col, set()).discard(q)
        self.rows[p] = r
        for col in r:
            if col != p:
                self._occurs.setdefault(col, set()).add(p)
        return True


@dataclass(eq=False)
class PresentedLieAlgebra:
    """Graded quotient of the free Lie algebra on `generators` by homogeneous `relations`."""

    generators: Tuple[str, ...]
    relations: Tuple[LieSeries, ...]
    max_degree: int
    basis: Dict[int, Tuple[LyndonWord, ...]] = field(default_factory=dict)
    saturated: Dict[int, bool] = field(default_factory=dict)
    _spaces: Dict[int, _RowSpace] = field(default_factory=dict, repr=False)

    def dimensions(self) -> List[int]:
        return [len(self.basis[d]) for d in range(1, self.max_degree + 1)]

    def ideal_rank(self, degree: int) -> int:
        return self._spaces[degree].rank

    def series(self, coeffs: Mapping[Sequence[int], Fraction]) -> LieSeries:
        return LieSeries(self.generators, self.max_degree, coeffs)

    def generator(self, name: str) -> LieSeries:
        return LieSeries.generator(self.generators, self.max_degree, name)

    def reduce(self, s: LieSeries) -> "QuotientElement":
        """Project a free Lie series onto quotient coordinates.

        Each homogeneous component is reduced against the ideal's echelon
        rows of its degree; what remains is written in the quotient basis.

        Args:
            s: Series over this algebra's generators.

        Returns:
            The class of s in the quotient; zero exactly when s lies in the ideal.

        Raises:
            PresentationError: If s is over another alphabet.
            TruncationError: If s has terms above max_degree.
        """
        if s.alphabet != self.generators:
            raise PresentationError(f"series over {s.alphabet} cannot be reduced in an algebra on {self.generators}")
        over = [w for w in s.coeffs if len(w) > self.max_degree]
        if over:
            raise TruncationError(f"terms of degree {max(len(w) for w in over)} exceed max_degree {self.max_degree}")
        by_degree: Dict[int, Vector] = {}
        for w, c in s.coeffs.items():
            by_degree.setdefault(len(w), {})[w] = c
        coeffs: Dict[Tuple[int, int], Fraction] = {}
        for d, vec in by_degree.items():
            index = {w: i for i, w in enumerate(self.basis[d])}
            for w, c in self._spaces[d].reduce(vec).items():
                coeffs[(d, index[w])] = c
        return QuotientElement(self, coeffs)

    def lift(self, q: "QuotientElement") -> LieSeries:
        return LieSeries(self.generators, self.max_degree,
                         {self.basis[d][i]: c for (d, i), c in q.coeffs.items()}, _trusted=True)

    def basis_element(self, degree: int, index: int) -> "QuotientElement":
        return QuotientElement(self, {(degree, index): Fraction(1)})

    def describe(self) -> Dict[str, object]:
        return {
            "generators": list(self.generators),
            "relations": [format_series(r) for r in self.relations],
            "max_degree": self.max_degree,
            "dimensions": self.dimensions(),
            "saturated": [self.saturated[d] for d in range(1, self.max_degree + 1)],
            "basis": {str(d): [format_word(w, self.generators) for w in self.basis[d]]
                      for d in range(1, self.max_degree + 1)},
        }


@dataclass(frozen=True, eq=False)
class QuotientElement:
    """Element of a presented algebra in reduced coordinates (degree, basis index) -> coefficient."""

    algebra: PresentedLieAlgebra
    coeffs: Mapping[Tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", {k: Fraction(v) for k, v in self.coeffs.items() if v})

    def _check(self, other: "QuotientElement") -> None:
        if other.algebra is not self.algebra:
            raise PresentationError("quotient elements live in different algebras")

    def __add__(self, other: "QuotientElement") -> "QuotientElement":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return QuotientElement(self.algebra, out)

    def __neg__(self) -> "QuotientElement":
        return QuotientElement(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "QuotientElement") -> "QuotientElement":
        return self + (-other)

    def __mul__(self, scalar) -> "QuotientElement":
        s = Fraction(scalar)
        return QuotientElement(self.algebra, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuotientElement):
            return NotImplemented
        return other.algebra is self.algebra and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.algebra), frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def bracket(self, other: "QuotientElement") -> "QuotientElement":
        self._check(other)
        return self.algebra.reduce(bracket(self.lift(), other.lift()))

    def lift(self) -> LieSeries:
        return self.algebra.lift(self)

    def __str__(self) -> str:
        return format_series(self.lift())

    def to_dict(self) -> Dict[str, object]:
        gens = self.algebra.generators
        return {
            "value": str(self),
            "terms": [{"degree": d, "index": i, "word": format_word(self.algebra.basis[d][i], gens),
                       "coeff": str(c)} for (d, i), c in sorted(self.coeffs.items())],
        }


def build(generators: Sequence[str], relations: Iterable[LieSeries], max_degree: int,
          progress: bool = False) -> PresentedLieAlgebra:
    """Compute per-degree ideal components and quotient bases up to `max_degree`.

    Args:
        generators: Generator names of the free Lie algebra.
        relations: Homogeneous relations over those generators; zero ones are dropped.
        max_degree: Top degree to compute.
        progress: Show a tqdm bar over degrees when stderr is a terminal.

    Returns:
        The presented algebra with a quotient basis in every degree up to max_degree.

    Raises:
        PresentationError: If max_degree < 1 or a relation is foreign or inhomogeneous.
    """
    generators = tuple(generators)
    if max_degree < 1:
        raise PresentationError("max_degree must be positive")
    rels: List[LieSeries] = []
    by_degree: Dict[int, List[LieSeries]] = {}
    for r in relations:
        if r.alphabet != generators:
            raise PresentationError(f"relation over {r.alphabet} uses foreign generators")
        if not r.is_homogeneous():
            raise PresentationError(f"relation {format_series(r)} is not homogeneous")
        if r.is_zero():
            continue
        r = r.with_max_degree(max_degree) if r.degrees()[0] <= max_degree else None
        if r is None:
            continue
        rels.append(r)
        by_degree.setdefault(r.degrees()[0], []).append(r)

    algebra = PresentedLieAlgebra(generators, tuple(rels), max_degree)
    gens = LieSeries.generators(generators, max_degree)
    k = len(generators)
    disable = not (progress and sys.stderr.isatty())
    for d in tqdm(range(1, max_degree + 1), desc="quotient degrees", disable=disable):
        space = _RowSpace()
        for r in by_degree.get(d, ()):
            space.add(r.coeffs)
        if d > 1:
            for row in list(algebra._spaces[d - 1].rows.values()):
                lower = LieSeries(generators, max_degree, row, _trusted=True)
                for g in gens:
                    space.add(bracket(g, lower).coeffs)
        saturated = True
        for e, group in by_degree.items():
            if e >= d:
                continue
            for b in lyndon_basis(k, d - e):
                free = LieSeries(generators, max_degree, {b: 1}, _trusted=True)
                for r in group:
                    if space.add(bracket(free, r).coeffs):
                        saturated = False
        algebra._spaces[d] = space
        algebra.saturated[d] = saturated
        algebra.basis[d] = tuple(w for w in lyndon_basis(k, d) if w not in space.rows)
        logger.debug(f"degree {d}: free {witt_dimension(k, d)}, ideal {space.rank}, "
                     f"quotient {len(algebra.basis[d])}, saturated {saturated}")
    logger.info(f"Built quotient on {k} generators up to degree {max_degree}: dims {algebra.dimensions()}")
    return algebra


def dk_generators(n: int) -> Tuple[str, ...]:
    if n < 2:
        raise PresentationError(f"Drinfeld–Kohno algebras need n >= 2, got {n}")
    if n > 9:
        raise PresentationError("generator names t_ij are single-digit; n <= 9 supported")
    return tuple(f"t{i}{j}" for i, j in combinations(range(1, n + 1), 2))


def dk_aliases(n: int) -> Dict[str, str]:
    """Map the names t_ji (i < j) onto their canonical form t_ij."""
    return {f"t{j}{i}": f"t{i}{j}" for i, j in combinations(range(1, n + 1), 2)}


def _normalized(s: LieSeries) -> LieSeries:
    lead = s.terms()[0][1]
    return s / lead


def dk_relations(n: int) -> List[LieSeries]:
    """Infinitesimal braid relations of t_n, deduplicated up to scalars.

    Args:
        n: Number of strands, 2 <= n <= 9.

    Returns:
        [t_ij, t_kl] for disjoint pairs and [t_ij, t_ik + t_jk] for k outside {i, j}.
    """
    gens = dk_generators(n)
    t = {}
    for i, j in combinations(range(1, n + 1), 2):
        t[(i, j)] = t[(j, i)] = LieSeries.generator(gens, 2, f"t{i}{j}")
    pairs = list(combinations(range(1, n + 1), 2))
    out: List[LieSeries] = []
    seen: Set[LieSeries] = set()

    def emit(r: LieSeries) -> None:
        if r.is_zero():
            return
        key = _normalized(r)
        if key not in seen:
            seen.add(key)
            out.append(r)

    for a, b in combinations(pairs, 2):
        if not set(a) & set(b):
            emit(bracket(t[a], t[b]))
    for i, j in pairs:
        for k in range(1, n + 1):
            if k not in (i, j):
                emit(bracket(t[(i, j)], t[(i, k)] + t[(k, j)]))
    return out


@lru_cache(maxsize=None)
def drinfeld_kohno(n: int, max_degree: int) -> PresentedLieAlgebra:
    """The algebra t_n truncated at `max_degree` (cached)."""
    rels = [r.with_max_degree(max_degree) for r in dk_relations(n)] if max_degree >= 2 else []
    return build(dk_generators(n), rels, max_degree)


def semidirect_dimensions(n: int, max_degree: int) -> List[int]:
    """dim t_n(d) counted as dim t_(n-1)(d) + dim FreeLie_(n-1)(d), starting from t_2."""
    if n < 2:
        raise PresentationError(f"Drinfeld–Kohno algebras need n >= 2, got {n}")
    dims = [1] + [0] * (max_degree - 1)
    for m in range(3, n + 1):
        dims = [dims[d - 1] + witt_dimension(m - 1, d) for d in range(1, max_degree + 1)]
    return dims


def pentagon_residual(phi: LieSeries, max_degree: int) -> QuotientElement:
    """Left minus right side of the pentagon equation for phi(x, y), reduced in t_4.

    Args:
        phi: Series over a two-letter alphabet.
        max_degree: Truncation of t_4; phi may not have terms above it.

    Returns:
        The residual in t_4, zero when phi satisfies the pentagon equation.

    Raises:
        LieAlgebraError: If phi is not over two letters.
        TruncationError: If phi has terms above max_degree.
    """
    if len(phi.alphabet) != 2:
        raise LieAlgebraError(f"pentagon residual needs a two-letter alphabet, got {phi.alphabet}")
    over = [w for w in phi.coeffs if len(w) > max_degree]
    if over:
        raise TruncationError(f"phi has terms of degree {max(len(w) for w in over)} above {max_degree}")
    t4 = drinfeld_kohno(4, max_degree)
    t12, t13, t14, t23, t24, t34 = LieSeries.generators(t4.generators, max_degree)
    a, b = phi.alphabet

    def ev(u: LieSeries, v: LieSeries) -> LieSeries:
        return substitute(phi, {a: u, b: v})

    lhs = ev(t12, t23 + t24) + ev(t13 + t23, t34)
    rhs = ev(t23, t34) + ev(t12 + t13, t24 + t34) + ev(t12, t23)
    return t4.reduce(lhs - rhs)
