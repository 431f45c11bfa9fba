"""
Finite groups, table-backed n-ary maps and binary pairings.

Groups are stored as a list of element labels plus a numpy Cayley table on
element indices; everything downstream works on indices and converts back
to labels only for reports.  Maps G_s^n -> G_t are n-dimensional index
arrays, so precomposition with a self-map of G_s^n is a single fancy-index
operation and exhaustive checks over the whole domain are array
comparisons.

Group specs::

    Z6          cyclic group of order 6, labels 0..5
    Z3^2        (Z3)^2, labels (a, b)
    Z2xZ4       direct product, labels (a, b)
    S3          symmetric group on {0,1,2}, labels are permutation tuples
"""
import re
from functools import lru_cache, reduce
from itertools import permutations, product
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from .utils import get_logger

logger = get_logger(__name__)

Coords = Tuple[np.ndarray, ...]

MAX_SYMMETRIC_DEGREE = 5


class GroupTableError(ValueError):
    """Table fails a group axiom, or the spec string is not understood."""


class MapTableError(ValueError):
    """Map table is not total, has out-of-range values or fails a declared symmetry."""


class PairingError(ValueError):
    """Pairing lacks a required property."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class FiniteGroup:
    """Cayley-table group on element indices 0..order-1."""

    def __init__(self, name: str, labels: Sequence[Hashable], table: np.ndarray, factors: Sequence[str] = ()):
        self.name = name
        self.labels = tuple(labels)
        self.factors = tuple(factors) or (name,)
        n = len(self.labels)
        table = np.asarray(table)
        if table.shape != (n, n):
            raise GroupTableError(f"{name}: table shape {table.shape} does not match {n} labels")
        if table.min() < 0 or table.max() >= n:
            raise GroupTableError(f"{name}: table values out of range")
        self.table = _readonly(table)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

        T = self.table
        idx = np.arange(n)
        left = T[T[:, :, None], idx[None, None, :]]
        right = T[idx[:, None, None], T[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = bad[0]
            raise GroupTableError(f"{name}: not associative at {self.label(a), self.label(b), self.label(c)}")
        units = [e for e in range(n) if (T[e] == idx).all() and (T[:, e] == idx).all()]
        if not units:
            raise GroupTableError(f"{name}: no identity element")
        self.identity = units[0]
        inverse = np.full(n, -1)
        for a in range(n):
            hits = np.flatnonzero(T[a] == self.identity)
            if len(hits) != 1 or T[hits[0], a] != self.identity:
                raise GroupTableError(f"{name}: element {self.label(a)} has no two-sided inverse")
            inverse[a] = hits[0]
        self.inverse = _readonly(inverse)
        self.abelian = bool((T == T.T).all())
        self._powers: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def order(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order}, abelian={self.abelian})"

    def label(self, i: int) -> Hashable:
        return self.labels[int(i)]

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GroupTableError(f"{label!r} is not an element of {self.name}") from None

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inverse[a]

    def prod(self, *items):
        """Left-to-right product of index arrays (or ints)."""
        return reduce(lambda u, v: self.table[u, v], items)

    def sum(self, items: Sequence[Any]):
        if not items:
            return self.identity
        return self.prod(*items)

    @property
    def exponent(self) -> int:
        return self._power_table().shape[0]

    def _power_table(self) -> np.ndarray:
        if self._powers is None:
            rows = [np.full(self.order, self.identity)]
            cur = np.arange(self.order)
            while not (cur == self.identity).all():
                rows.append(cur)
                cur = self.table[cur, np.arange(self.order)]
            self._powers = _readonly(np.stack(rows))
        return self._powers

    def power(self, a, k: int):
        """a^k (k·a in additive notation) for any integer k."""
        P = self._power_table()
        return P[k % P.shape[0]][a]

    def is_bijection(self, values: np.ndarray) -> bool:
        return sorted(np.asarray(values).ravel().tolist()) == list(range(self.order))


def cyclic_group(m: int) -> FiniteGroup:
    if m < 1:
        raise GroupTableError(f"Z{m}: order must be positive")
    idx = np.arange(m)
    return FiniteGroup(f"Z{m}", list(range(m)), (idx[:, None] + idx[None, :]) % m)


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise GroupTableError(f"S{n}: supported degrees are 1..{MAX_SYMMETRIC_DEGREE}")
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = np.array([[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms])
    return FiniteGroup(f"S{n}", perms, table)


def direct_product(groups: Sequence[FiniteGroup], name: Optional[str] = None) -> FiniteGroup:
    if len(groups) == 1:
        return groups[0]
    sizes = tuple(g.order for g in groups)
    n = int(np.prod(sizes))
    coords = np.unravel_index(np.arange(n), sizes)
    parts = [g.table[c[:, None], c[None, :]] for g, c in zip(groups, coords)]
    table = np.ravel_multi_index(parts, sizes)
    labels = [tuple(g.labels[c[i]] for g, c in zip(groups, coords)) for i in range(n)]
    factors = tuple(f for g in groups for f in g.factors)
    return FiniteGroup(name or "x".join(g.name for g in groups), labels, table, factors)


_FACTOR = re.compile(r"^(Z|S)(\d+)(?:\^(\d+))?$")


@lru_cache(maxsize=None)
def group_from_spec(spec: str) -> FiniteGroup:
    """Parse a group spec such as "Z5", "Z3^2", "Z2xZ4" or "S3"."""
    spec = spec.strip()
    basic: List[FiniteGroup] = []
    for token in spec.split("x"):
        m = _FACTOR.match(token.strip())
        if not m:
            raise GroupTableError(f"cannot parse group spec {spec!r} at {token!r}")
        kind, size, power = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if power < 1:
            raise GroupTableError(f"{token}: exponent must be positive")
        g = cyclic_group(size) if kind == "Z" else symmetric_group(size)
        basic.extend([g] * power)
    group = direct_product(basic, name=spec)
    logger.debug(f"Parsed group spec {spec!r}: {group}")
    return group


def domain_coords(G: FiniteGroup, n: int) -> Coords:
    """Coordinate arrays of G^n; component k holds x_k at every point."""
    return tuple(np.indices((G.order,) * n))


def compose_maps(outer: Coords, inner: Coords) -> Coords:
    """Coordinates of outer∘inner for self-maps of G^n."""
    return tuple(o[inner] for o in outer)


def maps_equal(F: Coords, E: Coords) -> np.ndarray:
    """Boolean array of points where two self-maps agree."""
    return np.logical_and.reduce([f == e for f, e in zip(F, E)])


def point_labels(G: FiniteGroup, point: Sequence[int]) -> List[Any]:
    return [G.label(i) for i in point]


class NaryMap:
    """Total map G_s^n -> G_t stored as an n-dimensional index array."""

    def __init__(self, source: FiniteGroup, arity: int, target: FiniteGroup, table: np.ndarray,
                 symmetric: bool = False, skew: bool = False):
        self.source = source
        self.arity = int(arity)
        self.target = target
        table = np.asarray(table)
        shape = (source.order,) * self.arity
        if table.shape != shape:
            raise MapTableError(f"table shape {table.shape} is not total on {source.name}^{arity}")
        if table.size and (table.min() < 0 or table.max() >= target.order):
            raise MapTableError(f"table values fall outside {target.name}")
        self.table = _readonly(table)
        if symmetric and not self.is_symmetric():
            raise MapTableError("map declared symmetric is not")
        if skew and not self.is_skew():
            raise MapTableError("map declared skew-symmetric is not")
        self.symmetric = symmetric
        self.skew = skew

    # construction

    @classmethod
    def from_function(cls, source: FiniteGroup, arity: int, target: FiniteGroup,
                      fn: Callable[..., int]) -> "NaryMap":
        table = np.zeros((source.order,) * arity, dtype=np.int64)
        for point in product(range(source.order), repeat=arity):
            table[point] = fn(*point)
        return cls(source, arity, target, table)

    @classmethod
    def random(cls, source: FiniteGroup, arity: int, target: FiniteGroup, rng: np.random.Generator) -> "NaryMap":
        return cls(source, arity, target, rng.integers(0, target.order, size=(source.order,) * arity))

    @classmethod
    def constant(cls, source: FiniteGroup, arity: int, target: FiniteGroup, value: int) -> "NaryMap":
        return cls(source, arity, target, np.full((source.order,) * arity, value))

    @classmethod
    def identity_map(cls, source: FiniteGroup, arity: int, target: FiniteGroup) -> "NaryMap":
        return cls.constant(source, arity, target, target.identity)

    def like(self, table: np.ndarray) -> "NaryMap":
        return NaryMap(self.source, self.arity, self.target, table)

    # symmetry

    def _transposed(self, perm: Sequence[int]) -> np.ndarray:
        return np.transpose(self.table, perm)

    def _adjacent_swaps(self) -> List[List[int]]:
        out = []
        for i in range(self.arity - 1):
            perm = list(range(self.arity))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            out.append(perm)
        return out

    def is_symmetric(self) -> bool:
        return all((self._transposed(p) == self.table).all() for p in self._adjacent_swaps())

    def is_skew(self) -> bool:
        """phi∘sigma = phi^{sign sigma}, checked on adjacent transpositions."""
        inv = self.target.inverse[self.table]
        return all((self._transposed(p) == inv).all() for p in self._adjacent_swaps())

    def symmetrize(self) -> "NaryMap":
        """Pointwise product of phi∘sigma over all slot permutations (abelian target)."""
        self._need_abelian_target("symmetrize")
        tabs = [self._transposed(p) for p in permutations(range(self.arity))]
        return NaryMap(self.source, self.arity, self.target, self.target.prod(*tabs), symmetric=True)

    def antisymmetrize(self) -> "NaryMap":
        self._need_abelian_target("antisymmetrize")
        tabs = []
        for p in permutations(range(self.arity)):
            t = self._transposed(p)
            tabs.append(t if _sign(p) > 0 else self.target.inverse[t])
        return NaryMap(self.source, self.arity, self.target, self.target.prod(*tabs), skew=True)

    def _need_abelian_target(self, what: str) -> None:
        if not self.target.abelian:
            raise MapTableError(f"{what} needs an abelian target, got {self.target.name}")

    # pointwise structure

    def __mul__(self, other: "NaryMap") -> "NaryMap":
        return self.like(self.target.table[self.table, other.table])

    def inverse(self) -> "NaryMap":
        return self.like(self.target.inverse[self.table])

    def power(self, k: int) -> "NaryMap":
        return self.like(self.target.power(self.table, k))

    def precompose(self, coords: Coords) -> "NaryMap":
        """phi∘F for a self-map F of the domain given by coordinate arrays."""
        return self.like(self.table[tuple(coords)])

    def substitute_slot(self, slot: int, values: np.ndarray) -> "NaryMap":
        """Replace argument `slot` by an array of values over the domain."""
        coords = list(domain_coords(self.source, self.arity))
        coords[slot] = values
        return self.precompose(tuple(coords))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NaryMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.arity == other.arity and np.array_equal(self.table, other.table))

    __hash__ = None

    def is_identity(self) -> bool:
        return bool((self.table == self.target.identity).all())

    def mismatches(self, other: "NaryMap") -> np.ndarray:
        """Domain points (as index rows) where the two maps differ."""
        return np.argwhere(self.table != other.table)

    def __repr__(self) -> str:
        return f"NaryMap({self.source.name}^{self.arity} -> {self.target.name})"


def _sign(perm: Sequence[int]) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


class BinaryPairing:
    """A map G x G -> G with its properties computed from the table.

    Flags are never taken on trust: bihomomorphism, skew-symmetry,
    alternation, symmetry and the Jacobi identity are all evaluated
    exhaustively when the pairing is built.
    """

    def __init__(self, name: str, group: FiniteGroup, table: np.ndarray):
        self.name = name
        self.group = group
        self.map = NaryMap(group, 2, group, table)
        G, P = group, self.map.table
        a, b, c = np.indices((G.order,) * 3)
        left = (P[G.table[a, b], c] == G.table[P[a, c], P[b, c]]).all()
        right = (P[a, G.table[b, c]] == G.table[P[a, b], P[a, c]]).all()
        self.bihomomorphic = bool(left and right)
        self.skew = bool((P.T == G.inverse[P]).all())
        self.symmetric = bool((P == P.T).all())
        self.alternating = bool((np.diagonal(P) == G.identity).all())
        self.jacobi = bool(G.abelian and (G.prod(P[a, P[b, c]], P[b, P[c, a]], P[c, P[a, b]]) == G.identity).all())

    @property
    def table(self) -> np.ndarray:
        return self.map.table

    @property
    def is_lie_bracket(self) -> bool:
        return self.bihomomorphic and self.alternating and self.jacobi

    def flags(self) -> Dict[str, bool]:
        return {"bihomomorphic": self.bihomomorphic, "skew": self.skew, "symmetric": self.symmetric,
                "alternating": self.alternating, "jacobi": self.jacobi}

    def require(self, *flags: str) -> "BinaryPairing":
        missing = [f for f in flags if not getattr(self, f)]
        if missing:
            raise PairingError(f"pairing {self.name!r} on {self.group.name} is not {', '.join(missing)}"
                               f"{self._witness(missing[0])}")
        return self

    def _witness(self, flag: str) -> str:
        G, P = self.group, self.table
        if flag == "bihomomorphic":
            for x, y, z in product(range(G.order), repeat=3):
                if P[G.table[x, y], z] != G.table[P[x, z], P[y, z]] or P[x, G.table[y, z]] != G.table[P[x, y], P[x, z]]:
                    return f"; fails at {G.label(x), G.label(y), G.label(z)}"
        if flag == "skew":
            x, y = np.argwhere(P.T != G.inverse[P])[0]
            return f"; fails at {G.label(x), G.label(y)}"
        if flag == "alternating":
            x = np.flatnonzero(np.diagonal(P) != G.identity)[0]
            return f"; [a,a] != e at a={G.label(x)}"
        return ""

    def apply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Pointwise [u, v] for index arrays of equal shape."""
        return self.table[u, v]

    def __repr__(self) -> str:
        return f"BinaryPairing({self.name} on {self.group.name})"


def _moduli(G: FiniteGroup, kind: str, length: int) -> int:
    ms = set()
    for f in G.factors:
        m = _FACTOR.match(f)
        if not m or m.group(1) != "Z" or m.group(3):
            raise PairingError(f"{kind} pairing needs a product of cyclic groups, got {G.name}")
        ms.add(int(m.group(2)))
    if len(G.factors) != length or len(ms) != 1:
        raise PairingError(f"{kind} pairing needs (Z_m)^{length}, got {G.name}")
    return ms.pop()


def _from_labels(name: str, G: FiniteGroup, fn: Callable[[Any, Any], Any]) -> BinaryPairing:
    table = np.array([[G.index(fn(a, b)) for b in G.labels] for a in G.labels])
    return BinaryPairing(name, G, table)


def _ring(G: FiniteGroup) -> BinaryPairing:
    m = _moduli(G, "ring", 1)
    return _from_labels("ring", G, lambda a, b: (a * b) % m)


def _heisenberg(G: FiniteGroup) -> BinaryPairing:
    m = _moduli(G, "heisenberg", 3)
    return _from_labels("heisenberg", G, lambda a, b: (0, 0, (a[0] * b[1] - a[1] * b[0]) % m))


def _cross(G: FiniteGroup) -> BinaryPairing:
    m = _moduli(G, "cross", 3)
    return _from_labels("cross", G, lambda a, b: ((a[1] * b[2] - a[2] * b[1]) % m,
                                                   (a[2] * b[0] - a[0] * b[2]) % m,
                                                   (a[0] * b[1] - a[1] * b[0]) % m))


def _det(G: FiniteGroup) -> BinaryPairing:
    m = _moduli(G, "det", 2)
    return _from_labels("det", G, lambda a, b: (0, (a[0] * b[1] - a[1] * b[0]) % m))


def _commutator(G: FiniteGroup) -> BinaryPairing:
    T, inv = G.table, G.inverse
    a, b = np.indices((G.order, G.order))
    return BinaryPairing("commutator", G, T[T[T[a, b], inv[a]], inv[b]])


def _z2z4(G: FiniteGroup) -> BinaryPairing:
    if G.factors != ("Z2", "Z4"):
        raise PairingError(f"z2z4 pairing lives on Z2xZ4, got {G.name}")
    return _from_labels("z2z4", G, lambda a, b: (0, (2 * (a[0] * b[1] - a[1] * b[0])) % 4))


def _zero(G: FiniteGroup) -> BinaryPairing:
    return BinaryPairing("zero", G, np.full((G.order, G.order), G.identity))


PAIRINGS: Dict[str, Callable[[FiniteGroup], BinaryPairing]] = {
    "zero": _zero,
    "ring": _ring,
    "heisenberg": _heisenberg,
    "cross": _cross,
    "det": _det,
    "commutator": _commutator,
    "z2z4": _z2z4,
}

# Group each catalog pairing is shipped on when none is given.
DEFAULT_PAIRING_GROUPS = {
    "zero": "Z3",
    "ring": "Z3",
    "heisenberg": "Z3^3",
    "cross": "Z5^3",
    "det": "Z3^2",
    "commutator": "S3",
    "z2z4": "Z2xZ4",
}


def make_pairing(name: str, group: Optional[FiniteGroup] = None) -> BinaryPairing:
    """Build a catalog pairing on `group` (or on its default group)."""
    if name not in PAIRINGS:
        raise PairingError(f"unknown pairing {name!r}; choose from {sorted(PAIRINGS)}")
    G = group if group is not None else group_from_spec(DEFAULT_PAIRING_GROUPS[name])
    pairing = PAIRINGS[name](G)
    logger.debug(f"Pairing {name} on {G.name}: {pairing.flags()}")
    return pairing
