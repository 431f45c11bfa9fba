"""
Exact arithmetic in the degree-truncated free Lie algebra.

Elements are `LieSeries`: finite linear combinations, with `Fraction`
coefficients, of Lyndon-basis elements over an ordered alphabet, cut off
above a fixed maximal degree.  The truncation order is part of the
value; combining series with different alphabets or truncations is an
error, never an implicit coercion.

Brackets of basis elements are computed by expanding the standard
bracketings into the free associative algebra and reading off Lyndon
coordinates through the triangularity of the basis: the bracketing of a
Lyndon word w is w plus lexicographically larger words, so the smallest
word of any Lie polynomial is Lyndon and carries its coordinate.
"""
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import divisors
from sympy.ntheory import mobius

from .utils import get_logger

logger = get_logger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]


class LieAlgebraError(ValueError):
    """Alphabet or truncation mismatch, missing image or invalid word."""


def is_lyndon(letters: Sequence[int]) -> bool:
    """True iff the word is strictly smaller than all its proper rotations."""
    w = tuple(letters)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def _factorize(letters: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    # v is the longest proper Lyndon suffix
    if len(letters) < 2:
        return None
    for i in range(1, len(letters)):
        if is_lyndon(letters[i:]):
            return letters[:i], letters[i:]
    raise LieAlgebraError(f"{letters} has no proper Lyndon suffix")


class LyndonWord(tuple):
    """A Lyndon word, stored as the tuple of its generator indices."""

    __slots__ = ()

    @classmethod
    def checked(cls, letters: Iterable[int]) -> "LyndonWord":
        w = tuple(int(a) for a in letters)
        if not is_lyndon(w):
            raise LieAlgebraError(f"{w} is not a Lyndon word")
        return cls(w)

    @property
    def letters(self) -> Tuple[int, ...]:
        return tuple(self)

    @property
    def degree(self) -> int:
        return len(self)

    @property
    def standard_factorization(self) -> Optional[Tuple["LyndonWord", "LyndonWord"]]:
        f = _factorize(tuple(self))
        if f is None:
            return None
        return LyndonWord(f[0]), LyndonWord(f[1])


def _duval(alphabet_size: int, max_length: int) -> Iterator[Tuple[int, ...]]:
    """All Lyndon words of length <= max_length, in lexicographic order."""
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[-m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()


@lru_cache(maxsize=None)
def lyndon_basis(alphabet_size: int, degree: int) -> Tuple[LyndonWord, ...]:
    """Lyndon words of exactly `degree` letters, sorted lexicographically."""
    if alphabet_size < 1 or degree < 1:
        raise LieAlgebraError("alphabet size and degree must be positive")
    return tuple(LyndonWord(w) for w in _duval(alphabet_size, degree) if len(w) == degree)


def lyndon_counts(alphabet_size: int, max_degree: int) -> List[int]:
    """Number of Lyndon words of each length 1..max_degree, counted in one pass."""
    counts = [0] * (max_degree + 1)
    for w in _duval(alphabet_size, max_degree):
        counts[len(w)] += 1
    return counts[1:]


def witt_dimension(alphabet_size: int, degree: int) -> int:
    """Dimension of the degree-d component of the free Lie algebra on k letters."""
    total = sum(mobius(e) * alphabet_size ** (degree // e) for e in divisors(degree))
    return int(total) // degree


@lru_cache(maxsize=None)
def _expand(letters: Tuple[int, ...]) -> Dict[Tuple[int, ...], int]:
    # never mutated by callers
    f = _factorize(letters)
    if f is None:
        return {letters: 1}
    return _commutator(_expand(f[0]), _expand(f[1]))


def _commutator(p: Mapping[Tuple[int, ...], int], q: Mapping[Tuple[int, ...], int]) -> Dict[Tuple[int, ...], int]:
    out: Dict[Tuple[int, ...], int] = defaultdict(int)
    for a, ca in p.items():
        for b, cb in q.items():
            out[a + b] += ca * cb
            out[b + a] -= ca * cb
    return {w: c for w, c in out.items() if c}


def _lyndon_coordinates(poly: Mapping[Tuple[int, ...], int]) -> Dict[LyndonWord, int]:
    poly = dict(poly)
    coords: Dict[LyndonWord, int] = {}
    while poly:
        w = min(poly)
        c = poly[w]
        if not is_lyndon(w):
            raise AssertionError(f"smallest word {w} of a Lie polynomial is not Lyndon")
        coords[LyndonWord(w)] = c
        for v, cv in _expand(w).items():
            nv = poly.get(v, 0) - c * cv
            if nv:
                poly[v] = nv
            else:
                poly.pop(v, None)
    return coords


@lru_cache(maxsize=None)
def _bracket_words(u: Tuple[int, ...], v: Tuple[int, ...]) -> Tuple[Tuple[LyndonWord, int], ...]:
    """Lyndon coordinates of [P_u, P_v] for Lyndon words u, v."""
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in _bracket_words(v, u))
    uv = u + v
    if _factorize(uv) == (u, v) and is_lyndon(uv):
        return ((LyndonWord(uv), 1),)
    return tuple(_lyndon_coordinates(_commutator(_expand(u), _expand(v))).items())


class LieSeries:
    """Truncated element of the free Lie algebra in the Lyndon basis.

    Values are immutable: every operation returns a new series.
    """

    __slots__ = ("alphabet", "max_degree", "_coeffs")

    def __init__(self, alphabet: Sequence[str], max_degree: int,
                 coeffs: Optional[Mapping[Sequence[int], Scalar]] = None, _trusted: bool = False):
        alphabet = tuple(alphabet)
        if not _trusted:
            if not alphabet or len(set(alphabet)) != len(alphabet):
                raise LieAlgebraError(f"alphabet must be non-empty with distinct names, got {alphabet}")
            if int(max_degree) != max_degree or max_degree < 1:
                raise LieAlgebraError(f"max_degree must be a positive integer, got {max_degree}")
        self.alphabet = alphabet
        self.max_degree = int(max_degree)
        clean: Dict[LyndonWord, Fraction] = {}
        for w, c in (coeffs or {}).items():
            if _trusted:
                word = w
            else:
                word = LyndonWord.checked(w)
                if any(a < 0 or a >= len(alphabet) for a in word):
                    raise LieAlgebraError(f"word {tuple(word)} uses letters outside the alphabet")
            if len(word) > self.max_degree:
                continue
            c = Fraction(c)
            if c:
                clean[word] = c
        self._coeffs = clean

    # construction

    @classmethod
    def zero(cls, alphabet: Sequence[str], max_degree: int) -> "LieSeries":
        return cls(alphabet, max_degree)

    @classmethod
    def generator(cls, alphabet: Sequence[str], max_degree: int, name: str) -> "LieSeries":
        alphabet = tuple(alphabet)
        if name not in alphabet:
            raise LieAlgebraError(f"unknown generator {name!r}; alphabet is {alphabet}")
        return cls(alphabet, max_degree, {(alphabet.index(name),): 1})

    @classmethod
    def generators(cls, alphabet: Sequence[str], max_degree: int) -> Tuple["LieSeries", ...]:
        return tuple(cls.generator(alphabet, max_degree, a) for a in alphabet)

    def _new(self, coeffs: Mapping[LyndonWord, Scalar]) -> "LieSeries":
        return LieSeries(self.alphabet, self.max_degree, coeffs, _trusted=True)

    # accessors

    @property
    def coeffs(self) -> Mapping[LyndonWord, Fraction]:
        return MappingProxyType(self._coeffs)

    def coefficient(self, word: Sequence[int]) -> Fraction:
        return self._coeffs.get(LyndonWord(tuple(word)), Fraction(0))

    def terms(self) -> List[Tuple[LyndonWord, Fraction]]:
        """Terms sorted by (degree, word)."""
        return sorted(self._coeffs.items(), key=lambda t: (len(t[0]), t[0]))

    def degrees(self) -> List[int]:
        return sorted({len(w) for w in self._coeffs})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def compatible(self, other: "LieSeries") -> bool:
        return self.alphabet == other.alphabet and self.max_degree == other.max_degree

    def _check(self, other: "LieSeries") -> None:
        if not isinstance(other, LieSeries):
            raise LieAlgebraError(f"expected a LieSeries, got {type(other).__name__}")
        if self.alphabet != other.alphabet:
            raise LieAlgebraError(f"alphabet mismatch: {self.alphabet} vs {other.alphabet}")
        if self.max_degree != other.max_degree:
            raise LieAlgebraError(f"truncation mismatch: {self.max_degree} vs {other.max_degree}")

    # linear structure

    def __add__(self, other: "LieSeries") -> "LieSeries":
        self._check(other)
        out = dict(self._coeffs)
        for w, c in other._coeffs.items():
            out[w] = out.get(w, 0) + c
        return self._new(out)

    def __sub__(self, other: "LieSeries") -> "LieSeries":
        return self + (-other)

    def __neg__(self) -> "LieSeries":
        return self._new({w: -c for w, c in self._coeffs.items()})

    def __mul__(self, scalar: Scalar) -> "LieSeries":
        if isinstance(scalar, LieSeries):
            return NotImplemented
        s = Fraction(scalar)
        return self._new({w: s * c for w, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "LieSeries":
        return self * (1 / Fraction(scalar))

    def homogeneous_component(self, degree: int) -> "LieSeries":
        return self._new({w: c for w, c in self._coeffs.items() if len(w) == degree})

    def truncate(self, degree: int) -> "LieSeries":
        """Drop terms above `degree`, keeping the truncation order."""
        return self._new({w: c for w, c in self._coeffs.items() if len(w) <= degree})

    def with_max_degree(self, max_degree: int) -> "LieSeries":
        """Re-home the series in another truncation, dropping terms above it."""
        return LieSeries(self.alphabet, max_degree, self._coeffs, _trusted=True)

    # comparisons

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieSeries):
            return NotImplemented
        return self.compatible(other) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.alphabet, self.max_degree, frozenset(self._coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __repr__(self) -> str:
        from .lie_format import format_series
        return f"LieSeries({format_series(self)!r}, max_degree={self.max_degree})"


def bracket(a: LieSeries, b: LieSeries) -> LieSeries:
    """Lie bracket [a, b], truncated at the common max_degree."""
    a._check(b)
    top = a.max_degree
    out: Dict[LyndonWord, Fraction] = defaultdict(Fraction)
    for u, cu in a._coeffs.items():
        for v, cv in b._coeffs.items():
            if len(u) + len(v) > top:
                continue
            for w, c in _bracket_words(u, v):
                out[w] += cu * cv * c
    return a._new(out)


def substitute(phi: LieSeries, images: Mapping[str, LieSeries]) -> LieSeries:
    """Apply the Lie homomorphism sending each generator of phi to its image."""
    missing = [g for g in phi.alphabet if g not in images]
    if missing:
        raise LieAlgebraError(f"no image given for generators {missing}")
    targets = [images[g] for g in phi.alphabet]
    first = targets[0]
    for t in targets[1:]:
        if not first.compatible(t):
            raise LieAlgebraError("images must share one alphabet and max_degree")
    memo: Dict[LyndonWord, LieSeries] = {}

    def image(word: LyndonWord) -> LieSeries:
        if word not in memo:
            f = word.standard_factorization
            if f is None:
                memo[word] = targets[word[0]]
            else:
                memo[word] = bracket(image(f[0]), image(f[1]))
        return memo[word]

    out: Dict[LyndonWord, Fraction] = defaultdict(Fraction)
    for w, c in phi.terms():
        # images of degree-1 letters have degree >= 1, so longer words only grow
        if len(w) > first.max_degree:
            continue
        for v, cv in image(w)._coeffs.items():
            out[v] += c * cv
    return first._new(out)


def permute_generators(phi: LieSeries, mapping: Mapping[str, str]) -> LieSeries:
    """Substitute generator names by generator names of the same alphabet."""
    gens = dict(zip(phi.alphabet, LieSeries.generators(phi.alphabet, phi.max_degree)))
    return substitute(phi, {g: gens[mapping.get(g, g)] for g in phi.alphabet})


def add(a: LieSeries, b: LieSeries) -> LieSeries:
    return a + b


def scale(c: Scalar, s: LieSeries) -> LieSeries:
    return s * c


def homogeneous_component(s: LieSeries, degree: int) -> LieSeries:
    return s.homogeneous_component(degree)


def equals(a: LieSeries, b: LieSeries) -> bool:
    """Exact equality of two compatible series; raises on mismatch."""
    a._check(b)
    return a == b


def random_series(alphabet: Sequence[str], max_degree: int, rng: np.random.Generator,
                  degrees: Optional[Iterable[int]] = None, density: float = 0.5, bound: int = 3) -> LieSeries:
    """Random series with small rational coefficients on a random subset of basis words."""
    coeffs: Dict[LyndonWord, Fraction] = {}
    for d in (degrees if degrees is not None else range(1, max_degree + 1)):
        for w in lyndon_basis(len(alphabet), d):
            if rng.random() < density:
                coeffs[w] = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
    return LieSeries(alphabet, max_degree, coeffs, _trusted=True)


def linear_combination(terms: Iterable[Tuple[Scalar, LieSeries]], alphabet: Sequence[str], max_degree: int) -> LieSeries:
    out = LieSeries.zero(alphabet, max_degree)
    for c, s in terms:
        out = out + s * c
    return out
