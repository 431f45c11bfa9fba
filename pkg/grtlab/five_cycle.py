"""
The birational five-cycle f(x, y) = (y, (1-x)/(1-xy)) and the Bloch-Wigner
five-term relation.

Over a prime field the domain F_p^2 minus the exceptional set
I = {x or y in {0, 1}} ∪ {xy = 1} is finite, so closure, f^5 = id and the
closed forms of the iterates are checked at every point.  Over the complex
numbers the same orbit carries the five-term relation of the Bloch-Wigner
function D, checked numerically on quasi-random samples.
"""
import cmath
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.stats import qmc
from sympy import bernoulli, factorial, isprime
from tqdm import tqdm

from .finite_groups import FiniteGroup, group_from_spec
from .reports import VerificationReport, certify, merge_reports, report_from_mask
from .utils import get_logger, make_rng

logger = get_logger(__name__)

ORACLE_DPS = 30
# D at exp(i*pi/3), the maximum of the Bloch-Wigner function
BLOCH_WIGNER_MAX = 1.0149416064096536


class PrimeError(ValueError):
    """Modulus is not a prime >= 5."""


class ExceptionalSetError(ValueError):
    """Point lies on (or, for complex samples, too close to) the exceptional set."""


class NotInvertibleError(ValueError):
    """5 is not invertible in the coefficient group."""


def _check_prime(p: int) -> int:
    if not isprime(p) or p < 5:
        raise PrimeError(f"{p} is not a prime >= 5; the domain is empty or ill-defined")
    return p


# prime fields

@dataclass(frozen=True)
class PrimeFieldPair:
    """A point (x, y) of F_p^2 outside the exceptional set."""

    p: int
    x: int
    y: int

    def __post_init__(self):
        object.__setattr__(self, "x", self.x % self.p)
        object.__setattr__(self, "y", self.y % self.p)
        x, y = self.x, self.y
        if x in (0, 1) or y in (0, 1) or (x * y) % self.p == 1:
            raise ExceptionalSetError(f"({x}, {y}) lies in the exceptional set mod {self.p}")

    def apply(self) -> "PrimeFieldPair":
        p, x, y = self.p, self.x, self.y
        return PrimeFieldPair(p, y, (1 - x) * pow(1 - x * y, -1, p))

    def as_tuple(self) -> Tuple[int, int]:
        return self.x, self.y


def fp_iterate(p: int, x: int, y: int, k: int) -> Tuple[int, int]:
    """f^k(x, y) over F_p."""
    point = PrimeFieldPair(_check_prime(p), x, y)
    for _ in range(k % 5):
        point = point.apply()
    return point.as_tuple()


@dataclass
class FiveCycleDomain:
    """The finite domain F_p^2 minus I, with f as a permutation of point indices."""

    p: int
    xs: np.ndarray
    ys: np.ndarray
    perm: np.ndarray
    closed: np.ndarray

    @property
    def size(self) -> int:
        return len(self.xs)

    def power(self, k: int) -> np.ndarray:
        out = np.arange(self.size)
        for _ in range(k):
            out = self.perm[out]
        return out

    def index_of(self, x: int, y: int) -> int:
        hits = np.flatnonzero((self.xs == x % self.p) & (self.ys == y % self.p))
        if not len(hits):
            raise ExceptionalSetError(f"({x}, {y}) is not in the domain mod {self.p}")
        return int(hits[0])


def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    inv[1:] = [pow(a, -1, p) for a in range(1, p)]
    return inv


@lru_cache(maxsize=None)
def fp_domain(p: int) -> FiveCycleDomain:
    """Enumerate F_p^2 minus I; the domain has (p-2)(p-3) points."""
    _check_prime(p)
    inv = _inverses(p)
    x, y = (a.ravel() for a in np.indices((p, p)))
    keep = (x > 1) & (y > 1) & ((x * y) % p != 1)
    xs, ys = x[keep], y[keep]
    fx = ys
    fy = ((1 - xs) * inv[(1 - xs * ys) % p]) % p
    code = np.full(p * p, -1)
    code[xs * p + ys] = np.arange(len(xs))
    target = code[fx * p + fy]
    closed = target >= 0
    perm = np.where(closed, target, np.arange(len(xs)))
    logger.debug(f"F_{p} domain: {len(xs)} points")
    return FiveCycleDomain(p, xs, ys, perm, closed)


def _closed_forms(dom: FiveCycleDomain) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
    """The displayed iterates f^2, f^3, f^4 as coordinate arrays."""
    p, x, y = dom.p, dom.xs, dom.ys
    inv = _inverses(p)
    w = (1 - x * y) % p
    u = ((1 - x) * inv[w]) % p
    v = ((1 - y) * inv[w]) % p
    return {2: (u, w), 3: (w, v), 4: (v, x % p)}


def fixed_points(p: int) -> List[Tuple[int, int]]:
    """Points (x, x) with x^2 + x - 1 = 0 mod p; these are exactly the fixed points of f."""
    _check_prime(p)
    return [(x, x) for x in range(2, p) if (x * x + x - 1) % p == 0]


def fp_cycle(p: int, strict: bool = True) -> VerificationReport:
    """Exhaustive certificate of closure, f^5 = id and the iterate formulas over F_p.

    Args:
        p: Prime >= 5.
        strict: Raise VerificationFailure when a check fails.

    Returns:
        The merged report; its extra holds the domain size, the orbit census
        by orbit length and the fixed points.

    Raises:
        PrimeError: If p is not a prime >= 5.
    """
    dom = fp_domain(p)

    def describe(point: Sequence[int]) -> Tuple[int, int]:
        i = point[0]
        return int(dom.xs[i]), int(dom.ys[i])

    name = f"F{p}"
    checks = [
        report_from_mask("closure", name, 2, dom.closed, describe),
        report_from_mask("f^5=id", name, 2, dom.power(5) == np.arange(dom.size), describe),
    ]
    for k, (cx, cy) in _closed_forms(dom).items():
        idx = dom.power(k)
        ok = (dom.xs[idx] == cx) & (dom.ys[idx] == cy)
        checks.append(report_from_mask(f"f^{k} formula", name, 2, ok, describe))

    fixed = dom.perm == np.arange(dom.size)
    sizes = np.where(fixed, 1, 5)
    sizes[~fixed & (dom.power(5) != np.arange(dom.size))] = 0
    census = {str(s): int((sizes == s).sum() // s) for s in (1, 5)}
    found = sorted(zip(dom.xs[fixed].tolist(), dom.ys[fixed].tolist()))
    expected = fixed_points(p)

    def mismatch(_: Sequence[int]) -> Dict[str, Any]:
        return {"found": found, "expected": expected}

    checks.append(report_from_mask("fixed_point_equation", name, 2, np.array([found == expected]), mismatch))
    report = merge_reports("five_cycle", checks, prime=p, domain_size=dom.size, orbit_census=census,
                           fixed_points=found)
    return certify(report, strict)


def random_domain_map(p: int, rng: np.random.Generator, target: Optional[FiniteGroup] = None,
                      bound: int = 5) -> np.ndarray:
    """A random map on the F_p domain, into `target` or into small rationals."""
    n = fp_domain(p).size
    if target is not None:
        return rng.integers(0, target.order, size=n)
    return np.array([Fraction(int(a), int(b)) for a, b in zip(rng.integers(-bound, bound + 1, size=n),
                                                             rng.integers(1, bound + 1, size=n))], dtype=object)


def _fifth(target: FiniteGroup) -> int:
    if not target.abelian:
        raise NotInvertibleError(f"{target.name} is not abelian")
    e = target.exponent
    if math.gcd(5, e) != 1:
        raise NotInvertibleError(f"5 is not invertible in {target.name} (exponent {e})")
    return pow(5, -1, e)


def cyclic_sum(phi: np.ndarray, p: int, target: Optional[FiniteGroup] = None) -> np.ndarray:
    """Sum of phi∘f^i for i = 1..5."""
    dom = fp_domain(p)
    parts = [phi[dom.power(i)] for i in range(1, 6)]
    if target is None:
        return sum(parts[1:], parts[0])
    return target.prod(*parts)


def five_project(phi: np.ndarray, p: int, target: Optional[FiniteGroup] = None) -> np.ndarray:
    """(4 phi - sum_{i=1..4} phi∘f^i) / 5, the projector onto maps with zero cyclic sum."""
    dom = fp_domain(p)
    phi = np.asarray(phi, dtype=object if target is None else np.int64)
    if phi.shape != (dom.size,):
        raise ValueError(f"expected {dom.size} values on the F_{p} domain, got shape {phi.shape}")
    if target is None:
        return phi - cyclic_sum(phi, p) / 5
    k = _fifth(target)
    total = cyclic_sum(phi, p, target)
    return target.mul(phi, target.inv(target.power(total, k)))


def five_project_certificate(p: int, target: Optional[str] = "Z3", seed: int = 0) -> VerificationReport:
    G = group_from_spec(target) if target else None
    phi = random_domain_map(p, make_rng(seed), G)
    q = five_project(phi, p, G)
    zero = 0 if G is None else G.identity
    dom = fp_domain(p)

    def describe(point: Sequence[int]) -> Tuple[int, int]:
        return int(dom.xs[point[0]]), int(dom.ys[point[0]])

    checks = [
        report_from_mask("cyclic_sum=0", f"F{p}", 2, cyclic_sum(q, p, G) == zero, describe),
        report_from_mask("idempotent", f"F{p}", 2, five_project(q, p, G) == q, describe),
    ]
    const = np.full(dom.size, Fraction(3) if G is None else G.order - 1, dtype=object if G is None else np.int64)
    checks.append(report_from_mask("constant->0", f"F{p}", 2, five_project(const, p, G) == zero, describe))
    return merge_reports("five_project", checks, prime=p, target=target or "Q", seed=seed)


# dilogarithm and Bloch-Wigner

@lru_cache(maxsize=None)
def _bernoulli_coefficients(terms: int = 40) -> Tuple[float, ...]:
    """B_2k / (2k+1)! for k = 1..terms."""
    return tuple(float(bernoulli(2 * k) / factorial(2 * k + 1)) for k in range(1, terms + 1))


def _dilog_series(z: complex) -> complex:
    """Li2 via the Bernoulli series in u = -log(1-z), valid for |u| < 2*pi."""
    u = -cmath.log(1 - z)
    u2 = u * u
    out = u - u2 / 4
    power = u
    for c in _bernoulli_coefficients():
        power *= u2
        term = c * power
        out += term
        if abs(term) < 1e-18 * abs(out):
            break
    return out


def dilog(z: complex) -> complex:
    """Principal branch of Li2(z), continuous from above on the cut (1, inf).

    |z| > 1 is inverted and Re z > 1/2 reflected, so the Bernoulli series
    only sees |log(1-z)| well inside its radius.
    """
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(math.pi ** 2 / 6)
    if abs(z) > 1:
        lg = cmath.log(-z)
        return -dilog(1 / z) - math.pi ** 2 / 6 - lg * lg / 2
    if z.real > 0.5:
        return -_dilog_series(1 - z) + math.pi ** 2 / 6 - cmath.log(z) * cmath.log(1 - z)
    return _dilog_series(z)


def dilog_oracle(z: complex, dps: int = ORACLE_DPS) -> complex:
    """Li2 from mpmath at `dps` digits; an independent reference for `dilog`."""
    with mpmath.workdps(dps):
        return complex(mpmath.polylog(2, mpmath.mpc(z)))


def bloch_wigner_oracle(z: complex, dps: int = ORACLE_DPS) -> float:
    """D(z) = Im Li2(z) + arg(1-z) log|z| evaluated entirely in mpmath."""
    with mpmath.workdps(dps):
        w = mpmath.mpc(z)
        return float(mpmath.im(mpmath.polylog(2, w)) + mpmath.arg(1 - w) * mpmath.log(abs(w)))


def bloch_wigner(z: complex) -> float:
    """D(z) = Im Li2(z) + arg(1-z) log|z|; zero on the real axis.

    Args:
        z: Complex point other than 0 and 1.

    Returns:
        D(z); D(conj z) = -D(z), and the maximum is D(exp(i*pi/3)).

    Raises:
        ExceptionalSetError: At z = 0 or z = 1.
    """
    z = complex(z)
    if z in (0, 1):
        raise ExceptionalSetError(f"Bloch-Wigner function is not evaluated at {z}")
    if z.imag == 0:
        return 0.0
    return dilog(z).imag + cmath.phase(1 - z) * math.log(abs(z))


@dataclass(frozen=True)
class FiveTermResidual:
    """Residuals of the five-term relation and of the D_+ / D_- cyclic sums at one point."""

    x: complex
    y: complex
    five_term: float
    d_plus: float
    d_minus: float

    @property
    def worst(self) -> float:
        return max(self.five_term, self.d_plus, self.d_minus)

    def within(self, tol: float) -> bool:
        return self.worst < tol


def margin_to_exceptional(x: complex, y: complex) -> float:
    return min(abs(x), abs(y), abs(1 - x), abs(1 - y), abs(1 - x * y))


def complex_orbit(x: complex, y: complex) -> List[Tuple[complex, complex]]:
    """f^1..f^5 of (x, y) over C, using the closed forms of the iterates."""
    w = 1 - x * y
    u = (1 - x) / w
    v = (1 - y) / w
    return [(y, u), (u, w), (w, v), (v, x), (x, y)]


def five_term_check(x: complex, y: complex, tol: float = 1e-10, margin: float = 1e-3) -> FiveTermResidual:
    """D(x) + D(y) + D(u) + D(1-xy) + D(v) and the cyclic sums of D(x) ± D(y) along the orbit.

    Here u = (1-x)/(1-xy) and v = (1-y)/(1-xy).

    Args:
        x: First coordinate.
        y: Second coordinate.
        tol: Tolerance the residual is logged against.
        margin: Minimum distance to the exceptional set.

    Returns:
        The absolute residuals at (x, y).

    Raises:
        ExceptionalSetError: If (x, y) is closer than margin to the exceptional set.
    """
    x, y = complex(x), complex(y)
    if margin_to_exceptional(x, y) < margin:
        raise ExceptionalSetError(f"({x}, {y}) is within {margin} of the exceptional set")
    orbit = complex_orbit(x, y)
    values = [(bloch_wigner(a), bloch_wigner(b)) for a, b in orbit]
    five = bloch_wigner(x) + bloch_wigner(y) + sum(bloch_wigner(z) for z in (orbit[0][1], orbit[1][1], orbit[2][1]))
    d_plus = sum(a + b for a, b in values)
    d_minus = sum(a - b for a, b in values)
    residual = FiveTermResidual(x, y, abs(five), abs(d_plus), abs(d_minus))
    if not residual.within(tol):
        logger.debug(f"five-term residual {residual.worst:.3e} at ({x}, {y})")
    return residual


def bidisk_samples(count: int, seed: int, radius: float = 1.0) -> np.ndarray:
    """Halton points mapped uniformly onto the bidisk |x|, |y| < radius; shape (count, 2) complex."""
    pts = qmc.Halton(d=4, scramble=True, seed=seed).random(count)
    r1, r2 = radius * np.sqrt(pts[:, 0]), radius * np.sqrt(pts[:, 2])
    t1, t2 = 2 * np.pi * pts[:, 1], 2 * np.pi * pts[:, 3]
    return np.stack([r1 * np.exp(1j * t1), r2 * np.exp(1j * t2)], axis=1)


def five_term_sweep(samples: int = 10_000, seed: int = 0, tol: float = 1e-10, margin: float = 1e-3,
                    progress: bool = False) -> VerificationReport:
    """Five-term and D_± residuals on `samples` seeded Halton points at distance >= margin from I."""
    points = bidisk_samples(samples, seed)
    report = VerificationReport("bloch_wigner_five_term", "C^2", 2,
                                extra={"seed": seed, "tolerance": tol, "margin": margin})
    worst, skipped, conj = 0.0, 0, 0.0
    disable = not (progress and sys.stderr.isatty())
    for x, y in tqdm(points, desc="five-term samples", disable=disable):
        if margin_to_exceptional(x, y) < margin:
            skipped += 1
            continue
        res = five_term_check(x, y, tol, margin)
        report.points_checked += 1
        worst = max(worst, res.worst)
        conj = max(conj, abs(bloch_wigner(x) + bloch_wigner(x.conjugate())))
        if not res.within(tol):
            report.add_violation({"x": [x.real, x.imag], "y": [y.real, y.imag], "residual": res.worst})
    if conj >= tol:
        report.add_violation({"check": "conjugation", "residual": conj})
    report.extra.update({"max_residual": worst, "max_conjugation": conj, "skipped": skipped})
    logger.info(f"five-term sweep: {report.points_checked} points, max residual {worst:.3e}, {skipped} skipped")
    return report


def dilog_oracle_sweep(samples: int = 1000, seed: int = 0, tol: float = 1e-13, radius: float = 2.0) -> VerificationReport:
    """Compare `dilog` against the mpmath oracle on seeded points of the disk |z| < radius."""
    rng = make_rng(seed)
    r = radius * np.sqrt(rng.random(samples))
    t = 2 * np.pi * rng.random(samples)
    report = VerificationReport("dilog_oracle", "C", 1, extra={"seed": seed, "tolerance": tol})
    worst = 0.0
    for z in r * np.exp(1j * t):
        ref = dilog_oracle(z)
        err = abs(dilog(z) - ref) / max(1.0, abs(ref))
        worst = max(worst, err)
        report.points_checked += 1
        if err >= tol:
            report.add_violation({"z": [z.real, z.imag], "error": err})
    special = cmath.exp(1j * math.pi / 3)
    expected = bloch_wigner_oracle(special)
    err = abs(bloch_wigner(special) - expected)
    if err >= 1e-12:
        report.add_violation({"z": "exp(i*pi/3)", "error": err})
    report.extra.update({"max_error": worst, "max_value": expected, "max_value_error": err})
    return report


def run_fivecycle_fp(prime: int, target: Optional[str] = "Z3", seed: int = 0) -> List[VerificationReport]:
    reports = [fp_cycle(prime, strict=False), five_project_certificate(prime, target, seed)]
    for r in reports:
        certify(r, strict=False)
    return reports


def run_fivecycle_bw(samples: int = 10_000, seed: int = 0, tol: float = 1e-10, margin: float = 1e-3,
                     oracle_points: int = 1000) -> List[VerificationReport]:
    reports = [dilog_oracle_sweep(oracle_points, seed), five_term_sweep(samples, seed, tol, margin, progress=True)]
    for r in reports:
        certify(r, strict=False)
    return reports

