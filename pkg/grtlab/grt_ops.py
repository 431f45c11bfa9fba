"""
Operator calculus on the free Lie algebra in two generators x, y.

All operators here are built from two substitutions: the swap x <-> y and
the order-three map x -> y, y -> -x-y.  The map `alpha` adds the two
non-trivial precompositions of that map, and satisfies alpha^2 = 2 + alpha,
so its eigenvalues are -1 (hexagon solutions) and 2 (anti-hexagon
solutions).  `hexagon_project` and `antihexagon_project` are the two
spectral projectors.

The module also carries the Ihara bracket, Drinfeld's auxiliary equation
and an exact solver for the low-degree elements of grt.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np
from sympy import Matrix, Rational as SymRational

from .dk_pentagon import pentagon_residual
from .lie_core import (LieAlgebraError, LieSeries, LyndonWord, Scalar, bracket, lyndon_basis, random_series,
                       substitute)
from .reports import VerificationReport
from .utils import get_logger

logger = get_logger(__name__)

LIE2 = ("x", "y")


class WrongAlphabetError(LieAlgebraError):
    """The operator is defined on two-generator series only."""


def _xy(phi: LieSeries) -> Tuple[str, str, LieSeries, LieSeries]:
    if len(phi.alphabet) != 2:
        raise WrongAlphabetError(f"expected a two-letter alphabet, got {phi.alphabet}")
    a, b = phi.alphabet
    x, y = LieSeries.generators(phi.alphabet, phi.max_degree)
    return a, b, x, y


def lie2(max_degree: int) -> Tuple[LieSeries, LieSeries]:
    """Generators x, y of the free Lie algebra in two letters."""
    x, y = LieSeries.generators(LIE2, max_degree)
    return x, y


def swap(phi: LieSeries) -> LieSeries:
    """The substitution x <-> y."""
    a, b, x, y = _xy(phi)
    return substitute(phi, {a: y, b: x})


def alpha(phi: LieSeries) -> LieSeries:
    """Sum of the two non-trivial precompositions with x -> y, y -> -x-y.

    Args:
        phi: Series over a two-letter alphabet.

    Returns:
        phi(y, -x-y) + phi(-x-y, x), truncated like phi.

    Raises:
        WrongAlphabetError: If phi is not over two letters.
    """
    a, b, x, y = _xy(phi)
    z = -x - y
    return substitute(phi, {a: y, b: z}) + substitute(phi, {a: z, b: x})


def hexagon_residual(phi: LieSeries) -> LieSeries:
    """Hexagon residual phi + alpha(phi).

    It vanishes exactly on the image of `hexagon_project`. For example
    [x, y] is not a solution: its residual is 3[x, y].

    Args:
        phi: Series over a two-letter alphabet.

    Returns:
        The residual series; zero when phi solves the hexagon equation.
    """
    return phi + alpha(phi)


def antihexagon_residual(phi: LieSeries) -> LieSeries:
    """phi - alpha(phi)/2, zero on the eigenvalue-2 part of alpha."""
    return phi - alpha(phi) / 2


def hexagon_project(phi: LieSeries) -> LieSeries:
    """Project onto hexagon solutions with H = (2 id - alpha)/3.

    Args:
        phi: Series over a two-letter alphabet.

    Returns:
        H(phi), which satisfies hexagon_residual(H(phi)) = 0 and H(H(phi)) = H(phi).
    """
    return (2 * phi - alpha(phi)) / 3


def antihexagon_project(phi: LieSeries) -> LieSeries:
    """Complementary projector A = (id + alpha)/3, so that H + A = id."""
    return (phi + alpha(phi)) / 3


def lambda_compose(lam: Scalar, beta: Scalar, phi: LieSeries) -> LieSeries:
    """Apply (id + beta*alpha) after (id + lam*alpha).

    As operators the composite equals (1 + 2 lam beta) id + (lam + beta + lam beta) alpha.

    Args:
        lam: Rational parameter of the first operator.
        beta: Rational parameter of the second operator.
        phi: Series over a two-letter alphabet.

    Returns:
        The image of phi under the composite.
    """
    psi = phi + Fraction(lam) * alpha(phi)
    return psi + Fraction(beta) * alpha(psi)


def lambda_inverse(lam: Scalar, phi: LieSeries) -> LieSeries:
    """Apply the inverse of id + lam*alpha.

    Args:
        lam: Rational parameter; the operator is invertible for lam not in {1, -1/2}.
        phi: Series over a two-letter alphabet.

    Returns:
        a phi + b alpha(phi) with a = (1+lam)/(1+lam-2lam^2), b = -lam/(1+lam-2lam^2).

    Raises:
        ValueError: If lam is 1 or -1/2.
    """
    lam = Fraction(lam)
    det = 1 + lam - 2 * lam * lam
    if det == 0:
        raise ValueError(f"id + {lam}*alpha is not invertible")
    a = (1 + lam) / det
    b = -lam / det
    return a * phi + b * alpha(phi)


def skew_symmetrize(phi: LieSeries) -> LieSeries:
    """(phi(x, y) - phi(y, x))/2; fixes every skew series such as sigma3."""
    return (phi - swap(phi)) / 2


def derivation_apply(f: LieSeries, g: LieSeries) -> LieSeries:
    """Apply the derivation D_f with D_f(x) = 0 and D_f(y) = [y, f] to g.

    Images of basis elements are built along the standard factorization of
    each Lyndon word, so D_f is applied through the Leibniz rule exactly once
    per word.

    Args:
        f: Series defining the derivation.
        g: Series the derivation is applied to, with the same alphabet and truncation.

    Returns:
        D_f(g), truncated at the common max_degree.

    Raises:
        LieAlgebraError: If the alphabets or truncations differ.
    """
    f._check(g)
    _, _, x, y = _xy(g)
    on_gens = {0: LieSeries.zero(g.alphabet, g.max_degree), 1: bracket(y, f)}
    memo: Dict[LyndonWord, Tuple[LieSeries, LieSeries]] = {}

    # word -> (basis element, its image under D)
    def walk(word: LyndonWord) -> Tuple[LieSeries, LieSeries]:
        if word not in memo:
            fac = word.standard_factorization
            if fac is None:
                memo[word] = (x if word[0] == 0 else y, on_gens[word[0]])
            else:
                pu, du = walk(fac[0])
                pv, dv = walk(fac[1])
                memo[word] = (bracket(pu, pv), bracket(du, pv) + bracket(pu, dv))
        return memo[word]

    out = LieSeries.zero(g.alphabet, g.max_degree)
    for w, c in g.terms():
        out = out + c * walk(w)[1]
    return out


def ihara_bracket(f: LieSeries, g: LieSeries) -> LieSeries:
    """Ihara bracket {f, g} = [f, g] + D_f(g) - D_g(f).

    The generator x is central for this bracket.

    Args:
        f: Left argument, over two letters.
        g: Right argument, over the same alphabet and truncation.

    Returns:
        {f, g}; antisymmetric in f and g.
    """
    return bracket(f, g) + derivation_apply(f, g) - derivation_apply(g, f)


def drinfeld_eq3_residual(phi: LieSeries) -> LieSeries:
    """Residual of Drinfeld's auxiliary equation [y, phi(x, y)] + [z, phi(x, z)] = 0.

    z is eliminated on the shell x + y + z = 0.

    Args:
        phi: Series over a two-letter alphabet.

    Returns:
        [y, phi(x, y)] + [-x-y, phi(x, -x-y)]; zero for elements of grt.
    """
    a, b, x, y = _xy(phi)
    z = -x - y
    return bracket(y, phi) + bracket(z, substitute(phi, {a: x, b: z}))


def _as_fraction(v) -> Fraction:
    v = SymRational(v)
    return Fraction(int(v.p), int(v.q))


@lru_cache(maxsize=None)
def grt_solutions(degree: int, include_pentagon: bool = True) -> Tuple[LieSeries, ...]:
    """Basis of the degree-d solutions of {skew, hexagon, eq3[, pentagon]}.

    Solutions are computed by exact nullspace over the Lyndon basis and
    normalised so that the first non-zero coordinate is 1.  Series are
    truncated at degree + 1, the degree the eq3 residual lives in.

    Args:
        degree: Homogeneous degree to solve in.
        include_pentagon: Add the pentagon equation in t_4 to the system.

    Returns:
        Tuple of basis series; empty when the solution space is zero.
    """
    top = degree + 1
    words = lyndon_basis(2, degree)
    columns: List[List[Fraction]] = []
    keys: List[Tuple] = []
    blocks = []
    for w in words:
        phi = LieSeries(LIE2, top, {w: 1}, _trusted=True)
        block: Dict[Tuple, Fraction] = {}
        for name, value in (("skew", phi + swap(phi)), ("hexagon", hexagon_residual(phi)),
                            ("eq3", drinfeld_eq3_residual(phi))):
            for u, c in value.coeffs.items():
                block[(name, tuple(u))] = c
        if include_pentagon:
            for k, c in pentagon_residual(phi, degree).coeffs.items():
                block[("pentagon", k)] = c
        blocks.append(block)
        keys.extend(k for k in block if k not in keys)
    for block in blocks:
        columns.append([block.get(k, Fraction(0)) for k in keys])
    if not keys:
        null = [[1 if i == j else 0 for i in range(len(words))] for j in range(len(words))]
    else:
        system = Matrix(len(keys), len(words), lambda i, j: SymRational(columns[j][i].numerator,
                                                                          columns[j][i].denominator))
        null = [list(v) for v in system.nullspace()]
    out = []
    for vec in null:
        coords = [_as_fraction(c) for c in vec]
        lead = next(c for c in coords if c)
        out.append(LieSeries(LIE2, top, {w: c / lead for w, c in zip(words, coords)}, _trusted=True))
    logger.info(f"grt degree {degree}: {len(out)} solution(s) (pentagon {'on' if include_pentagon else 'off'})")
    return tuple(out)


def _unique_solution(degree: int, max_degree: int) -> LieSeries:
    sols = grt_solutions(degree)
    if len(sols) != 1:
        raise AssertionError(f"expected a one-dimensional solution space in degree {degree}, got {len(sols)}")
    if max_degree < degree:
        raise LieAlgebraError(f"max_degree {max_degree} below the degree {degree} of the element")
    return sols[0].with_max_degree(max_degree)


def sigma3(max_degree: int = 4) -> LieSeries:
    """The degree-3 generator [x,[x,y]] - [y,[y,x]]."""
    return _unique_solution(3, max_degree)


def sigma5(max_degree: int = 6) -> LieSeries:
    """The normalised degree-5 generator, solved from skew, hexagon, eq3 and pentagon."""
    return _unique_solution(5, max_degree)


def projector_certificate(rng: np.random.Generator, samples: int = 20, max_degree: int = 6,
                          pairs: int = 5) -> VerificationReport:
    """Exact check of the projector algebra on random series in two letters.

    Identities: H^2 = H, A^2 = A, H + A = id, HA = AH = 0, alpha^2 = 2 + alpha,
    hexagon(H phi) = 0, anti-hexagon(A phi) = 0, H commutes with skew
    symmetrization, and the composition rule of id + lam*alpha.
    """
    report = VerificationReport("projectors", "lie2", 2, extra={"max_degree": max_degree})
    for i in range(samples):
        phi = random_series(LIE2, max_degree, rng)
        H, A, al = hexagon_project(phi), antihexagon_project(phi), alpha(phi)
        zero = LieSeries.zero(LIE2, max_degree)
        identities = {
            "H^2=H": hexagon_project(H) == H,
            "A^2=A": antihexagon_project(A) == A,
            "H+A=id": H + A == phi,
            "HA=0": hexagon_project(A) == zero,
            "AH=0": antihexagon_project(H) == zero,
            "alpha^2=2+alpha": alpha(al) == 2 * phi + al,
            "hexagon(H)=0": hexagon_residual(H) == zero,
            "antihexagon(A)=0": antihexagon_residual(A) == zero,
            "H skew=skew H": hexagon_project(skew_symmetrize(phi)) == skew_symmetrize(H),
            "alpha swap=swap alpha": alpha(swap(phi)) == swap(al),
        }
        for _ in range(pairs):
            lam = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 6)))
            beta = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 6)))
            expected = (1 + 2 * lam * beta) * phi + (lam + beta + lam * beta) * al
            identities[f"compose({lam},{beta})"] = lambda_compose(lam, beta, phi) == expected
            phi_lam = phi + lam * al
            identities[f"hexagon(phi_{lam})"] = hexagon_residual(phi_lam) == (1 + 2 * lam) * hexagon_residual(phi)
        report.points_checked += 1
        for name, ok in identities.items():
            if not ok:
                report.add_violation({"sample": i, "identity": name})
    return report
