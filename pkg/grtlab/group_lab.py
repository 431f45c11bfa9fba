"""
Symmetrization procedures and square-zero maps over finite groups.

Every construction returns the map it builds together with a
`VerificationReport` from an exhaustive sweep of its defining equation over
the whole finite domain.  Constructions that certify a structural fact
(cycle maps, square roots) raise `VerificationFailure` when the sweep
finds a counterexample.

Maps are `NaryMap` tables; self-maps of G^n are tuples of coordinate
arrays (see `finite_groups.domain_coords`).  Additive notation in the
docstrings refers to abelian groups, where + is the group operation.
"""
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .finite_groups import (BinaryPairing, Coords, FiniteGroup, MapTableError, NaryMap, PairingError,
                            compose_maps, domain_coords, group_from_spec, make_pairing, maps_equal)
from .grt_ops import projector_certificate
from .reports import VerificationReport, certify, merge_reports, report_from_mask
from .utils import child_seed, get_logger, make_rng

logger = get_logger(__name__)


class CycleError(ValueError):
    """A self-map does not have the required order."""


class CoefficientError(ValueError):
    """Coefficient vector of the wrong length or with non-zero sum."""


def _describe(G: FiniteGroup, values: Optional[Dict[str, np.ndarray]] = None,
              target: Optional[FiniteGroup] = None) -> Callable[[Sequence[int]], Any]:
    def describe(point: Sequence[int]) -> Any:
        out: Dict[str, Any] = {"x": [G.label(i) for i in point]}
        for name, arr in (values or {}).items():
            out[name] = (target or G).label(arr[tuple(point)])
        return out
    return describe


def _require_abelian(*groups: FiniteGroup) -> None:
    for G in groups:
        if not G.abelian:
            raise MapTableError(f"{G.name} is not abelian")


# cycle maps

def identity_coords(G: FiniteGroup, n: int) -> Coords:
    return domain_coords(G, n)


def power_coords(F: Coords, k: int, G: FiniteGroup) -> Coords:
    out = domain_coords(G, len(F))
    for _ in range(k):
        out = compose_maps(F, out)
    return out


def hexagon_map(G: FiniteGroup) -> Coords:
    """f(x, y) = (y, y^-1 x^-1), i.e. (y, -x-y) on abelian groups; f^3 = id."""
    x, y = domain_coords(G, 2)
    return y, G.inv(G.mul(x, y))


def cycle_map(G: FiniteGroup, n: int) -> Coords:
    """P(x1..xn) = (x2^-1 ... xn^-1 x1^-1, x3, ..., xn, x1); P(x) = x^-1 for n = 1."""
    xs = domain_coords(G, n)
    if n == 1:
        return (G.inv(xs[0]),)
    w = G.prod(*[G.inv(xs[i]) for i in list(range(1, n)) + [0]])
    return (w,) + tuple(xs[2:]) + (xs[0],)


def cycle_closed_form(G: FiniteGroup, n: int, l: int) -> Coords:
    """Closed form of P^l for n >= 2 and 2 <= l <= n."""
    xs = domain_coords(G, n)
    x = dict(enumerate(xs, start=1))  # one-based slots
    w = G.prod(*[G.inv(xs[i]) for i in list(range(1, n)) + [0]])
    if l == n:
        return (x[n], w) + tuple(x[i] for i in range(2, n))
    return (x[l],) + tuple(x[i] for i in range(l + 2, n + 1)) + (x[1], w) + tuple(x[i] for i in range(2, l))


def cycle_rep_P(G: FiniteGroup, n: int, strict: bool = True) -> Tuple[Coords, VerificationReport]:
    """Build the cycle P on G^n and certify its order and its closed-form powers.

    Args:
        G: Source group.
        n: Arity; n = 1 gives inversion.
        strict: Raise VerificationFailure when a check fails.

    Returns:
        The coordinate arrays of P, and a report with P^(n+1) = id and P^l for 2 <= l <= n.
    """
    if n < 1:
        raise CycleError("arity must be positive")
    P = cycle_map(G, n)
    ident = domain_coords(G, n)
    checks = [report_from_mask(f"P^{n + 1}=id", G.name, n, maps_equal(power_coords(P, n + 1, G), ident),
                               _describe(G))]
    if n >= 2:
        for l in range(2, n + 1):
            checks.append(report_from_mask(f"P^{l} closed form", G.name, n,
                                           maps_equal(power_coords(P, l, G), cycle_closed_form(G, n, l)),
                                           _describe(G)))
    else:
        checks.append(report_from_mask("P^2=id", G.name, n, maps_equal(power_coords(P, 2, G), ident),
                                       _describe(G)))
    report = merge_reports("cycle_rep_P", checks)
    return P, certify(report, strict)


def square_root_map(G: FiniteGroup, strict: bool = True) -> Tuple[Coords, VerificationReport]:
    """s(x, y) = (x+y, -x), certified to square to f(x, y) = (y, -x-y)."""
    _require_abelian(G)
    x, y = domain_coords(G, 2)
    s = (G.mul(x, y), G.inv(x))
    ok = maps_equal(compose_maps(s, s), hexagon_map(G))
    return s, certify(report_from_mask("square_root", G.name, 2, ok, _describe(G)), strict)


# hexagon-type symmetrizations

def z3_hexagon_solve(phi: NaryMap, f: Optional[Coords] = None) -> Tuple[NaryMap, VerificationReport]:
    """(phi∘f)^-1 · phi · (phi∘f^2)^-1 · phi, which solves (r∘f)·r·(r∘f^2) = e in any target group."""
    G, n = phi.source, phi.arity
    if f is None:
        if n != 2:
            raise CycleError("the default three-cycle lives on pairs; pass f for other arities")
        f = hexagon_map(G)
    f2 = compose_maps(f, f)
    if not maps_equal(compose_maps(f, f2), domain_coords(G, n)).all():
        raise CycleError("f does not satisfy f^3 = id")
    a, b, c = phi, phi.precompose(f), phi.precompose(f2)
    r = b.inverse() * a * c.inverse() * a
    residual = r.precompose(f) * r * r.precompose(f2)
    ok = residual.table == phi.target.identity
    report = report_from_mask("z3_hexagon", f"{G.name}->{phi.target.name}", n, ok,
                              _describe(G, {"residual": residual.table}, phi.target))
    return r, certify(report, strict=False)


def _neg_sum(G: FiniteGroup, n: int) -> np.ndarray:
    return G.inv(G.sum(list(domain_coords(G, n))))


def slot_sum(psi: NaryMap) -> NaryMap:
    """K(psi) = sum over slots i of psi with x_i replaced by -(x_1 + ... + x_n)."""
    z = _neg_sum(psi.source, psi.arity)
    parts = [psi.substitute_slot(i, z) for i in range(psi.arity)]
    out = parts[0]
    for p in parts[1:]:
        out = out * p
    return out


def nary_hexagon_solve(phi: NaryMap, kind: str = "symmetric") -> Tuple[NaryMap, NaryMap, VerificationReport]:
    """Solutions of the n-ary hexagon and anti-hexagon equations built from phi.

    With K as in `slot_sum` and the upper sign for symmetric phi:
    phi_phi = n·phi ∓ K(phi) solves psi ± K(psi) = 0 and
    Phi_phi = phi ± K(phi) solves n·Psi ∓ K(Psi) = 0.

    Args:
        phi: Map G^n -> T between abelian groups.
        kind: "symmetric" or "skew"; phi must have that symmetry.

    Returns:
        (phi_phi, Phi_phi, report); the report also checks K(K(phi)) against
        n·phi ± (n-1)·K(phi).

    Raises:
        MapTableError: If kind is unknown or phi lacks the symmetry.
    """
    G, T, n = phi.source, phi.target, phi.arity
    _require_abelian(G, T)
    if kind not in ("symmetric", "skew"):
        raise MapTableError(f"kind must be 'symmetric' or 'skew', got {kind!r}")
    if kind == "symmetric" and not phi.is_symmetric():
        raise MapTableError("phi is not symmetric")
    if kind == "skew" and not phi.is_skew():
        raise MapTableError("phi is not skew-symmetric")
    sgn = 1 if kind == "symmetric" else -1
    K = slot_sum(phi)
    small = phi.power(n) * K.power(-sgn)
    big = phi * K.power(sgn)
    hex_res = small * slot_sum(small).power(sgn)
    anti_res = big.power(n) * slot_sum(big).power(-sgn)
    KK = slot_sum(K)
    square = KK * (phi.power(n) * K.power(sgn * (n - 1))).inverse()
    e = T.identity
    name = f"{G.name}->{T.name}"
    checks = [
        report_from_mask("hexagon", name, n, hex_res.table == e, _describe(G, {"residual": hex_res.table}, T)),
        report_from_mask("anti_hexagon", name, n, anti_res.table == e, _describe(G, {"residual": anti_res.table}, T)),
        report_from_mask("K^2", name, n, square.table == e, _describe(G)),
    ]
    return small, big, merge_reports(f"nary_hexagon_{kind}", checks)


def coefficient_solve(phi: NaryMap, coeffs: Sequence[int]) -> Tuple[NaryMap, VerificationReport]:
    """a_0·phi + a_1·phi∘P + ... + a_n·phi∘P^n, whose P-cyclic sum vanishes when sum(a) = 0.

    Args:
        phi: Map G^n -> T with abelian target.
        coeffs: n + 1 integers summing to zero.

    Returns:
        The combination and a report of its vanishing cyclic sum.

    Raises:
        CoefficientError: On a wrong length or a non-zero sum.
    """
    G, T, n = phi.source, phi.target, phi.arity
    _require_abelian(T)
    coeffs = [int(a) for a in coeffs]
    if len(coeffs) != n + 1:
        raise CoefficientError(f"need {n + 1} coefficients for arity {n}, got {len(coeffs)}")
    if sum(coeffs) != 0:
        raise CoefficientError(f"coefficients must sum to 0, got {sum(coeffs)}")
    P = cycle_map(G, n)
    iterates = [power_coords(P, i, G) for i in range(n + 1)]
    out = NaryMap.identity_map(G, n, T)
    for a, F in zip(coeffs, iterates):
        out = out * phi.precompose(F).power(a)
    cyclic = NaryMap.identity_map(G, n, T)
    for F in iterates:
        cyclic = cyclic * out.precompose(F)
    report = report_from_mask("coefficients", f"{G.name}->{T.name}", n, cyclic.table == T.identity,
                              _describe(G, {"cyclic_sum": cyclic.table}, T), {"coefficients": coeffs})
    return out, report


def skew_solve(phi: NaryMap, tilde: bool = False) -> Tuple[NaryMap, VerificationReport]:
    """sigma(x, y) = phi(x, y)·phi(y, x)^-1, solving sigma(x, y) = sigma(y, x)^-1."""
    if phi.arity != 2:
        raise MapTableError("skew_solve needs a binary map")
    swapped = phi.like(phi.table.T)
    sigma = phi * swapped.inverse()
    if tilde:
        sigma = sigma.inverse()
    ok = sigma.table.T == phi.target.inverse[sigma.table]
    report = report_from_mask("skew_tilde" if tilde else "skew", f"{phi.source.name}->{phi.target.name}", 2, ok,
                              _describe(phi.source, {"sigma": sigma.table}, phi.target))
    return sigma, report


def inversion_map(G: FiniteGroup, n: int, slots: Iterable[int]) -> Coords:
    """f^M: invert the (one-based) slots in M, leave the others."""
    slots = set(slots)
    bad = [i for i in slots if not 1 <= i <= n]
    if bad:
        raise MapTableError(f"slots {bad} outside 1..{n}")
    xs = domain_coords(G, n)
    return tuple(G.inv(x) if i + 1 in slots else x for i, x in enumerate(xs))


def parity_solve(phi: NaryMap, slots: Iterable[int], form: str = "quotient",
                 tilde: bool = False) -> Tuple[NaryMap, VerificationReport]:
    """Parity solutions rho for the inversion f^M of the slots M.

    "quotient": rho = phi·(phi∘f^M)^-1, solves rho∘f^M = rho^-1 in any group.
    "product":  rho = phi·(phi∘f^M), solves rho∘f^M = rho; needs an abelian
    target unless M is empty.
    """
    slots = sorted(set(slots))
    G, T, n = phi.source, phi.target, phi.arity
    fM = inversion_map(G, n, slots)
    moved = phi.precompose(fM)
    if form == "quotient":
        rho = phi * moved.inverse()
    elif form == "product":
        if slots and not T.abelian:
            raise MapTableError("the product form needs an abelian target when M is non-empty")
        rho = phi * moved
    else:
        raise MapTableError(f"unknown parity form {form!r}")
    if tilde:
        rho = rho.inverse()
    expected = rho.inverse() if form == "quotient" else rho
    ok = rho.precompose(fM).table == expected.table
    report = report_from_mask(f"parity_{form}{'_tilde' if tilde else ''}", f"{G.name}->{T.name}", n, ok,
                              _describe(G, {"rho": rho.table}, T), {"slots": slots})
    return rho, report


def inverse_parity_solve(phi: NaryMap) -> Tuple[NaryMap, VerificationReport]:
    """phi(x)·phi(x^-1)^-1 for a unary map; satisfies psi(x^-1) = psi(x)^-1."""
    if phi.arity != 1:
        raise MapTableError("inverse_parity_solve needs a unary map")
    return parity_solve(phi, [1], form="quotient")


# square-zero maps

def _check_pairing_domain(psi: NaryMap, pairing: BinaryPairing) -> None:
    if psi.source is not pairing.group or psi.target is not pairing.group:
        raise MapTableError(f"maps must go from {pairing.group.name}^n to {pairing.group.name}")


def cyclic_sum(psi: NaryMap) -> NaryMap:
    """psi + psi∘f + ... + psi∘f^n for f = P (abelian target)."""
    G, n = psi.source, psi.arity
    P = cycle_map(G, n)
    out = psi
    F = P
    for _ in range(n):
        out = out * psi.precompose(F)
        F = compose_maps(P, F)
    return out


def diff_1d(psi: NaryMap, pairing: BinaryPairing, form: str = "iterate") -> NaryMap:
    """(∂psi)(x) = [x_1 + ... + x_n, psi(x) + sum_i psi∘f^i(x)].

    form="slots" uses the explicit slot substitution, valid for symmetric psi.

    Args:
        psi: Map G^n -> G with G the pairing's group.
        pairing: Bihomomorphic pairing on an abelian group.
        form: "iterate" or "slots".

    Returns:
        The map ∂psi of the same arity.

    Raises:
        PairingError: If the pairing is not bihomomorphic.
        MapTableError: On a wrong domain or an unusable form.
    """
    pairing.require("bihomomorphic")
    G = pairing.group
    _require_abelian(G)
    _check_pairing_domain(psi, pairing)
    s = G.sum(list(domain_coords(G, psi.arity)))
    if form == "iterate":
        inner = cyclic_sum(psi)
    elif form == "slots":
        if not psi.is_symmetric():
            raise MapTableError("the slot form of the differential needs a symmetric map")
        inner = psi * slot_sum(psi)
    else:
        raise MapTableError(f"unknown form {form!r}")
    return psi.like(pairing.apply(np.broadcast_to(s, inner.table.shape), inner.table))


def diff_1d_certificate(psi: NaryMap, pairing: BinaryPairing) -> VerificationReport:
    """∂∂psi = 0, and for binary maps parity conservation of ∂."""
    G, n = pairing.group, psi.arity
    d = diff_1d(psi, pairing)
    dd = diff_1d(d, pairing)
    checks = [report_from_mask("d^2=0", G.name, n, dd.table == G.identity, _describe(G, {"d2": dd.table}))]
    if n == 2:
        if psi.is_symmetric():
            checks.append(report_from_mask("parity", G.name, n, d.table == d.table.T, _describe(G)))
        if psi.is_skew():
            checks.append(report_from_mask("parity", G.name, n, d.table.T == G.inverse[d.table], _describe(G)))
    return merge_reports("diff_1d", checks, pairing=pairing.name)


def _require_2d(pairing: BinaryPairing) -> None:
    pairing.require("bihomomorphic")
    if not (pairing.alternating or pairing.group.exponent in (1, 3)):
        raise PairingError(f"pairing {pairing.name!r} is neither alternating nor on a group of exponent 3")


def diff_2d(psi: NaryMap, pairing: BinaryPairing, permissive: bool = False) -> NaryMap:
    """[psi, psi∘f] + [psi∘f, psi∘f~] + [psi∘f~, psi] with f = (-x-y, x), f~ = (y, -x-y).

    Args:
        psi: Binary map G^2 -> G.
        pairing: Pairing on G; alternating, or any bihomomorphism when G has exponent 3.
        permissive: Skip the pairing requirement, for counterexample searches.

    Returns:
        ∂psi, which is invariant under f.
    """
    G = pairing.group
    _require_abelian(G)
    if not permissive:
        _require_2d(pairing)
    _check_pairing_domain(psi, pairing)
    if psi.arity != 2:
        raise MapTableError("diff_2d needs a binary map")
    f = cycle_map(G, 2)
    ft = compose_maps(f, f)
    a, b, c = psi.table, psi.precompose(f).table, psi.precompose(ft).table
    return psi.like(G.prod(pairing.apply(a, b), pairing.apply(b, c), pairing.apply(c, a)))


def diff_2d_certificate(psi: NaryMap, pairing: BinaryPairing, permissive: bool = False) -> VerificationReport:
    G = pairing.group
    d = diff_2d(psi, pairing, permissive)
    dd = diff_2d(d, pairing, permissive)
    f = cycle_map(G, 2)
    checks = [
        report_from_mask("d^2=0", G.name, 2, dd.table == G.identity, _describe(G, {"d2": dd.table})),
        report_from_mask("f-invariance", G.name, 2, d.precompose(f).table == d.table, _describe(G)),
    ]
    return merge_reports("diff_2d", checks, pairing=pairing.name)


def diff_2d_counterexample_search(pairing: BinaryPairing, rng: np.random.Generator,
                                  trials: int = 5) -> VerificationReport:
    """Look for psi with ∂∂psi != 0 under a pairing that is only required to be bilinear."""
    G = pairing.group
    candidates: List[Tuple[str, NaryMap]] = [("x", NaryMap.from_function(G, 2, G, lambda i, j: i))]
    for _ in range(trials):
        seed = child_seed(rng)
        candidates.append((f"random(seed={seed})", NaryMap.random(G, 2, G, make_rng(seed))))
    report = VerificationReport("diff_2d_search", G.name, 2, extra={"pairing": pairing.name,
                                                                   "flags": pairing.flags(), "counterexample": None})
    for label, psi in candidates:
        dd = diff_2d(diff_2d(psi, pairing, permissive=True), pairing, permissive=True)
        report.points_checked += dd.table.size
        bad = np.argwhere(dd.table != G.identity)
        if len(bad):
            point = tuple(int(i) for i in bad[0])
            report.extra["counterexample"] = {"psi": label, "x": [G.label(i) for i in point],
                                              "d2": G.label(dd.table[point])}
            break
    logger.info(f"diff_2d search with {pairing.name} on {G.name}: "
                f"{'counterexample found' if report.extra['counterexample'] else 'none found'}")
    return report


def diff_3d(psi: NaryMap, pairing: BinaryPairing, permissive: bool = False) -> NaryMap:
    """[psi, (psi∘f~)·(psi∘f)] with f = P and f~ = P^2 on pairs.

    Args:
        psi: Binary map G^2 -> G, G possibly non-abelian.
        pairing: Alternating skew bihomomorphism on G.
        permissive: Skip the pairing requirement.

    Returns:
        ∂psi as a binary map.
    """
    G = pairing.group
    if not permissive:
        pairing.require("bihomomorphic", "skew", "alternating")
    _check_pairing_domain(psi, pairing)
    if psi.arity != 2:
        raise MapTableError("diff_3d needs a binary map")
    f = cycle_map(G, 2)
    ft = compose_maps(f, f)
    inner = G.mul(psi.precompose(ft).table, psi.precompose(f).table)
    return psi.like(pairing.apply(psi.table, inner))


def diff_3d_certificate(psi: NaryMap, pairing: BinaryPairing, permissive: bool = False) -> VerificationReport:
    G = pairing.group
    d = diff_3d(psi, pairing, permissive)
    dd = diff_3d(d, pairing, permissive)
    P, T = pairing.table, G.table
    a, b, c = np.indices((G.order,) * 3)
    commute = T[P[a, c], P[b, c]] == T[P[b, c], P[a, c]]
    checks = [
        report_from_mask("d^2=e", G.name, 2, dd.table == G.identity, _describe(G, {"d2": dd.table})),
        report_from_mask("abelian_image", G.name, 3, commute, _describe(G)),
    ]
    return merge_reports("diff_3d", checks, pairing=pairing.name, permissive=permissive)


def pointwise_bracket(psi1: NaryMap, psi2: NaryMap, pairing: BinaryPairing) -> NaryMap:
    """x -> [psi1(x), psi2(x)] under the pairing."""
    _check_pairing_domain(psi1, pairing)
    _check_pairing_domain(psi2, pairing)
    return psi1.like(pairing.apply(psi1.table, psi2.table))


def projection(G: FiniteGroup, n: int, k: int) -> NaryMap:
    """The map x -> x_k (one-based)."""
    return NaryMap(G, n, G, domain_coords(G, n)[k - 1])


def leibniz_counterexample_search(pairing: BinaryPairing, arity: int = 2, rng: Optional[np.random.Generator] = None,
                                  random_maps: int = 2) -> VerificationReport:
    """Search pairs (psi1, psi2) with ∂[psi1, psi2] != [∂psi1, psi2] + [psi1, ∂psi2] for ∂ = diff_1d.

    Candidates are the coordinate projections, followed by seeded random maps.

    Args:
        pairing: Bihomomorphic pairing on G.
        arity: Arity of the candidate maps.
        rng: Source of seeds for random candidates; None tries projections only.
        random_maps: Number of random candidates.

    Returns:
        A report whose extra["counterexample"] holds the first failing pair,
        point and both sides, or None.
    """
    G = pairing.group
    pairing.require("bihomomorphic")
    candidates: List[Tuple[str, NaryMap]] = [(f"x{k}", projection(G, arity, k)) for k in range(1, arity + 1)]
    if rng is not None:
        for _ in range(random_maps):
            seed = child_seed(rng)
            candidates.append((f"random(seed={seed})", NaryMap.random(G, arity, G, make_rng(seed))))
    report = VerificationReport("leibniz_search", G.name, arity,
                                extra={"pairing": pairing.name, "counterexample": None})
    for (n1, p1), (n2, p2) in product(candidates, repeat=2):
        lhs = diff_1d(pointwise_bracket(p1, p2, pairing), pairing)
        rhs = pointwise_bracket(diff_1d(p1, pairing), p2, pairing) * pointwise_bracket(p1, diff_1d(p2, pairing), pairing)
        report.points_checked += lhs.table.size
        bad = np.argwhere(lhs.table != rhs.table)
        if len(bad):
            point = tuple(int(i) for i in bad[0])
            report.extra["counterexample"] = {"psi1": n1, "psi2": n2, "x": [G.label(i) for i in point],
                                              "lhs": G.label(lhs.table[point]), "rhs": G.label(rhs.table[point])}
            break
    logger.info(f"Leibniz search with {pairing.name} on {G.name}: "
                f"{'violation found' if report.extra['counterexample'] else 'no violation'}")
    return report


# lab entry point

def _random_zero_sum(rng: np.random.Generator, length: int, bound: int = 4) -> List[int]:
    a = [int(v) for v in rng.integers(-bound, bound + 1, size=length - 1)]
    return a + [-sum(a)]


def _lab_prop_bh(group, target, arity, pairing, rng) -> List[VerificationReport]:
    G, T = group_from_spec(group or "Z5"), group_from_spec(target or "S3")
    seed = child_seed(rng)
    _, report = z3_hexagon_solve(NaryMap.random(G, 2, T, make_rng(seed)))
    report.extra["seed"] = seed
    return [report]


def _lab_prop_gh(group, target, arity, pairing, rng) -> List[VerificationReport]:
    G, T = group_from_spec(group or "Z5"), group_from_spec(target or group or "Z5")
    out = []
    for n in ([arity] if arity else [1, 2, 3]):
        for kind in ("symmetric", "skew"):
            seed = child_seed(rng)
            base = NaryMap.random(G, n, T, make_rng(seed))
            phi = base.symmetrize() if kind == "symmetric" else base.antisymmetrize()
            _, _, report = nary_hexagon_solve(phi, kind)
            report.extra["seed"] = seed
            out.append(report)
    return out


def _lab_cycle(group, target, arity, pairing, rng) -> List[VerificationReport]:
    G = group_from_spec(group or "S3")
    return [cycle_rep_P(G, n, strict=False)[1] for n in ([arity] if arity else [1, 2, 3])]


def _lab_coefficients(group, target, arity, pairing, rng) -> List[VerificationReport]:
    G, T = group_from_spec(group or "Z5"), group_from_spec(target or "Z5")
    n = arity or 2
    out = []
    for _ in range(10):
        seed = child_seed(rng)
        _, report = coefficient_solve(NaryMap.random(G, n, T, make_rng(seed)), _random_zero_sum(rng, n + 1))
        report.extra["seed"] = seed
        out.append(report)
    return out


def _lab_skew(group, target, arity, pairing, rng) -> List[VerificationReport]:
    G, T = group_from_spec(group or "S3"), group_from_spec(target or "S3")
    seed = child_seed(rng)
    phi = NaryMap.random(G, 2, T, make_rng(seed))
    out = [skew_solve(phi)[1], skew_solve(phi, tilde=True)[1]]
    for r in out:
        r.extra["seed"] = seed
    return out


def _lab_parity(group, target, arity, pairing, rng) -> List[VerificationReport]:
    G, T = group_from_spec(group or "S3"), group_from_spec(target or "S3")
    n = arity or 2
    seed = child_seed(rng)
    phi = NaryMap.random(G, n, T, make_rng(seed))
    out = []
    for slots in ([], [1], list(range(1, n + 1))):
        for tilde in (False, True):
            out.append(parity_solve(phi, slots, "quotient", tilde)[1])
        if T.abelian or not slots:
            out.append(parity_solve(phi, slots, "product")[1])
    for r in out:
        r.extra["seed"] = seed
    return out


def _lab_sqrt(group, target, arity, pairing, rng) -> List[VerificationReport]:
    return [square_root_map(group_from_spec(group or "Z5"), strict=False)[1]]


def _pairing_for(name: Optional[str], group: Optional[str], default: str) -> BinaryPairing:
    return make_pairing(name or default, group_from_spec(group) if group else None)


def _lab_prop_1d(group, target, arity, pairing, rng) -> List[VerificationReport]:
    br = _pairing_for(pairing, group, "ring")
    out = []
    for n in ([arity] if arity else [2, 3]):
        for shape in ("symmetric", "skew", "plain"):
            seed = child_seed(rng)
            psi = NaryMap.random(br.group, n, br.group, make_rng(seed))
            if shape == "symmetric":
                psi = psi.symmetrize()
            elif shape == "skew":
                psi = psi.antisymmetrize()
            report = diff_1d_certificate(psi, br)
            report.extra.update({"seed": seed, "shape": shape})
            out.append(report)
    return out


def _lab_prop_2d(group, target, arity, pairing, rng) -> List[VerificationReport]:
    br = _pairing_for(pairing, group, "det")
    seed = child_seed(rng)
    report = diff_2d_certificate(NaryMap.random(br.group, 2, br.group, make_rng(seed)), br)
    report.extra["seed"] = seed
    return [report]


def _lab_prop_3d(group, target, arity, pairing, rng) -> List[VerificationReport]:
    br = _pairing_for(pairing, group, "z2z4")
    seed = child_seed(rng)
    report = diff_3d_certificate(NaryMap.random(br.group, 2, br.group, make_rng(seed)), br)
    report.extra["seed"] = seed
    return [report]


def _lab_leibniz(group, target, arity, pairing, rng) -> List[VerificationReport]:
    br = _pairing_for(pairing, group, "cross")
    return [leibniz_counterexample_search(br, arity or 2, rng)]


def _lab_prop1(group, target, arity, pairing, rng) -> List[VerificationReport]:
    return [projector_certificate(rng)]


LAB_GROUP_PROPS: Dict[str, Callable[..., List[VerificationReport]]] = {
    "prop1": _lab_prop1,
    "prop-bh": _lab_prop_bh,
    "prop-gh": _lab_prop_gh,
    "prop-1d": _lab_prop_1d,
    "prop-2d": _lab_prop_2d,
    "prop-3d": _lab_prop_3d,
    "cycle": _lab_cycle,
    "coefficients": _lab_coefficients,
    "skew": _lab_skew,
    "parity": _lab_parity,
    "sqrt": _lab_sqrt,
    "leibniz": _lab_leibniz,
}

LAB_GROUP_ALIASES = {"z3hexagon": "prop-bh", "nary-hexagon": "prop-gh"}


def run_lab_group(prop_id: str, group: Optional[str] = None, target: Optional[str] = None,
                  arity: Optional[int] = None, pairing: Optional[str] = None, seed: int = 0) -> List[VerificationReport]:
    """Run the exhaustive checks behind one group-lab proposition id.

    Args:
        prop_id: Id from LAB_GROUP_PROPS or one of its aliases.
        group: Source group spec; each id has its own default.
        target: Target group spec.
        arity: Arity of the maps.
        pairing: Pairing catalog name.
        seed: Seed for random maps.

    Returns:
        The reports of every check, certified non-strictly.

    Raises:
        KeyError: If prop_id is unknown.
    """
    key = LAB_GROUP_ALIASES.get(prop_id, prop_id)
    if key not in LAB_GROUP_PROPS:
        raise KeyError(f"unknown group-lab id {prop_id!r}; choose from {sorted(LAB_GROUP_PROPS)}")
    reports = LAB_GROUP_PROPS[key](group, target, arity, pairing, make_rng(seed))
    for r in reports:
        r.extra.setdefault("prop", key)
        certify(r, strict=False)
    return reports
