"""
Finite torsors (heaps) and the symmetrizations living on triples.

A torsor is a set X with a ternary operation tau satisfying

    tau(x, y, y) = x = tau(y, y, x)                        (reflection)
    tau(tau(x, y, z), v, w) = tau(x, y, tau(z, v, w))      (para-associativity)

The three maps f1(x,y,z) = (tau(x,y,z), z, y), f2(x,y,z) = (y, x, tau(x,y,z))
and f3 = f1∘f2 act on X^3; most constructions below are precompositions
with them.  Maps X^3 -> G are `NaryMap` tables whose source is the
`TorsorTable` itself.
"""
import json
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .finite_groups import (BinaryPairing, Coords, FiniteGroup, GroupTableError, MapTableError, NaryMap,
                            compose_maps, domain_coords, group_from_spec, make_pairing, maps_equal)
from .reports import VerificationReport, certify, merge_reports, report_from_mask
from .utils import child_seed, get_logger, make_rng

logger = get_logger(__name__)


class TorsorAxiomError(ValueError):
    """Ternary table fails the reflection or para-associativity law."""


def _checked_shape(name: str, n: int, table) -> np.ndarray:
    table = np.asarray(table, dtype=np.int64)
    if n == 0:
        raise TorsorAxiomError("a torsor is non-empty")
    if table.shape != (n, n, n) or table.min() < 0 or table.max() >= n:
        raise TorsorAxiomError(f"{name}: ternary table must map {n}^3 indices into 0..{n - 1}")
    return table


def axiom_masks(table: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Pointwise truth tables of the reflection law on X^2 and para-associativity on X^5."""
    t = table
    n = t.shape[0]
    x, y = np.indices((n, n))
    reflection = (t[x, y, y] == x) & (t[y, y, x] == x)
    x, y, z, v, w = np.indices((n,) * 5)
    return reflection, t[t[x, y, z], v, w] == t[x, y, t[z, v, w]]


class TorsorTable:
    """Finite set with a validated ternary operation."""

    def __init__(self, name: str, labels: Sequence[Any], table: np.ndarray):
        self.name = name
        self.labels = tuple(labels)
        n = len(self.labels)
        table = _checked_shape(name, n, table)
        table.setflags(write=False)
        self.table = table
        t = table
        reflection, assoc = axiom_masks(table)
        bad = np.argwhere(~reflection)
        if len(bad):
            a, b = bad[0]
            raise TorsorAxiomError(f"{name}: reflection law fails at {self.label(a), self.label(b)}")
        bad = np.argwhere(~assoc)
        if len(bad):
            raise TorsorAxiomError(f"{name}: para-associativity fails at {[self.label(i) for i in bad[0]]}")
        x, y, z, v, w = np.indices((n,) * 5)
        self.heap = bool((t[t[x, y, z], v, w] == t[x, t[v, z, y], w]).all())
        a, b, c = np.indices((n,) * 3)
        self.abelian = bool((t[a, b, c] == t[c, b, a]).all())
        logger.debug(f"Torsor {name}: heap={self.heap}, abelian={self.abelian}")

    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.order

    def label(self, i: int) -> Any:
        return self.labels[int(i)]

    def tau(self, x, y, z):
        return self.table[x, y, z]

    def flags(self) -> Dict[str, bool]:
        return {"heap": self.heap, "abelian": self.abelian}

    def __repr__(self) -> str:
        return f"TorsorTable({self.name}, order={self.order})"


def _describe(T: TorsorTable) -> Callable[[Sequence[int]], List[Any]]:
    def describe(point: Sequence[int]) -> List[Any]:
        return [T.label(i) for i in point]
    return describe


def torsor_from_group(G: FiniteGroup) -> TorsorTable:
    """The torsor of G, tau(x, y, z) = x y^-1 z.

    Args:
        G: Any finite group.

    Returns:
        A torsor named torsor(<G.name>) with G's labels; it is abelian iff G is.
    """
    x, y, z = np.indices((G.order,) * 3)
    return TorsorTable(f"torsor({G.name})", G.labels, G.prod(x, G.inv(y), z))


def torsor_from_table(labels: Sequence[Any], table: Sequence) -> TorsorTable:
    """Torsor from a nested list of label indices, as stored in JSON input."""
    return TorsorTable("table", labels, np.asarray(table))


def read_torsor_json(path: str) -> Tuple[List[Any], List]:
    """Read the unvalidated labels and ternary table of a JSON torsor file."""
    with open(path) as f:
        data = json.load(f)
    return data["labels"], data["table"]


def load_torsor(spec: str) -> TorsorTable:
    """Load a torsor from a group spec or a JSON file.

    Args:
        spec: A group spec such as "Z6" or "S3", or a path to a JSON file
            {"labels": [...], "table": [[[...]]]}.

    Returns:
        The validated torsor.

    Raises:
        TorsorAxiomError: If the JSON table fails a torsor axiom.
    """
    if spec.endswith(".json"):
        return torsor_from_table(*read_torsor_json(spec))
    return torsor_from_group(group_from_spec(spec))


def axiom_certificate(name: str, labels: Sequence[Any], table) -> VerificationReport:
    """Exhaustive reflection and para-associativity report for a raw ternary table.

    Unlike `TorsorTable`, a failing table yields a report with violations
    instead of an exception. Only a malformed shape raises.
    """
    labels = list(labels)
    table = _checked_shape(name, len(labels), table)
    reflection, assoc = axiom_masks(table)

    def describe(point: Sequence[int]) -> List[Any]:
        return [labels[int(i)] for i in point]

    checks = [
        report_from_mask("reflection", name, 3, reflection, describe),
        report_from_mask("para-associativity", name, 3, assoc, describe),
    ]
    return merge_reports("torsor_axioms", checks)


def anchored_group(T: TorsorTable, base: int) -> Tuple[Optional[FiniteGroup], VerificationReport]:
    """The group x∘z = tau(x, e', z) at basepoint e', with a certificate that it recovers tau."""
    n = T.order
    x, z = np.indices((n, n))
    try:
        G = FiniteGroup(f"{T.name}@{T.label(base)}", T.labels, T.table[x, base, z])
    except GroupTableError as exc:
        report = VerificationReport("anchored_group", T.name, 3, points_checked=n * n)
        report.add_violation({"base": T.label(base), "error": str(exc)})
        return None, report
    ok = torsor_from_group(G).table == T.table
    report = report_from_mask("anchored_group", T.name, 3, ok, _describe(T),
                              {"base": T.label(base), "identity": G.label(G.identity)})
    return G, report


def f_coords(T: TorsorTable) -> Tuple[Coords, Coords, Coords]:
    x, y, z = domain_coords(T, 3)
    t = T.tau(x, y, z)
    return (t, z, y), (y, x, t), (z, t, x)


def f_maps(T: TorsorTable, strict: bool = True) -> Tuple[Tuple[Coords, Coords, Coords], VerificationReport]:
    """f1, f2, f3 with certificates; the Klein-four relations are required on abelian torsors.

    Args:
        T: Source torsor.
        strict: Raise VerificationFailure when a required check fails.

    Returns:
        The coordinate arrays of (f1, f2, f3) and the report. Its extra records
        klein_four, abelian and heap.
    """
    f1, f2, f3 = f_coords(T)
    ident = domain_coords(T, 3)
    describe = _describe(T)
    checks = [
        report_from_mask("f1^2=id", T.name, 3, maps_equal(compose_maps(f1, f1), ident), describe),
        report_from_mask("f2^2=id", T.name, 3, maps_equal(compose_maps(f2, f2), ident), describe),
        report_from_mask("f1f2=f3", T.name, 3, maps_equal(compose_maps(f1, f2), f3), describe),
        report_from_mask("f2f1=f3", T.name, 3, maps_equal(compose_maps(f2, f1), f3), describe),
    ]
    klein = [
        report_from_mask("f3^2=id", T.name, 3, maps_equal(compose_maps(f3, f3), ident), describe),
        report_from_mask("f2f3=f1", T.name, 3, maps_equal(compose_maps(f2, f3), f1), describe),
        report_from_mask("f1f3=f2", T.name, 3, maps_equal(compose_maps(f1, f3), f2), describe),
    ]
    klein_holds = all(r.passed for r in klein)
    required = checks + klein if T.abelian else checks
    report = merge_reports("f_maps", required, klein_four=klein_holds, abelian=T.abelian, heap=T.heap)
    return (f1, f2, f3), certify(report, strict)


def gamma_solve(phi: NaryMap, T: TorsorTable, sign: str = "-", tilde: bool = False) -> Tuple[NaryMap, VerificationReport]:
    """gamma^-(x,y,z) = phi(f1)^-1 · phi(f2) or gamma^+ = phi(f2) · phi(f1)^-1.

    Both solve (gamma∘f1)·(gamma∘f2) = e for any target group.

    Args:
        phi: Map X^3 -> G on T.
        T: Source torsor.
        sign: "-" or "+".
        tilde: Return the pointwise inverse of the solution.

    Returns:
        gamma and a non-strict report of the residual.

    Raises:
        MapTableError: On a wrong domain or sign.
    """
    if phi.source is not T or phi.arity != 3:
        raise MapTableError("gamma_solve needs a map X^3 -> G on this torsor")
    f1, f2, _ = f_coords(T)
    a, b = phi.precompose(f1), phi.precompose(f2)
    if sign == "-":
        gamma = a.inverse() * b
    elif sign == "+":
        gamma = b * a.inverse()
    else:
        raise MapTableError(f"sign must be '+' or '-', got {sign!r}")
    if tilde:
        gamma = gamma.inverse()
    residual = gamma.precompose(f1) * gamma.precompose(f2)
    G = phi.target
    name = f"gamma{sign}{'~' if tilde else ''}"

    def describe(point: Sequence[int]) -> Dict[str, Any]:
        return {"x": [T.label(i) for i in point], "residual": G.label(residual.table[tuple(point)])}

    report = report_from_mask(name, f"{T.name}->{G.name}", 3, residual.table == G.identity, describe)
    return gamma, report


def _check_target(phi: NaryMap, T: TorsorTable, pairing: BinaryPairing) -> None:
    if phi.source is not T or phi.arity != 3 or phi.target is not pairing.group:
        raise MapTableError(f"maps must go from {T.name}^3 to {pairing.group.name}")


def torsor_diff(phi: NaryMap, T: TorsorTable, pairing: BinaryPairing, permissive: bool = False) -> NaryMap:
    """(∂phi)(x,y,z) = [phi(tau(x,y,z), z, y), phi(y, x, tau(x,y,z))].

    Args:
        phi: Map X^3 -> G where G is the pairing's group.
        T: Source torsor.
        pairing: Skew, bihomomorphic and alternating pairing on G.
        permissive: Skip the pairing requirement.

    Returns:
        ∂phi; with a qualifying pairing ∂∂phi = e.

    Raises:
        PairingError: If the pairing lacks a required flag and permissive is False.
    """
    if not permissive:
        pairing.require("skew", "bihomomorphic", "alternating")
    _check_target(phi, T, pairing)
    f1, f2, _ = f_coords(T)
    return phi.like(pairing.apply(phi.precompose(f1).table, phi.precompose(f2).table))


def torsor_diff_certificate(phi: NaryMap, T: TorsorTable, pairing: BinaryPairing,
                            permissive: bool = False) -> VerificationReport:
    G = pairing.group
    d = torsor_diff(phi, T, pairing, permissive)
    dd = torsor_diff(d, T, pairing, permissive)
    f1, f2, _ = f_coords(T)
    describe = _describe(T)
    checks = [
        report_from_mask("d^2=e", T.name, 3, dd.table == G.identity, describe),
        report_from_mask("d f1=(d f2)^-1", T.name, 3,
                         d.precompose(f1).table == G.inverse[d.precompose(f2).table], describe),
    ]
    return merge_reports("torsor_diff", checks, pairing=pairing.name, permissive=permissive,
                         pairing_flags=pairing.flags())


def torsor_diff_counterexample_search(T: TorsorTable, pairing: BinaryPairing, rng: np.random.Generator,
                                      trials: int = 3) -> VerificationReport:
    """Look for phi with ∂∂phi != e when the pairing is not required to be alternating.

    ∂∂phi is pointwise [c, c^-1] with c = [phi, phi∘f3], so a skew pairing with
    [c, c] != e breaks the square-zero property. The constant map at the first
    element g with [[g,g],[g,g]] != e, when one exists, is tried before random
    maps.

    Args:
        T: Source torsor.
        pairing: Pairing on the target group, used in permissive mode.
        rng: Source of the child seeds for random candidates.
        trials: Number of random candidates.

    Returns:
        Search report; extra["counterexample"] is None when every candidate
        squares to e.
    """
    G = pairing.group
    candidates: List[Tuple[str, NaryMap]] = []
    diag = np.diagonal(pairing.table)
    hits = np.flatnonzero(pairing.table[diag, diag] != G.identity)
    if len(hits):
        g = int(hits[0])
        candidates.append((f"constant({G.label(g)})", NaryMap.constant(T, 3, G, g)))
    for _ in range(trials):
        seed = child_seed(rng)
        candidates.append((f"random(seed={seed})", NaryMap.random(T, 3, G, make_rng(seed))))
    report = VerificationReport("torsor_diff_search", T.name, 3, extra={"pairing": pairing.name,
                                                                     "flags": pairing.flags(), "counterexample": None})
    for label, phi in candidates:
        dd = torsor_diff(torsor_diff(phi, T, pairing, permissive=True), T, pairing, permissive=True)
        report.points_checked += dd.table.size
        bad = np.argwhere(dd.table != G.identity)
        if len(bad):
            point = tuple(int(i) for i in bad[0])
            report.extra["counterexample"] = {"phi": label, "x": [T.label(i) for i in point],
                                              "d2": G.label(dd.table[point])}
            break
    logger.info(f"torsor_diff search with {pairing.name} on {T.name}: "
                f"{'counterexample found' if report.extra['counterexample'] else 'none found'}")
    return report


def canonical_gamma(phi0: NaryMap, T: TorsorTable) -> NaryMap:
    """gamma = phi0∘f1 - phi0∘f2, which satisfies gamma∘f1 + gamma∘f2 = 0."""
    f1, f2, _ = f_coords(T)
    return phi0.precompose(f1) * phi0.precompose(f2).inverse()


def _check_gamma(gamma: NaryMap, T: TorsorTable) -> None:
    f1, f2, _ = f_coords(T)
    if not (gamma.precompose(f1) * gamma.precompose(f2)).is_identity():
        raise MapTableError("gamma does not satisfy gamma∘f1 + gamma∘f2 = 0")


def gamma_diff(gamma: NaryMap, phi: NaryMap, T: TorsorTable, pairing: BinaryPairing, sign: str = "+") -> NaryMap:
    """(∂^gamma phi) = [gamma, phi∘f1 ± phi∘f2] for an abelian target.

    Args:
        gamma: Map X^3 -> G with gamma∘f1 + gamma∘f2 = 0.
        phi: Map X^3 -> G.
        T: Source torsor.
        pairing: Bihomomorphic pairing on the abelian group G.
        sign: "+" or "-".

    Returns:
        ∂^gamma phi.

    Raises:
        MapTableError: If G is not abelian, a map has the wrong domain, or gamma
            is not a solution.
    """
    G = pairing.group
    if not G.abelian:
        raise MapTableError(f"gamma_diff needs an abelian target, got {G.name}")
    pairing.require("bihomomorphic")
    _check_target(phi, T, pairing)
    _check_target(gamma, T, pairing)
    _check_gamma(gamma, T)
    f1, f2, _ = f_coords(T)
    b = phi.precompose(f2)
    if sign == "-":
        b = b.inverse()
    elif sign != "+":
        raise MapTableError(f"sign must be '+' or '-', got {sign!r}")
    return phi.like(pairing.apply(gamma.table, (phi.precompose(f1) * b).table))


def gamma_diff_certificate(gamma: NaryMap, phi: NaryMap, other: NaryMap, T: TorsorTable,
                           pairing: BinaryPairing, sign: str = "+") -> VerificationReport:
    """∂^gamma∂^gamma = 0, the output symmetry and, for sign + with a Lie bracket, the modified Leibniz rule."""
    G = pairing.group
    f1, f2, f3 = f_coords(T)
    d = gamma_diff(gamma, phi, T, pairing, sign)
    dd = gamma_diff(gamma, d, T, pairing, sign)
    second = d.precompose(f2) if sign == "+" else d.precompose(f2).inverse()
    out_sym = d.precompose(f1) * second
    describe = _describe(T)
    checks = [
        report_from_mask("d^2=0", T.name, 3, dd.table == G.identity, describe),
        report_from_mask("output_symmetry", T.name, 3, out_sym.table == G.identity, describe),
    ]
    if sign == "+" and pairing.is_lie_bracket:
        def br(u: NaryMap, v: NaryMap) -> NaryMap:
            return u.like(pairing.apply(u.table, v.table))

        lhs = gamma_diff(gamma, br(phi, other * other.precompose(f3)), T, pairing)
        mirrored = gamma_diff(gamma, br(phi * phi.precompose(f3), other), T, pairing)
        d_phi = gamma_diff(gamma, phi, T, pairing)
        d_other = gamma_diff(gamma, other, T, pairing)
        rhs = gamma_diff(d_phi, other, T, pairing) * gamma_diff(d_other, phi, T, pairing).inverse()
        checks.append(report_from_mask("modified_leibniz", T.name, 3, lhs.table == rhs.table, describe))
        checks.append(report_from_mask("leibniz_mirror", T.name, 3, lhs.table == mirrored.table, describe))
        # ∂[phi, other] = [∂phi, b] + [a, ∂other] - [gamma, [phi f1, other f2] + [phi f2, other f1]]
        pf1, pf2 = phi.precompose(f1), phi.precompose(f2)
        of1, of2 = other.precompose(f1), other.precompose(f2)
        a, b = pf1 * pf2, of1 * of2
        cross = br(gamma, br(pf1, of2) * br(pf2, of1))
        unfolded = br(d_phi, b) * br(a, d_other) * cross.inverse()
        plain = gamma_diff(gamma, br(phi, other), T, pairing)
        checks.append(report_from_mask("leibniz_unfolded", T.name, 3, plain.table == unfolded.table, describe))
    return merge_reports("gamma_diff", checks, pairing=pairing.name, sign=sign)


def iota_map(T: TorsorTable) -> Coords:
    x, y, z = domain_coords(T, 3)
    u = T.tau(y, x, z)
    return u, x, T.tau(u, x, y)


def iota_cycle(T: TorsorTable, strict: bool = True) -> Tuple[Coords, VerificationReport]:
    """iota(x,y,z) = (tau(y,x,z), x, tau(tau(y,x,z), x, y)).

    Args:
        T: Source torsor.
        strict: Raise VerificationFailure when a check fails.

    Returns:
        The coordinate arrays of iota and a report of iota^3 = id and of the
        closed form of iota^2.
    """
    i1 = iota_map(T)
    i2 = compose_maps(i1, i1)
    i3 = compose_maps(i1, i2)
    x, y, z = domain_coords(T, 3)
    u = T.tau(y, x, z)
    closed = (y, u, T.tau(y, u, x))
    describe = _describe(T)
    checks = [
        report_from_mask("iota^3=id", T.name, 3, maps_equal(i3, domain_coords(T, 3)), describe),
        report_from_mask("iota^2 formula", T.name, 3, maps_equal(i2, closed), describe),
    ]
    report = merge_reports("iota", checks, heap=T.heap)
    return i1, certify(report, strict)


# lab entry point

def _lab_axioms(torsor, target, pairing, rng) -> List[VerificationReport]:
    spec = torsor or "S3"
    if spec.endswith(".json"):
        return [axiom_certificate(spec, *read_torsor_json(spec))]
    T = load_torsor(spec)
    report = axiom_certificate(T.name, T.labels, T.table)
    report.extra.update(T.flags())
    return [report]


def _lab_klein(torsor, target, pairing, rng) -> List[VerificationReport]:
    return [f_maps(load_torsor(torsor or "Z5"), strict=False)[1]]


def _lab_anchored(torsor, target, pairing, rng) -> List[VerificationReport]:
    T = load_torsor(torsor or "S3")
    return [anchored_group(T, b)[1] for b in range(T.order)]


def _lab_gamma(torsor, target, pairing, rng) -> List[VerificationReport]:
    T = load_torsor(torsor or "Z6")
    G = group_from_spec(target or "S3")
    seed = child_seed(rng)
    phi = NaryMap.random(T, 3, G, make_rng(seed))
    out = []
    for sign in ("-", "+"):
        for tilde in (False, True):
            report = gamma_solve(phi, T, sign, tilde)[1]
            report.extra["seed"] = seed
            out.append(report)
    return out


def _lab_torsor_diff(torsor, target, pairing, rng) -> List[VerificationReport]:
    T = load_torsor(torsor or "Z5")
    br = make_pairing(pairing or "heisenberg", group_from_spec(target or "Z5^3"))
    seed = child_seed(rng)
    report = torsor_diff_certificate(NaryMap.random(T, 3, br.group, make_rng(seed)), T, br)
    report.extra["seed"] = seed
    return [report]


def _lab_torsor_diff_skew(torsor, target, pairing, rng) -> List[VerificationReport]:
    T = load_torsor(torsor or "Z5")
    br = make_pairing(pairing or "ring", group_from_spec(target or "Z2"))
    return [torsor_diff_counterexample_search(T, br, rng)]


def _lab_gamma_diff(torsor, target, pairing, rng) -> List[VerificationReport]:
    T = load_torsor(torsor or "Z3")
    br = make_pairing(pairing or "heisenberg", group_from_spec(target) if target else None)
    seeds = [child_seed(rng) for _ in range(3)]
    phi0, phi, other = (NaryMap.random(T, 3, br.group, make_rng(s)) for s in seeds)
    gamma = canonical_gamma(phi0, T)
    out = []
    for sign in ("+", "-"):
        report = gamma_diff_certificate(gamma, phi, other, T, br, sign)
        report.extra["seeds"] = seeds
        out.append(report)
    return out


def _lab_iota(torsor, target, pairing, rng) -> List[VerificationReport]:
    specs = [torsor] if torsor else ["Z2", "Z5", "S3"]
    return [iota_cycle(load_torsor(s), strict=False)[1] for s in specs]


LAB_TORSOR_PROPS: Dict[str, Callable[..., List[VerificationReport]]] = {
    "torsor-gamma": _lab_gamma,
    "torsor-diff": _lab_torsor_diff,
    "torsor-diff-skew": _lab_torsor_diff_skew,
    "gamma-diff": _lab_gamma_diff,
    "iota": _lab_iota,
    "klein": _lab_klein,
    "axioms": _lab_axioms,
    "anchored": _lab_anchored,
}


def run_lab_torsor(prop_id: str, torsor: Optional[str] = None, target: Optional[str] = None,
                   pairing: Optional[str] = None, seed: int = 0) -> List[VerificationReport]:
    """Run the exhaustive checks behind one torsor-lab proposition id.

    Args:
        prop_id: Id from LAB_TORSOR_PROPS.
        torsor: Group spec or JSON path for the source torsor.
        target: Target group spec.
        pairing: Pairing catalog name.
        seed: Seed for random maps.

    Returns:
        The reports of every check, certified non-strictly.

    Raises:
        KeyError: If prop_id is unknown.
    """
    if prop_id not in LAB_TORSOR_PROPS:
        raise KeyError(f"unknown torsor-lab id {prop_id!r}; choose from {sorted(LAB_TORSOR_PROPS)}")
    reports = LAB_TORSOR_PROPS[prop_id](torsor, target, pairing, make_rng(seed))
    for r in reports:
        r.extra.setdefault("prop", prop_id)
        certify(r, strict=False)
    return reports
