"""
Orchestration of the full verification suite.

The suite runs every acceptance check at desk scale: projector algebra,
the sigma_3 fixture, dimension counts, the group and torsor labs, the
prime-field five-cycle and the Bloch-Wigner sweep.  Steps are independent,
so they can be spread over several processes with joblib; results are
collected in step order and every step draws its randomness from a seed
fixed before dispatch, so the rendered report does not depend on `jobs`.
"""
import os
from typing import Callable, Dict, List, Sequence, Tuple

from joblib import Parallel, delayed

from .dk_pentagon import drinfeld_kohno, pentagon_residual, semidirect_dimensions
from .five_cycle import dilog_oracle_sweep, five_project_certificate, five_term_sweep, fp_cycle
from .group_lab import run_lab_group
from .grt_ops import (drinfeld_eq3_residual, hexagon_residual, lie2, projector_certificate, sigma3, swap)
from .lie_core import bracket, lyndon_counts, witt_dimension
from .reports import VerificationReport, render_reports, write_report_csv
from .torsor_lab import run_lab_torsor
from .utils import get_logger, make_rng

logger = get_logger(__name__)

FIVE_CYCLE_PRIMES = (5, 7, 11, 13, 17)


def _projectors(seed: int) -> List[VerificationReport]:
    return [projector_certificate(make_rng(seed), samples=100, max_degree=8, pairs=1)]


def _sigma3_fixture(seed: int) -> List[VerificationReport]:
    s = sigma3(max_degree=4)
    x, y = lie2(4)
    xy = bracket(x, y)
    values = {
        "sigma3 skew": s + swap(s),
        "sigma3 hexagon": hexagon_residual(s),
        "sigma3 eq3": drinfeld_eq3_residual(s),
        "sigma3 pentagon": pentagon_residual(s, 3),
        "[x,y] pentagon": pentagon_residual(xy, 3),
        "[x,y] hexagon - 3[x,y]": hexagon_residual(xy) - 3 * xy,
    }
    report = VerificationReport("sigma3_fixture", "lie2", 2, points_checked=len(values))
    for name, value in values.items():
        if not value.is_zero():
            report.add_violation({"identity": name, "residual": repr(value)})
    return [report]


def _dimensions(seed: int) -> List[VerificationReport]:
    report = VerificationReport("dimensions", "lie", 0)
    for k in (2, 3, 6):
        counts = lyndon_counts(k, 10)
        for d in range(1, 11):
            report.points_checked += 1
            if counts[d - 1] != witt_dimension(k, d):
                report.add_violation({"free": k, "degree": d, "lyndon": counts[d - 1], "witt": witt_dimension(k, d)})
    t3 = drinfeld_kohno(3, 5).dimensions()
    center_plus_free = [1 + witt_dimension(2, 1)] + [witt_dimension(2, d) for d in range(2, 6)]
    t4 = drinfeld_kohno(4, 5).dimensions()
    for name, got, want in (("t3", t3, center_plus_free), ("t4", t4, semidirect_dimensions(4, 5))):
        report.points_checked += 1
        if list(got) != list(want):
            report.add_violation({"algebra": name, "dimensions": list(got), "expected": list(want)})
    return [report]


def _group_lab(seed: int) -> List[VerificationReport]:
    runs: List[Tuple[str, Dict]] = [
        ("prop1", {}),
        ("prop-bh", {"group": "Z5", "target": "Z6"}),
        ("prop-bh", {"group": "Z5", "target": "S3"}),
        ("prop-gh", {"group": "Z3"}),
        ("prop-gh", {"group": "Z5"}),
        ("cycle", {"group": "Z4"}),
        ("cycle", {"group": "Z4", "arity": 4}),
        ("cycle", {"group": "S3"}),
        ("cycle", {"group": "S3", "arity": 4}),
        ("coefficients", {"group": "Z5", "target": "Z5"}),
        ("skew", {"group": "S3", "target": "S3"}),
        ("parity", {"group": "S3", "target": "S3"}),
        ("sqrt", {"group": "Z5"}),
    ]
    out = []
    for prop, kwargs in runs:
        out.extend(run_lab_group(prop, seed=seed, **kwargs))
    return out


def _differentials(seed: int) -> List[VerificationReport]:
    out = []
    out.extend(run_lab_group("prop-1d", group="Z3", pairing="ring", seed=seed))
    out.extend(run_lab_group("prop-1d", group="Z5", pairing="ring", arity=2, seed=seed))
    out.extend(run_lab_group("prop-2d", group="Z3^3", pairing="heisenberg", seed=seed))
    out.extend(run_lab_group("prop-3d", seed=seed))
    return out


def _torsor_lab(seed: int) -> List[VerificationReport]:
    out = []
    for torsor in ("Z6", "S3"):
        out.extend(run_lab_torsor("torsor-gamma", torsor=torsor, target="S3", seed=seed))
    out.extend(run_lab_torsor("klein", torsor="Z6", seed=seed))
    out.extend(run_lab_torsor("iota", seed=seed))
    out.extend(run_lab_torsor("torsor-diff", torsor="Z5", seed=seed))
    out.extend(run_lab_torsor("torsor-diff-skew", torsor="Z5", pairing="ring", target="Z2", seed=seed))
    out.extend(run_lab_torsor("gamma-diff", torsor="Z3", pairing="heisenberg", target="Z3^3", seed=seed))
    return out


def _five_cycle(seed: int) -> List[VerificationReport]:
    out = []
    for p in FIVE_CYCLE_PRIMES:
        out.append(fp_cycle(p, strict=False))
        out.append(five_project_certificate(p, "Z3", seed))
        out.append(five_project_certificate(p, None, seed))
    return out


def _bloch_wigner(seed: int) -> List[VerificationReport]:
    return [dilog_oracle_sweep(1000, seed), five_term_sweep(10_000, seed)]


SUITE_STEPS: Sequence[Tuple[str, Callable[[int], List[VerificationReport]]]] = (
    ("projectors", _projectors),
    ("sigma3", _sigma3_fixture),
    ("dimensions", _dimensions),
    ("group_lab", _group_lab),
    ("differentials", _differentials),
    ("torsor_lab", _torsor_lab),
    ("five_cycle", _five_cycle),
    ("bloch_wigner", _bloch_wigner),
)


def run_suite(seed: int = 0, jobs: int = 1) -> List[VerificationReport]:
    """Run every suite step and return the reports in step order."""
    rng = make_rng(seed)
    seeds = [int(s) for s in rng.integers(0, 2**31 - 1, size=len(SUITE_STEPS))]
    logger.info(f"Running {len(SUITE_STEPS)} suite steps with seed {seed} on {jobs} job(s)")
    results = Parallel(n_jobs=jobs)(delayed(step)(s) for (_, step), s in zip(SUITE_STEPS, seeds))
    reports: List[VerificationReport] = []
    for (name, _), step_reports in zip(SUITE_STEPS, results):
        for r in step_reports:
            r.extra.setdefault("step", name)
        failed = sum(not r.passed for r in step_reports)
        logger.info(f"Step {name}: {len(step_reports)} report(s), {failed} failed")
        reports.extend(step_reports)
    return reports


def write_suite(reports: List[VerificationReport], out_dir: str) -> Tuple[str, str]:
    """Store the suite as suite_report.json and suite_summary.csv in `out_dir`."""
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "suite_report.json")
    with open(json_path, "w") as f:
        f.write(render_reports(reports, "json"))
        f.write("\n")
    csv_path = write_report_csv(reports, os.path.join(out_dir, "suite_summary.csv"))
    logger.info(f"Suite report written to {json_path}")
    return json_path, csv_path
