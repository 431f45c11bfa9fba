"""
Verification reports for the exhaustive and sampled checks.

Every construction in the package is certified by sweeping its whole
finite domain (or a seeded sample of a continuous one) and counting the
points where the defining equation fails.  The outcome of such a sweep
is a `VerificationReport`; a list of reports can be rendered as
canonical JSON (byte-identical for identical inputs) or as a text table,
and a suite summary can be stored as CSV.
"""
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from .utils import get_logger

logger = get_logger(__name__)

# Only the first few counterexamples of a sweep are kept in a report.
MAX_VIOLATIONS = 10


def _jsonable(value: Any) -> Any:
    """Convert numpy scalars, tuples and fractions into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


@dataclass
class VerificationReport:
    """Outcome of one certificate sweep."""

    construction: str
    group: str = ""
    arity: int = 0
    points_checked: int = 0
    violations: List[Any] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add_violation(self, violation: Any) -> None:
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append(_jsonable(violation))
        self.extra["violation_count"] = self.extra.get("violation_count", 0) + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "construction": self.construction,
            "group": self.group,
            "arity": self.arity,
            "points_checked": int(self.points_checked),
            "violations": _jsonable(self.violations),
            **{k: _jsonable(v) for k, v in sorted(self.extra.items())},
        }


class VerificationFailure(AssertionError):
    """An exhaustive certificate found a counterexample."""

    def __init__(self, report: VerificationReport):
        self.report = report
        first = report.violations[0] if report.violations else None
        super().__init__(f"{report.construction} failed on {report.group or 'domain'}: first counterexample {first}")


def certify(report: VerificationReport, strict: bool = True) -> VerificationReport:
    """Log the outcome of a sweep and raise when it failed and `strict` is set."""
    if report.passed:
        logger.info(f"{report.construction} [{report.group}] passed on {report.points_checked} points")
        return report
    logger.error(f"{report.construction} [{report.group}] has {report.extra.get('violation_count')} violations; "
                 f"first {report.violations[0]}")
    if strict:
        raise VerificationFailure(report)
    return report


def render_reports(reports: Iterable[VerificationReport], fmt: str = "json") -> str:
    """Render reports as canonical JSON or as a text table."""
    rows = [r.to_dict() for r in reports]
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=2, separators=(",", ": "))
    df = summary_frame(rows)
    return df.to_string(index=False)


def summary_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Tabulate report dictionaries with one row per construction."""
    records = [{
        "construction": r["construction"],
        "group": r["group"],
        "arity": r["arity"],
        "points_checked": r["points_checked"],
        "violations": r.get("violation_count", len(r["violations"])),
        "passed": not r["violations"],
    } for r in rows]
    return pd.DataFrame(records, columns=["construction", "group", "arity", "points_checked", "violations", "passed"])


def write_report_csv(reports: Iterable[VerificationReport], path: str) -> str:
    """Store a suite summary as CSV and return its path."""
    df = summary_frame([r.to_dict() for r in reports])
    df.to_csv(path, index=False)
    logger.info(f"Suite summary written to {path} with {len(df)} rows")
    return path


def first_violation(reports: Iterable[VerificationReport]) -> Optional[VerificationReport]:
    for r in reports:
        if not r.passed:
            return r
    return None


def report_from_mask(construction: str, group: str, arity: int, ok: np.ndarray,
                     describe: Callable[[Sequence[int]], Any], extra: Optional[Dict[str, Any]] = None
                     ) -> VerificationReport:
    """Turn a boolean array over a finite domain into a report.

    `describe` converts the index tuple of a failing point into a
    JSON-ready counterexample (labels, values).
    """
    ok = np.asarray(ok, dtype=bool)
    report = VerificationReport(construction, group, arity, int(ok.size), extra=dict(extra or {}))
    bad = np.argwhere(~ok)
    for point in bad[:MAX_VIOLATIONS]:
        report.violations.append(_jsonable(describe(tuple(int(i) for i in point))))
    if len(bad):
        report.extra["violation_count"] = int(len(bad))
    return report


def merge_reports(construction: str, reports: Sequence[VerificationReport], **extra: Any) -> VerificationReport:
    """Combine sub-checks over the same domain into one report."""
    first = reports[0]
    merged = VerificationReport(construction, first.group, first.arity,
                                sum(r.points_checked for r in reports), extra=dict(extra))
    merged.extra["checks"] = {r.construction: r.passed for r in reports}
    count = 0
    for r in reports:
        for v in r.violations:
            if len(merged.violations) < MAX_VIOLATIONS:
                merged.violations.append({"check": r.construction, "at": v})
        count += r.extra.get("violation_count", len(r.violations))
    if count:
        merged.extra["violation_count"] = count
    return merged
