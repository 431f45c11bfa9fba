import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from grtlab.reports import (MAX_VIOLATIONS, VerificationFailure, VerificationReport, certify, first_violation,
                            merge_reports, render_reports, report_from_mask, summary_frame, write_report_csv)


def _describe(point):
    return {"x": list(point)}


def test_report_from_mask_keeps_first_violations():
    ok = np.ones((4, 4), dtype=bool)
    ok[1, 2] = False
    ok[3, 0] = False
    report = report_from_mask("demo", "Z4", 2, ok, _describe)
    assert report.points_checked == 16
    assert not report.passed
    assert report.violations == [{"x": [1, 2]}, {"x": [3, 0]}]
    assert report.extra["violation_count"] == 2


def test_violation_list_is_capped():
    report = report_from_mask("demo", "Z5", 2, np.zeros((5, 5), dtype=bool), _describe)
    assert len(report.violations) == MAX_VIOLATIONS
    assert report.extra["violation_count"] == 25


def test_add_violation_converts_values():
    report = VerificationReport("demo")
    report.add_violation({"value": np.int64(3), "coeff": Fraction(1, 3), "pair": (1, 2)})
    assert report.violations == [{"value": 3, "coeff": "1/3", "pair": [1, 2]}]
    assert report.extra["violation_count"] == 1


def test_merge_reports():
    good = report_from_mask("a", "Z2", 1, np.ones(2, dtype=bool), _describe)
    bad = report_from_mask("b", "Z2", 1, np.array([True, False]), _describe)
    merged = merge_reports("both", [good, bad], note="x")
    assert merged.points_checked == 4
    assert merged.extra["checks"] == {"a": True, "b": False}
    assert merged.violations == [{"check": "b", "at": {"x": [1]}}]
    assert merged.extra["violation_count"] == 1
    assert merged.extra["note"] == "x"


def test_certify():
    report = VerificationReport("demo", "Z2", 1, points_checked=2)
    assert certify(report) is report
    report.add_violation({"x": [0]})
    assert certify(report, strict=False) is report
    with pytest.raises(VerificationFailure) as info:
        certify(report)
    assert info.value.report is report
    assert "demo" in str(info.value)


def test_render_json_is_canonical():
    a = VerificationReport("demo", "Z2", 1, 2, extra={"b": 1, "a": (1, 2)})
    b = VerificationReport("demo", "Z2", 1, 2, extra={"a": (1, 2), "b": 1})
    assert render_reports([a]) == render_reports([b])
    data = json.loads(render_reports([a]))
    assert data == [{"construction": "demo", "group": "Z2", "arity": 1, "points_checked": 2, "violations": [],
                     "a": [1, 2], "b": 1}]


def test_render_text_table():
    text = render_reports([VerificationReport("demo", "Z2", 1, 2)], "text")
    assert "construction" in text and "demo" in text


def test_summary_frame_and_csv(tmp_path):
    reports = [VerificationReport("ok", "Z2", 1, 2), VerificationReport("bad", "Z3", 1, 3)]
    reports[1].add_violation({"x": [0]})
    frame = summary_frame([r.to_dict() for r in reports])
    assert frame["passed"].tolist() == [True, False]
    path = write_report_csv(reports, str(tmp_path / "summary.csv"))
    loaded = pd.read_csv(path)
    assert loaded["construction"].tolist() == ["ok", "bad"]
    assert loaded["violations"].tolist() == [0, 1]


def test_first_violation():
    ok = VerificationReport("ok")
    bad = VerificationReport("bad")
    bad.add_violation("x")
    assert first_violation([ok, bad]) is bad
    assert first_violation([ok]) is None
