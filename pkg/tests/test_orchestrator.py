import json

import pandas as pd
import pytest

import grtlab.orchestrator as orchestrator
from grtlab.reports import render_reports


@pytest.fixture
def small_suite(monkeypatch):
    steps = (
        ("sigma3", orchestrator._sigma3_fixture),
        ("dimensions", orchestrator._dimensions),
        ("torsor_lab", orchestrator._torsor_lab),
    )
    monkeypatch.setattr(orchestrator, "SUITE_STEPS", steps)
    return steps


def test_suite_steps_pass(small_suite):
    reports = orchestrator.run_suite(seed=0)
    assert reports
    assert all(r.passed for r in reports)
    assert [r.extra["step"] for r in reports][:2] == ["sigma3", "dimensions"]


def test_output_does_not_depend_on_jobs(small_suite):
    serial = render_reports(orchestrator.run_suite(seed=4, jobs=1))
    parallel = render_reports(orchestrator.run_suite(seed=4, jobs=2))
    assert serial == parallel


def test_five_cycle_step_covers_every_prime():
    reports = orchestrator._five_cycle(seed=0)
    primes = sorted({r.extra["prime"] for r in reports})
    assert primes == list(orchestrator.FIVE_CYCLE_PRIMES)
    assert all(r.passed for r in reports)


def test_write_suite(small_suite, tmp_path):
    reports = orchestrator.run_suite(seed=0)
    json_path, csv_path = orchestrator.write_suite(reports, str(tmp_path / "suite"))
    with open(json_path) as f:
        assert len(json.load(f)) == len(reports)
    frame = pd.read_csv(csv_path)
    assert len(frame) == len(reports)
    assert frame["passed"].all()
