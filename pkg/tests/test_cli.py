import io
import json

import pytest

import grtlab.cli as cli
from grtlab.reports import VerificationReport


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for key in ("GRTLAB_FORMAT", "GRTLAB_SEED", "GRTLAB_MAX_DEGREE", "GRTLAB_JOBS", "GRTLAB_ARITY", "GRTLAB_TARGET"):
        monkeypatch.delenv(key, raising=False)


def invoke(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    return code, out.getvalue()


class TestSeriesCommands:

    def test_lie_eval_normalises(self):
        assert invoke("lie", "eval", "[x,y] - [y,x]") == (0, "2 [x,y]\n")

    def test_lie_json(self):
        code, out = invoke("lie", "json", "[a,b]", "--alphabet", "a,b")
        assert code == 0
        data = json.loads(out)
        assert data["alphabet"] == ["a", "b"]
        assert data["terms"] == [{"word": "ab", "coeff": "1"}]

    def test_parse_error_is_a_usage_error(self, capsys):
        code, _ = invoke("lie", "eval", "[x,z]")
        assert code == 2
        assert "unknown generator" in capsys.readouterr().err

    @pytest.mark.parametrize("kind, expr, expected", [
        ("hexagon", "[x,y]", "0"),
        ("antihexagon", "[x,y]", "[x,y]"),
        ("hexagon", "x", "x"),
        ("skew", "[x,y]", "[x,y]"),
    ])
    def test_project(self, kind, expr, expected):
        assert invoke("project", kind, expr) == (0, expected + "\n")

    def test_zero_residual_exits_zero(self):
        sigma3 = "[x,[x,y]] - [y,[y,x]]"
        for kind in ("hexagon", "eq3", "pentagon"):
            assert invoke("residual", kind, sigma3, "--max-degree", "3") == (0, "0\n")

    def test_nonzero_residual_exits_one(self, capsys):
        code, out = invoke("residual", "hexagon", "[x,y]")
        assert code == 1
        assert out == "3 [x,y]\n"
        assert "non-zero" in capsys.readouterr().err

    def test_pentagon_residual_of_generator(self):
        assert invoke("residual", "pentagon", "x", "--max-degree", "2") == (1, "-t12\n")

    def test_ihara_bracket(self):
        assert invoke("ihara", "x", "y") == (0, "0\n")

    def test_dk_dims(self):
        assert invoke("dk", "dims", "--n", "4", "--max-degree", "5") == (0, "6 4 10 21 54\n")
        code, out = invoke("dk", "dims", "--n", "3", "--max-degree", "3", "--format", "json")
        assert json.loads(out)["dimensions"] == [3, 1, 2]

    def test_dk_reduce_with_aliases(self):
        assert invoke("dk", "reduce", "[t21,t34]", "--n", "4", "--max-degree", "2") == (0, "0\n")

    def test_format_from_environment(self, monkeypatch):
        monkeypatch.setenv("GRTLAB_FORMAT", "json")
        code, out = invoke("project", "hexagon", "x")
        assert json.loads(out)["terms"] == [{"word": "x", "coeff": "1"}]


class TestReportCommands:

    def test_lab_group_json(self):
        code, out = invoke("lab", "group", "z3hexagon", "--group", "S3", "--seed", "1")
        assert code == 0
        (report,) = json.loads(out)
        assert report["points_checked"] == 36
        assert report["prop"] == "prop-bh"

    def test_lab_group_text(self):
        code, out = invoke("lab", "group", "cycle", "--group", "Z3", "--arity", "2", "--format", "text")
        assert code == 0
        assert "cycle_rep_P" in out

    def test_lab_torsor(self):
        code, out = invoke("lab", "torsor", "iota", "--torsor", "Z4")
        assert code == 0
        assert json.loads(out)[0]["construction"] == "iota"

    def test_bad_pairing_is_a_usage_error(self, capsys):
        code, _ = invoke("lab", "group", "prop-2d", "--group", "Z5", "--pairing", "ring")
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_prop_is_rejected_by_the_parser(self):
        code, _ = invoke("lab", "group", "prop-99")
        assert code == 2

    def test_failed_check_prints_counterexample(self, monkeypatch, capsys):
        bad = VerificationReport("demo", "Z2", 1, 2)
        bad.add_violation({"x": [1]})
        monkeypatch.setattr(cli, "run_lab_group", lambda *a, **k: [bad])
        code, out = invoke("lab", "group", "sqrt")
        assert code == 1
        assert json.loads(out)[0]["violations"] == [{"x": [1]}]
        assert '{"x": [1]}' in capsys.readouterr().err

    def test_lab_group_reads_arity_and_target_from_environment(self, monkeypatch):
        seen = {}

        def capture(prop, **kwargs):
            seen.update(kwargs)
            return [VerificationReport("demo", "Z2", 1, 1)]

        monkeypatch.setattr(cli, "run_lab_group", capture)
        monkeypatch.setenv("GRTLAB_ARITY", "3")
        monkeypatch.setenv("GRTLAB_TARGET", "Z2")
        assert invoke("lab", "group", "cycle")[0] == 0
        assert (seen["arity"], seen["target"]) == (3, "Z2")
        assert invoke("lab", "group", "cycle", "--arity", "4")[0] == 0
        assert seen["arity"] == 4

    def test_lab_group_arity_defaults_to_the_prop_default(self, monkeypatch):
        seen = {}
        demo = VerificationReport("demo", "Z2", 1, 1)
        monkeypatch.setattr(cli, "run_lab_group", lambda prop, **kwargs: seen.update(kwargs) or [demo])
        invoke("lab", "group", "cycle")
        assert seen["arity"] is None

    def test_fivecycle_target_from_environment(self, monkeypatch):
        monkeypatch.setenv("GRTLAB_TARGET", "Z2")
        code, out = invoke("fivecycle", "fp", "--prime", "7")
        assert code == 0
        assert json.loads(out)[1]["target"] == "Z2"

    def test_fivecycle_fp(self):
        code, out = invoke("fivecycle", "fp", "--prime", "7")
        assert code == 0
        cycle, projector = json.loads(out)
        assert cycle["orbit_census"] == {"1": 0, "5": 4}
        assert projector["target"] == "Z3"

    def test_fivecycle_bad_prime(self):
        assert invoke("fivecycle", "fp", "--prime", "8")[0] == 2

    def test_suite_writes_outputs(self, monkeypatch, tmp_path):
        monkeypatch.setattr(cli, "run_suite", lambda seed, jobs: [VerificationReport("demo", "Z2", 1, 4)])
        code, out = invoke("suite", "--out-dir", str(tmp_path / "out"))
        assert code == 0
        assert json.loads(out)[0]["construction"] == "demo"
        assert (tmp_path / "out" / "suite_report.json").exists()
        assert (tmp_path / "out" / "suite_summary.csv").exists()

    def test_zero_jobs_is_rejected(self):
        assert invoke("suite", "--jobs", "0")[0] == 2


def test_help_exits_zero():
    assert invoke("--help")[0] == 0
