import pytest
from pydantic import ValidationError

from grtlab.config import RunConfig


@pytest.fixture(autouse=True)
def _isolated(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for key in ("GRTLAB_SEED", "GRTLAB_MAX_DEGREE", "GRTLAB_FORMAT", "GRTLAB_JOBS", "GRTLAB_ARITY"):
        monkeypatch.delenv(key, raising=False)


def test_defaults():
    cfg = RunConfig()
    assert cfg.max_degree == 5
    assert cfg.seed == 0
    assert cfg.jobs == 1
    assert cfg.format is None
    assert cfg.group is None
    assert cfg.arity is None


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv("GRTLAB_SEED", "17")
    monkeypatch.setenv("GRTLAB_FORMAT", "text")
    cfg = RunConfig()
    assert cfg.seed == 17
    assert cfg.format == "text"


def test_dotenv_file_is_read(tmp_path):
    (tmp_path / ".env").write_text("GRTLAB_MAX_DEGREE=7\n")
    assert RunConfig().max_degree == 7


def test_cli_flags_win_over_environment(monkeypatch):
    monkeypatch.setenv("GRTLAB_SEED", "17")
    cfg = RunConfig.from_cli(seed=3, max_degree=None, unknown_flag="ignored")
    assert cfg.seed == 3
    assert cfg.max_degree == 5


@pytest.mark.parametrize("overrides", [{"max_degree": 0}, {"jobs": 0}, {"format": "yaml"}, {"tolerance": 0}])
def test_validation(overrides):
    with pytest.raises(ValidationError):
        RunConfig.from_cli(**overrides)


def test_config_is_frozen():
    cfg = RunConfig()
    with pytest.raises(ValidationError):
        cfg.seed = 4
