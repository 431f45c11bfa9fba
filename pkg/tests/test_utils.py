import logging

from grtlab.utils import child_seed, get_logger, make_rng


def test_loggers_share_the_package_root():
    log = get_logger("grtlab.some_module")
    root = logging.getLogger("grtlab")
    assert log.name == "grtlab.some_module"
    assert root.propagate is False
    assert sum(type(h) is logging.StreamHandler for h in root.handlers) == 1
    get_logger("grtlab.other_module")
    assert sum(type(h) is logging.StreamHandler for h in root.handlers) == 1


def test_log_dir_adds_a_file_handler(tmp_path):
    root = logging.getLogger("grtlab")
    before = list(root.handlers)
    try:
        get_logger("grtlab.cli", log_dir=str(tmp_path))
        files = [h for h in root.handlers if isinstance(h, logging.FileHandler)]
        assert files
        assert list(tmp_path.glob("grtlab_*.log"))
    finally:
        for h in root.handlers[:]:
            if h not in before:
                root.removeHandler(h)
                h.close()


def test_seeded_generators_are_reproducible():
    a, b = make_rng(5), make_rng(5)
    assert child_seed(a) == child_seed(b)
    assert 0 <= child_seed(make_rng(1)) < 2**31 - 1
