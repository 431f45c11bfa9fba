"""
Utility functions shared by the grtlab modules.

Logging is centralised here so that every module shares the same
formatting and destination.  The `get_logger` function returns a
logger whose package root (``grtlab``) carries a stream handler on
stderr and, when a log directory is given, a file handler writing a
timestamped log file into it.  Module loggers are children of that
root, so handlers are configured once for the whole package.

The module also hands out seeded random generators so that every
randomised sweep in the package is reproducible from a single seed.
"""
import logging
import os
from datetime import datetime
from typing import Optional

import numpy as np

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


def get_logger(name: str, log_dir: Optional[str] = None, level: Optional[int] = None) -> logging.Logger:
    """Create and return a logger that writes to stderr and optionally a file.

    Args:
        name: Name of the logger (often __name__).
        log_dir: Directory where log files should be saved.  No file
            handler is attached when omitted.
        level: Logging level; left untouched when omitted.

    Returns:
        Configured logger instance.
    """
    root = logging.getLogger(name.split(".")[0])
    if level is not None:
        root.setLevel(level)
    elif root.level == logging.NOTSET:
        root.setLevel(logging.INFO)
    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=LOG_DATEFMT)
    # Avoid adding duplicate handlers if logger already configured
    if not any(type(h) is logging.StreamHandler for h in root.handlers):
        sh = logging.StreamHandler()
        sh.setFormatter(formatter)
        root.addHandler(sh)
    if log_dir and not any(isinstance(h, logging.FileHandler) for h in root.handlers):
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        fh = logging.FileHandler(os.path.join(log_dir, f"{root.name}_{timestamp}.log"))
        fh.setFormatter(formatter)
        root.addHandler(fh)
    root.propagate = False
    return logging.getLogger(name)


def make_rng(seed: int) -> np.random.Generator:
    """Return the numpy generator every randomised sweep draws from."""
    return np.random.default_rng(seed)


def child_seed(rng: np.random.Generator) -> int:
    """Draw a seed for a nested construction so reports can print it."""
    return int(rng.integers(0, 2**31 - 1))
