"""Adaptive consensus for stochastic multi-agent systems."""

import json

from ._core import (
    AdconsError,
    build_laplacian,
    decompose,
    has_spanning_tree,
    run,
    sare_residual,
    solve_sare,
)
from ._core import load_config as _load_config_text

__all__ = [
    "AdconsError",
    "build_laplacian",
    "decompose",
    "has_spanning_tree",
    "load_config",
    "run",
    "sare_residual",
    "solve_sare",
]


def load_config(path):
    """Parse and validate a config file, returning the resolved config as a dict."""
    return json.loads(_load_config_text(str(path)))
