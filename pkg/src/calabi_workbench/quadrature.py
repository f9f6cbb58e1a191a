"""Gauss-Legendre rules on the unit interval."""
from functools import lru_cache

import numpy as np

DEFAULT_PANEL_ORDER = 16


@lru_cache(maxsize=64)
def _gl(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=128)
def composite_gauss_legendre(n: int, panel_order: int = DEFAULT_PANEL_ORDER):
    """Composite rule on [0, 1] with about ``n`` nodes.

    Uses ``n // panel_order`` equal panels of ``panel_order`` points (one
    panel of ``n`` points when ``n <= panel_order``).  Returned arrays are
    read-only and shared between calls.
    """
    if n < 1:
        raise ValueError("need at least one node")
    panels = max(1, n // panel_order)
    order = n // panels
    x, w = _gl(order)
    left = np.arange(panels) / panels
    nodes = (left[:, None] + x[None, :] / panels).ravel()
    weights = np.tile(w / panels, panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights
