"""Backend selection for the hot loops.

The compiled extension is used when it was built; set the environment
variable ``CALABI_WORKBENCH_PURE=1`` to force the numpy fallback.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("CALABI_WORKBENCH_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def _as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64).ravel()


def _as_i64(a):
    return np.ascontiguousarray(a, dtype=np.int64).ravel()


def eval_modes(x, y, m, p, amp, phase, with_grad=True, backend=None):
    """Evaluate ``sum_j amp_j cos(2 pi (m_j x + p_j y / sqrt 3) + phase_j)``.

    Frequencies are integer pairs ``(m, p)``, which covers every vector of
    the dual hexagonal lattice.  Returns ``(values, grad_x, grad_y)`` as flat
    arrays; the gradients are ``None`` when ``with_grad`` is false.
    """
    impl = _select(backend)
    return impl.eval_modes(_as_f64(x), _as_f64(y), _as_i64(m), _as_i64(p),
                           _as_f64(amp), _as_f64(phase), with_grad)


def compensated_sum(a, backend=None):
    """Order-fixed compensated sum of a 1-D array."""
    return float(_select(backend).compensated_sum(_as_f64(a)))


def _select(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _pykernels
    if backend == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {backend!r}")
