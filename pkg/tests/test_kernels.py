import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi_workbench import kernels
from calabi_workbench.quadrature import composite_gauss_legendre

needs_cython = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels unavailable")


def random_modes(rng, n, top=9):
    return rng.integers(-top, top + 1, n), rng.integers(-top, top + 1, n), rng.uniform(-1, 1, n), rng.uniform(0, 6, n)


def direct(x, y, m, p, amp, ph):
    kx, ky = m.astype(float), p / math.sqrt(3.0)
    arg = 2 * np.pi * (np.outer(x, kx) + np.outer(y, ky)) + ph
    return (np.cos(arg) @ amp, -(np.sin(arg) @ (2 * np.pi * kx * amp)), -(np.sin(arg) @ (2 * np.pi * ky * amp)))


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_cython)])
def test_eval_modes_matches_direct_sum(backend, rng):
    x, y = rng.uniform(-2, 2, 300), rng.uniform(-2, 2, 300)
    modes = random_modes(rng, 9)
    v, gx, gy = kernels.eval_modes(x, y, *modes, backend=backend)
    ref = direct(x, y, *modes)
    for a, b in zip((v, gx, gy), ref):
        np.testing.assert_allclose(a, b, atol=1e-12)
    v2, g2, h2 = kernels.eval_modes(x, y, *modes, with_grad=False, backend=backend)
    np.testing.assert_array_equal(v2, v)
    assert g2 is None and h2 is None


@needs_cython
def test_backends_agree(rng):
    x, y = rng.uniform(0, 1, 1000), rng.uniform(0, 1, 1000)
    modes = random_modes(rng, 12)
    a = kernels.eval_modes(x, y, *modes, backend="python")
    b = kernels.eval_modes(x, y, *modes, backend="cython")
    for p, q in zip(a, b):
        np.testing.assert_allclose(p, q, atol=1e-13)


@needs_cython
def test_high_frequency_power_tables(rng):
    # repeated multiplication must stay accurate for large indices
    x, y = rng.uniform(0, 1, 200), rng.uniform(0, 1, 200)
    modes = random_modes(rng, 5, top=60)
    v, _, _ = kernels.eval_modes(x, y, *modes, backend="cython")
    np.testing.assert_allclose(v, direct(x, y, *modes)[0], atol=1e-12)


def test_empty_modes():
    v, gx, gy = kernels.eval_modes([0.1, 0.2], [0.3, 0.4], [], [], [], [])
    np.testing.assert_array_equal(v, [0, 0])


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_cython)])
@given(st.lists(st.floats(-1e10, 1e10, allow_nan=False), max_size=200))
def test_compensated_sum_against_fsum(backend, values):
    exact = math.fsum(values)
    # Neumaier bound: one rounding of the result plus an O(n eps^2) term
    eps = np.finfo(float).eps
    bound = 2 * eps * abs(exact) + len(values) * eps**2 * sum(abs(v) for v in values)
    assert abs(kernels.compensated_sum(np.array(values), backend=backend) - exact) <= bound


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_cython)])
def test_compensated_sum_cancellation(backend):
    a = np.array([1.0, 1e100, 1.0, -1e100])
    assert kernels.compensated_sum(a, backend=backend) == 2.0


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.compensated_sum([1.0], backend="fortran")


@pytest.mark.parametrize("n, order", [(16, 16), (64, 16), (40, 16), (5, 16)])
def test_composite_gauss_legendre_exact_on_polynomials(n, order):
    t, w = composite_gauss_legendre(n, order)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all((t > 0) & (t < 1))
    assert np.all(np.diff(t) > 0)
    for p in range(0, 2 * min(n, order) - 1, 3):
        assert t**p @ w == pytest.approx(1 / (p + 1), rel=1e-13)


def test_gauss_legendre_read_only():
    t, _ = composite_gauss_legendre(32)
    with pytest.raises(ValueError):
        t[0] = 1.0
