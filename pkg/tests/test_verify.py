import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calabi_workbench.cover import SPHERE_AREA_GC, ConformalFactorField, random_field
from calabi_workbench.errors import ResolutionError
from calabi_workbench.lattice import HEX_HEIGHT, SQRT3
from calabi_workbench.reports import FAILS, HOLDS, OUTSIDE
from calabi_workbench.sweep import gamma_lengths
from calabi_workbench.verify import (
    CERT_SLOPE_COEFF,
    SWEEP_SLOPE_COEFF,
    VerifySettings,
    averaged_inequality_check,
    default_alpha_grid,
    default_s_grid,
    diastole_upper_bound,
    neighborhood_certificate,
    sweep_dominance_check,
    theorem_check,
)

FAST = VerifySettings(area_N=64, sup_N=64, s_count=16, alpha_count=33, nodes=64)


def test_grids():
    s = default_s_grid(64)
    assert len(s) == 64 and s[0] > 0 and s[-1] < HEX_HEIGHT
    a = default_alpha_grid(129)
    assert a[64] == 0.5 and a[0] == 0.0 and a[-1] == 1.0


def test_slope_coefficients():
    assert CERT_SLOPE_COEFF == pytest.approx(0.5 * math.tan(math.pi / 6))
    assert SWEEP_SLOPE_COEFF == pytest.approx(math.tan(math.pi / 6))


def test_averaged_zero_field():
    rep = averaged_inequality_check(ConformalFactorField.zero())
    d = rep.details
    assert d["torus_integral_exp_u"] == pytest.approx(HEX_HEIGHT, abs=1e-14)
    assert d["loop_average_integral"] == pytest.approx(HEX_HEIGHT, abs=1e-14)
    assert rep.lhs == pytest.approx(1.0, abs=1e-14)
    assert rep.rhs == pytest.approx(1.0, abs=1e-14)
    assert rep.verdict == HOLDS


@pytest.mark.parametrize("c", [-0.5, 0.3])
def test_averaged_constant_field_is_equality(c):
    rep = averaged_inequality_check(ConformalFactorField.const(c))
    assert rep.details["cauchy_schwarz_lhs"] == pytest.approx(rep.details["cauchy_schwarz_rhs"], rel=1e-13)
    assert rep.margin == pytest.approx(0.0, abs=1e-13)


@settings(max_examples=15)
@given(st.integers(0, 10_000), st.floats(0.01, 0.5))
def test_averaged_strict_for_nonconstant(seed, amp):
    rep = averaged_inequality_check(random_field(seed, amp), 64, FAST)
    assert rep.verdict == HOLDS
    assert rep.details["identity_error"] < 1e-9
    assert rep.details["cauchy_schwarz_lhs"] < rep.details["cauchy_schwarz_rhs"]
    assert rep.margin > 0


def test_loop_identity_against_direct_average():
    # independent check: fine midpoint average of loop lengths
    u = random_field(8, 0.4)
    s = (np.arange(2000) + 0.5) * HEX_HEIGHT / 2000
    direct = float(np.mean(gamma_lengths(u, s))) * HEX_HEIGHT
    rep = averaged_inequality_check(u)
    assert rep.details["torus_integral_exp_u"] == pytest.approx(direct, abs=1e-9)


def test_averaged_resolution_error():
    with pytest.raises(ResolutionError):
        averaged_inequality_check(ConformalFactorField.zero(), 32)


def test_certificate_examples():
    c0 = neighborhood_certificate(ConformalFactorField.zero(), 64, 1.05)
    assert c0.margin == 1.0 and c0.valid
    c = neighborhood_certificate(ConformalFactorField.const(math.log(1.5)), 64, 1.0)
    assert c.sup_dev == pytest.approx(0.5, abs=1e-15)
    assert c.sup_slope == 0.0
    assert c.margin == pytest.approx(0.5, abs=1e-15) and c.valid
    big = neighborhood_certificate(random_field(1, 2.0), 64)
    assert big.margin <= 0 and not big.valid


def test_certificate_safety_inflates():
    u = random_field(4, 0.1)
    a = neighborhood_certificate(u, 64, 1.0)
    b = neighborhood_certificate(u, 64, 1.05)
    assert b.sup_dev == pytest.approx(1.05 * a.sup_dev)
    assert b.margin < a.margin
    assert b.sweep_margin < b.margin


def test_diastole_bound_examples():
    b = diastole_upper_bound(ConformalFactorField.zero())
    assert b.U == pytest.approx(1.0, abs=1e-14)
    U, s_star = b
    assert 0 < s_star < HEX_HEIGHT
    bc = diastole_upper_bound(ConformalFactorField.const(0.2), default_s_grid(8), default_alpha_grid(9))
    assert bc.U == pytest.approx(math.exp(0.2), rel=1e-14)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_diastole_bound_certified_field(seed):
    u = random_field(seed, 0.05)
    b = diastole_upper_bound(u, default_s_grid(16), default_alpha_grid(33), 32, certified=True)
    assert b.U <= float(np.min(b.gamma_lengths)) + 1e-8
    assert b.sweep_max_matches_gamma
    assert b.dominance_gap <= 1e-9


def test_theorem_zero_field():
    rep = theorem_check(ConformalFactorField.zero())
    assert rep.verdict == HOLDS
    assert rep.margin == pytest.approx(0.0, abs=1e-12)
    assert rep.details["near_equality"]
    assert rep.details["variance"] == 0.0
    assert rep.details["area_over_U2"] == pytest.approx(SPHERE_AREA_GC, abs=1e-12)


@pytest.mark.parametrize("c", [-0.2, 0.1])
def test_theorem_constant_field_margin_zero(c):
    rep = theorem_check(ConformalFactorField.const(c), FAST)
    assert rep.margin == pytest.approx(0.0, abs=1e-12)
    assert rep.details["near_equality"] and rep.details["equality_consistent"]
    assert rep.verdict == HOLDS


def test_theorem_homothety_outside_certificate():
    rep = theorem_check(ConformalFactorField.const(math.log(2)), FAST)
    assert rep.verdict == OUTSIDE
    assert rep.margin == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", [3, 4])
def test_theorem_certified_nonconstant(seed):
    rep = theorem_check(random_field(seed, 0.05), FAST)
    assert rep.verdict == HOLDS
    assert rep.margin > 0
    assert not rep.details["near_equality"]


def test_theorem_large_field_outside_regime():
    rep = theorem_check(random_field(0, 2.0), FAST)
    assert rep.verdict == OUTSIDE
    assert math.isfinite(rep.lhs) and math.isfinite(rep.rhs)


def test_dominance_check():
    assert sweep_dominance_check(random_field(6, 0.05), FAST).verdict == HOLDS
    assert sweep_dominance_check(random_field(0, 2.0), FAST).verdict == FAILS


def test_corollary_is_implied_by_averaging():
    # (min l)^2 <= (mean l)^2 <= 2 sqrt3 area, checked with an independent chain
    u = random_field(9, 0.3)
    rep = averaged_inequality_check(u)
    mean_l = rep.details["torus_integral_exp_u"] / HEX_HEIGHT
    assert rep.details["min_loop_length"] <= mean_l
    assert mean_l**2 <= 2 * SQRT3 * rep.details["area"] + 1e-12


@settings(max_examples=10)
@given(st.integers(0, 10_000), st.floats(-0.3, 0.3))
def test_theorem_margin_homothety(seed, c):
    u = random_field(seed, 0.04)
    a = theorem_check(u, FAST)
    b = theorem_check(u + c, FAST)
    assert b.margin == pytest.approx(math.exp(2 * c) * a.margin, rel=1e-9, abs=1e-14)
    assert a.details["near_equality"] == b.details["near_equality"]


@settings(max_examples=10)
@given(st.integers(0, 10_000), st.floats(0.01, 0.5))
def test_diastole_bound_monotone_under_refinement(seed, amp):
    # nested grids: a max over more alphas can only grow, a min over more heights only shrink
    u = random_field(seed, amp)
    coarse = diastole_upper_bound(u, default_s_grid(16), default_alpha_grid(17)).U
    finer_alpha = diastole_upper_bound(u, default_s_grid(16), default_alpha_grid(33)).U
    finer_s = diastole_upper_bound(u, default_s_grid(48), default_alpha_grid(17)).U
    assert finer_alpha >= coarse - 1e-15
    assert finer_s <= coarse + 1e-15
