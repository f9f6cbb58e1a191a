"""The inequality engine.

Chains the averaging argument over the loops ``gamma(s)``, the
neighbourhood certificate, the sweep-out upper bound on the diastole and
the final area/diastole inequality with its equality case.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .cover import (
    SPHERE_AREA_GC,
    ConformalFactorField,
    field_moments,
    sphere_area,
    sup_deviation,
    sup_slope,
    torus_integral,
)
from .lattice import HEX_HEIGHT, SQRT3
from .reports import FAILS, HOLDS, OUTSIDE, InequalityReport
from .sweep import gamma_lengths, sweep_lengths

# coefficient of sup|d_y exp(u)| in the neighbourhood condition: (1/2) tan(pi/6)
CERT_SLOPE_COEFF = 0.5 / SQRT3
# sup over all sweep domains of area / (length drop); the hexagon half of
# the family needs tan(pi/6) rather than (1/2) tan(pi/6)
SWEEP_SLOPE_COEFF = 1.0 / SQRT3


@dataclass(frozen=True)
class VerifySettings:
    area_N: int = 128
    sup_N: int = 256
    s_count: int = 64
    alpha_count: int = 129
    nodes: int = 64
    safety: float = 1.05
    tol: float = 1e-8
    identity_tol: float = 1e-9
    equality_rel: float = 1e-7
    variance_tol: float = 1e-10

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_SETTINGS = VerifySettings()


def default_s_grid(count: int = 64) -> np.ndarray:
    """Midpoints of ``count`` equal cells of [0, sqrt(3)/2]; never a special height."""
    return (np.arange(count) + 0.5) * (HEX_HEIGHT / count)


def default_alpha_grid(count: int = 129) -> np.ndarray:
    """``count`` equispaced values in [0, 1]; odd counts contain 1/2 exactly."""
    return np.linspace(0.0, 1.0, count)


def averaged_inequality_check(u: ConformalFactorField, N: int = 128,
                              settings: VerifySettings = DEFAULT_SETTINGS) -> InequalityReport:
    """Averaging over the loops, Cauchy-Schwarz, and the resulting corollary.

    (a) the s-average of ``l_g(gamma_s)`` equals the torus integral of
    ``exp(u)`` (midpoint rule in s and Gauss-Legendre along each loop
    against the periodic trapezoid rule on the torus); (b) that integral is
    at most ``3 sqrt(area(g) area(g_c))``; (c) ``(min_s l_g(gamma_s))^2 <=
    2 sqrt(3) area(g)``.  None of this needs the neighbourhood condition.
    """
    if N < 64:
        from .errors import ResolutionError

        raise ResolutionError(f"N={N} below minimum 64")
    torus_int = torus_integral(u, N, np.exp)
    s_mid = (np.arange(N) + 0.5) * (HEX_HEIGHT / N)
    loop_int = kernels.compensated_sum(gamma_lengths(u, s_mid, settings.nodes)) * (HEX_HEIGHT / N)
    identity_err = abs(loop_int - torus_int)
    identity_ok = identity_err <= settings.identity_tol * max(1.0, abs(torus_int))

    area = sphere_area(u, N)
    cs_rhs = 3.0 * math.sqrt(area * SPHERE_AREA_GC)
    cs_ok = torus_int <= cs_rhs + settings.tol

    s_grid = default_s_grid(settings.s_count)
    lg = gamma_lengths(u, s_grid, settings.nodes)
    j = int(np.argmin(lg))
    lhs = float(lg[j]) ** 2
    rhs = 2.0 * SQRT3 * area
    corollary_ok = lhs <= rhs + settings.tol
    verdict = HOLDS if (identity_ok and cs_ok and corollary_ok) else FAILS
    return InequalityReport(
        name="averaged_inequality",
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        tolerances={"tol": settings.tol, "identity_tol": settings.identity_tol},
        settings={"N": N, "s_count": settings.s_count, "nodes": settings.nodes},
        details={
            "loop_average_integral": loop_int,
            "torus_integral_exp_u": torus_int,
            "identity_error": identity_err,
            "identity_holds": identity_ok,
            "cauchy_schwarz_lhs": torus_int,
            "cauchy_schwarz_rhs": cs_rhs,
            "cauchy_schwarz_holds": cs_ok,
            "corollary_holds": corollary_ok,
            "min_loop_length": float(lg[j]),
            "argmin_s": float(s_grid[j]),
            "area": area,
        },
        field_digest=u.digest,
    )


@dataclass
class NeighborhoodCertificate:
    """Grid-sampled membership test for the neighbourhood of ``g_c``.

    ``margin = 1 - sup_dev - (1/(2 sqrt 3)) sup_slope`` with both sups
    inflated by ``safety``.  ``sweep_margin`` uses the coefficient that
    bounds every domain of the implemented sweep family.
    """

    sup_dev: float
    sup_slope: float
    raw_sup_dev: float
    raw_sup_slope: float
    N: int
    safety: float
    margin: float = field(init=False)
    sweep_margin: float = field(init=False)

    def __post_init__(self):
        self.margin = 1.0 - self.sup_dev - CERT_SLOPE_COEFF * self.sup_slope
        self.sweep_margin = 1.0 - self.sup_dev - SWEEP_SLOPE_COEFF * self.sup_slope

    @property
    def valid(self) -> bool:
        return self.margin > 0.0

    @property
    def sweep_valid(self) -> bool:
        return self.sweep_margin > 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["valid"] = self.valid
        d["sweep_valid"] = self.sweep_valid
        return d


def neighborhood_certificate(u: ConformalFactorField, N: int = 256, safety: float = 1.05) -> NeighborhoodCertificate:
    if N < 64:
        from .errors import ResolutionError

        raise ResolutionError(f"N={N} below minimum 64")
    dev = sup_deviation(u, N)
    slope = sup_slope(u, N)
    return NeighborhoodCertificate(safety * dev, safety * slope, dev, slope, N, safety)


@dataclass
class DiastoleBound:
    U: float
    s_star: float
    lengths: np.ndarray
    gamma_lengths: np.ndarray
    s_grid: np.ndarray
    alpha_grid: np.ndarray
    sweep_max_matches_gamma: bool | None = None

    def __iter__(self):
        yield self.U
        yield self.s_star

    @property
    def dominance_gap(self) -> float:
        """``max over the grid of l_g(z_s^alpha) - l_g(gamma_s)``."""
        return float(np.max(self.lengths - self.gamma_lengths[:, None]))


def diastole_upper_bound(u: ConformalFactorField, s_grid=None, alpha_grid=None, nodes: int = 64,
                         certified: bool = False, tol: float = 1e-8) -> DiastoleBound:
    """``min_s max_alpha l_g(z_s^alpha)`` over the grids, and the minimising s.

    With ``certified=True`` also records whether the sweep maximum at the
    minimiser equals ``l_g(gamma_{s*})``.
    """
    s_grid = default_s_grid() if s_grid is None else np.atleast_1d(np.asarray(s_grid, dtype=float))
    alpha_grid = default_alpha_grid() if alpha_grid is None else np.atleast_1d(np.asarray(alpha_grid, dtype=float))
    L = sweep_lengths(u, s_grid, alpha_grid, nodes)
    lg = gamma_lengths(u, s_grid, nodes)
    per_s = L.max(axis=1)
    j = int(np.argmin(per_s))
    out = DiastoleBound(float(per_s[j]), float(s_grid[j]), L, lg, s_grid, alpha_grid)
    if certified:
        out.sweep_max_matches_gamma = bool(abs(per_s[j] - lg[j]) <= tol)
    return out


def theorem_check(u: ConformalFactorField, settings: VerifySettings = DEFAULT_SETTINGS) -> InequalityReport:
    """``dias(g)^2 <= 2 sqrt(3) area(g)`` with the diastole replaced by its sweep bound.

    Outside the certified neighbourhood the inequality is still evaluated
    but the verdict is ``outside-regime``.  Near-equality (margin below
    ``equality_rel * area``) must coincide with a constant conformal factor.
    """
    cert = neighborhood_certificate(u, settings.sup_N, settings.safety)
    bound = diastole_upper_bound(
        u,
        default_s_grid(settings.s_count),
        default_alpha_grid(settings.alpha_count),
        settings.nodes,
        certified=cert.valid,
        tol=settings.tol,
    )
    area = sphere_area(u, settings.area_N)
    _, variance = field_moments(u, settings.area_N)
    lhs = bound.U**2
    rhs = 2.0 * SQRT3 * area
    margin = rhs - lhs
    near_equality = margin < settings.equality_rel * area
    small_variance = variance < settings.variance_tol
    equality_consistent = near_equality == small_variance
    inequality_ok = lhs <= rhs + settings.tol
    dominance_gap = bound.dominance_gap
    if not cert.valid:
        verdict = OUTSIDE
    elif inequality_ok and equality_consistent and dominance_gap <= settings.tol:
        verdict = HOLDS
    else:
        verdict = FAILS
    return InequalityReport(
        name="theorem",
        lhs=lhs,
        rhs=rhs,
        verdict=verdict,
        tolerances={
            "tol": settings.tol,
            "equality_rel": settings.equality_rel,
            "variance_tol": settings.variance_tol,
        },
        settings=settings.as_dict(),
        details={
            "area": area,
            "U": bound.U,
            "s_star": bound.s_star,
            "gamma_min": float(np.min(bound.gamma_lengths)),
            "sweep_max_matches_gamma": bound.sweep_max_matches_gamma,
            "dominance_gap": dominance_gap,
            "inequality_holds": inequality_ok,
            "near_equality": near_equality,
            "variance": variance,
            "equality_consistent": equality_consistent,
            "area_over_U2": area / lhs if lhs > 0 else math.inf,
            "certificate": cert.to_dict(),
        },
        field_digest=u.digest,
    )


def sweep_dominance_check(u: ConformalFactorField, settings: VerifySettings = DEFAULT_SETTINGS) -> InequalityReport:
    """``l_g(z_s^alpha) <= l_g(gamma_s)`` on the whole (s, alpha) grid."""
    bound = diastole_upper_bound(u, default_s_grid(settings.s_count),
                                 default_alpha_grid(settings.alpha_count), settings.nodes)
    gap = bound.dominance_gap
    return InequalityReport(
        name="sweep_dominance",
        lhs=gap,
        rhs=0.0,
        verdict=HOLDS if gap <= settings.tol else FAILS,
        tolerances={"tol": settings.tol},
        settings={"s_count": settings.s_count, "alpha_count": settings.alpha_count, "nodes": settings.nodes},
        field_digest=u.digest,
    )
