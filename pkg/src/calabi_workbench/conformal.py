"""The Calabi metric in a conformal coordinate on the Riemann sphere.

``g_c = (|z + 1| |z| |z - 1|)^(-4/3) |dz|^2`` up to a constant factor, which
is left unnormalised here; only scale-invariant quantities are computed.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .errors import InvalidRadiusError, SingularityError
from .quadrature import composite_gauss_legendre

SINGULAR_POINTS = (-1.0 + 0j, 0j, 1.0 + 0j)
SINGULAR_TOL = 1e-12
MAX_RADIUS = 0.5
# ray-averaged radius: nodes in the angle and along each ray
ANGLE_NODES = 256
RADIAL_NODES = 32


def _z(z) -> complex:
    if isinstance(z, complex):
        return z
    if isinstance(z, (tuple, list, np.ndarray)):
        return complex(float(z[0]), float(z[1]))
    return complex(z)


def _check_regular(z: complex):
    for a in SINGULAR_POINTS:
        if abs(z - a) < SINGULAR_TOL:
            raise SingularityError(f"z={z} is a cone point")


def density(z) -> float:
    """Conformal density ``lambda(z)`` of ``g_c``."""
    z = _z(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SingularityError(f"z={z} is not finite")
    _check_regular(z)
    return (abs(z + 1) * abs(z) * abs(z - 1)) ** (-4.0 / 3.0)


def _sqrt_density(z: np.ndarray) -> np.ndarray:
    return (np.abs(z + 1) * np.abs(z) * np.abs(z - 1)) ** (-2.0 / 3.0)


def _sqrt_density_about(c: complex, d: np.ndarray) -> np.ndarray:
    """``_sqrt_density(c + d)`` with the factor vanishing at ``c`` taken as ``|d|``.

    Avoids the cancellation in ``(c + d) - c`` when ``c`` is a cone point.
    """
    prod = np.abs(d)
    for a in SINGULAR_POINTS:
        if a != c:
            prod = prod * np.abs((c - a) + d)
    return prod ** (-2.0 / 3.0)


def round_density_relation(z) -> tuple[float, float]:
    """Round density ``(2 / (1 + |z|^2))^2`` and its ratio to ``lambda(z)``.

    The ratio ``g_0 / g_c`` vanishes at the cone points like ``|z - a|^(4/3)``.
    """
    z = _z(z)
    lam = density(z)
    g0 = (2.0 / (1.0 + abs(z) ** 2)) ** 2
    return g0, g0 / lam


def cone_angle_estimate(center, r: float, ray_angle: float | None = None) -> float:
    """Metric circumference of ``|z - center| = r`` over the metric radius.

    The radius is the integral of the square-root density along a ray from
    the centre; with ``ray_angle=None`` it is averaged over all ray
    directions, which removes the first-order dependence on the direction
    of the density gradient.  At a cone point the square-root density blows
    up like ``rho^(-2/3)``; the substitution ``rho = r w^3`` makes the
    radial integrand smooth.  The ratio tends to the cone angle as ``r -> 0``.
    """
    c = _z(center)
    if not (0.0 < r < MAX_RADIUS):
        raise InvalidRadiusError(f"r={r!r} must lie in (0, {MAX_RADIUS})")
    singular = any(abs(c - a) < SINGULAR_TOL for a in SINGULAR_POINTS)
    if singular:
        c = min(SINGULAR_POINTS, key=lambda a: abs(c - a))
    nearest = min(abs(c - a) for a in SINGULAR_POINTS if abs(c - a) >= SINGULAR_TOL)
    if r >= nearest:
        raise InvalidRadiusError(f"disk of radius {r} around {c} reaches another cone point")

    sd = (lambda d: _sqrt_density_about(c, d)) if singular else (lambda d: _sqrt_density(c + d))

    def circ(theta):
        return r * sd(r * np.exp(1j * theta))

    circumference, _ = integrate.quad(circ, 0.0, 2.0 * math.pi, epsabs=0.0, epsrel=1e-13, limit=200)

    if ray_angle is not None:
        e = complex(math.cos(ray_angle), math.sin(ray_angle))
        if singular:
            def radial(w):
                return 3.0 * r * w * w * sd(r * w**3 * e)
        else:
            def radial(w):
                return r * sd(r * w * e)
        radius, _ = integrate.quad(radial, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
        return circumference / radius
    # all directions at once: periodic trapezoid in the angle, Gauss-Legendre in w
    w, wts = composite_gauss_legendre(RADIAL_NODES, RADIAL_NODES)
    e = np.exp(2j * math.pi * np.arange(ANGLE_NODES) / ANGLE_NODES)[:, None]
    if singular:
        vals = 3.0 * r * w * w * sd(r * w**3 * e)
    else:
        vals = r * sd(r * w * e)
    radius = float(np.mean(vals @ wts))
    return circumference / radius
