"""Two-dimensional lattices: the hexagonal lattice, fundamental-domain
reduction, Lagrange-Gauss basis reduction and the Loewner check on flat tori.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLatticeError, InvalidInputError
from .reports import FAILS, HOLDS, InequalityReport

SQRT3 = math.sqrt(3.0)
HEX_HEIGHT = SQRT3 / 2.0
LOEWNER_CONSTANT = SQRT3 / 2.0

DET_EPS = 1e-12


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def __add__(self, other):
        return PlanePoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return PlanePoint(self.x - other.x, self.y - other.y)

    def scale(self, c: float) -> "PlanePoint":
        return PlanePoint(c * self.x, c * self.y)

    def dot(self, other) -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class LatticeBasis:
    b1: PlanePoint
    b2: PlanePoint

    def __post_init__(self):
        if abs(self.det) <= DET_EPS:
            raise DegenerateLatticeError(f"degenerate basis, det = {self.det!r}")

    @classmethod
    def from_vectors(cls, b1, b2) -> "LatticeBasis":
        return cls(PlanePoint(float(b1[0]), float(b1[1])), PlanePoint(float(b2[0]), float(b2[1])))

    @property
    def det(self) -> float:
        return self.b1.x * self.b2.y - self.b1.y * self.b2.x

    def matrix(self) -> np.ndarray:
        """Rows are the basis vectors."""
        return np.array([[self.b1.x, self.b1.y], [self.b2.x, self.b2.y]])


@dataclass(frozen=True)
class TorusPoint:
    """Canonical representative in the rectangle [0, 1) x [0, sqrt(3)/2)."""

    p: PlanePoint

    @property
    def x(self) -> float:
        return self.p.x

    @property
    def y(self) -> float:
        return self.p.y


HEX = LatticeBasis(PlanePoint(1.0, 0.0), PlanePoint(0.5, HEX_HEIGHT))


def reduce_mod_hex(q: PlanePoint) -> TorusPoint:
    """Canonical representative of ``q`` modulo the hexagonal lattice.

    The height is normalised with steps of (1/2, sqrt(3)/2) first, then the
    abscissa with steps of (1, 0).  Points already inside the rectangle are
    returned unchanged, so the reduction is idempotent.
    """
    x, y = float(q.x), float(q.y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError(f"non-finite point ({x}, {y})")
    x, y = _reduce_xy(x, y)
    return TorusPoint(PlanePoint(x, y))


def _reduce_xy(x: float, y: float) -> tuple[float, float]:
    if not (0.0 <= y < HEX_HEIGHT):
        n = math.floor(y / HEX_HEIGHT)
        x -= 0.5 * n
        y -= HEX_HEIGHT * n
        # floor of a rounded quotient can be off by one at the edges
        while y < 0.0:
            x += 0.5
            y += HEX_HEIGHT
        while y >= HEX_HEIGHT:
            x -= 0.5
            y -= HEX_HEIGHT
    if not (0.0 <= x < 1.0):
        x -= math.floor(x)
        if x >= 1.0:
            x = 0.0
    return x, y


def reduce_mod_hex_array(xy: np.ndarray) -> np.ndarray:
    """Vectorised :func:`reduce_mod_hex` on an ``(n, 2)`` array."""
    xy = np.array(xy, dtype=float, copy=True).reshape(-1, 2)
    if not np.all(np.isfinite(xy)):
        raise InvalidInputError("non-finite coordinates")
    x, y = xy[:, 0], xy[:, 1]
    out = (y < 0.0) | (y >= HEX_HEIGHT)
    if np.any(out):
        n = np.floor(y[out] / HEX_HEIGHT)
        x[out] -= 0.5 * n
        y[out] -= HEX_HEIGHT * n
        lo = y < 0.0
        x[lo] += 0.5
        y[lo] += HEX_HEIGHT
        hi = y >= HEX_HEIGHT
        x[hi] -= 0.5
        y[hi] -= HEX_HEIGHT
    out = (x < 0.0) | (x >= 1.0)
    if np.any(out):
        x[out] -= np.floor(x[out])
        x[x >= 1.0] = 0.0
    return np.column_stack([x, y])


def hex_coefficients(v: PlanePoint) -> tuple[float, float]:
    """Real coordinates of ``v`` in the basis (1, 0), (1/2, sqrt(3)/2)."""
    n = v.y / HEX_HEIGHT
    return v.x - 0.5 * n, n


def _gauss_reduce(b1: np.ndarray, b2: np.ndarray):
    u, v = np.array(b1, dtype=float), np.array(b2, dtype=float)
    # rows of T express (u, v) in terms of the input basis
    T = np.array([[1, 0], [0, 1]], dtype=np.int64)
    if u @ u > v @ v:
        u, v = v, u
        T = T[::-1].copy()
    for _ in range(10_000):
        mu = int(round(float(u @ v) / float(u @ u)))
        if mu != 0:
            v = v - mu * u
            T[1] -= mu * T[0]
        if v @ v < u @ u:
            u, v = v, u
            T = T[::-1].copy()
        else:
            break
    else:  # pragma: no cover - the loop terminates for nondegenerate input
        raise RuntimeError("Lagrange reduction did not terminate")
    return u, v, T


def lagrange_reduce(basis: LatticeBasis) -> LatticeBasis:
    """Lagrange-Gauss reduced basis of the same lattice.

    The result satisfies ``|b1| <= |b2|`` and ``|<b1, b2>| <= |b1|^2 / 2``,
    so ``b1`` is a shortest nonzero lattice vector.
    """
    u, v, _ = _gauss_reduce(np.array(list(basis.b1)), np.array(list(basis.b2)))
    return LatticeBasis.from_vectors(u, v)


def lagrange_transform(basis: LatticeBasis) -> np.ndarray:
    """Integer matrix ``T`` with ``reduced.matrix() == T @ basis.matrix()``."""
    return _gauss_reduce(np.array(list(basis.b1)), np.array(list(basis.b2)))[2]


def flat_torus_systole(basis: LatticeBasis) -> float:
    """Homotopy systole of the flat torus R^2 / lattice."""
    return lagrange_reduce(basis).b1.norm()


def shortest_vector_bruteforce(basis: LatticeBasis, box: int = 25) -> float:
    """Minimum of ``|m b1 + n b2|`` over nonzero ``(m, n)`` with ``|m|, |n| <= box``."""
    r = np.arange(-box, box + 1)
    m, n = np.meshgrid(r, r, indexing="ij")
    m, n = m.ravel(), n.ravel()
    keep = (m != 0) | (n != 0)
    B = basis.matrix()
    vecs = np.outer(m[keep], B[0]) + np.outer(n[keep], B[1])
    return float(np.sqrt(np.min(np.einsum("ij,ij->i", vecs, vecs))))


def loewner_check(basis: LatticeBasis, tol: float = 1e-12, equality_tol: float = 1e-12) -> InequalityReport:
    """Check ``area >= (sqrt(3)/2) sys^2`` on the flat torus of ``basis``.

    Reported as ``sqrt(3)/2 <= area / sys^2``; the equality flag marks the
    hexagonal (up to homothety) case.
    """
    area = abs(basis.det)
    sys = flat_torus_systole(basis)
    ratio = area / sys**2
    verdict = HOLDS if ratio >= LOEWNER_CONSTANT - tol else FAILS
    return InequalityReport(
        name="loewner",
        lhs=LOEWNER_CONSTANT,
        rhs=ratio,
        verdict=verdict,
        inputs={"b1": list(basis.b1), "b2": list(basis.b2)},
        tolerances={"tol": tol, "equality_tol": equality_tol},
        details={
            "area": area,
            "systole": sys,
            "ratio": ratio,
            "equality": abs(ratio - LOEWNER_CONSTANT) < equality_tol,
        },
    )


def random_basis(rng: np.random.Generator, bound: float = 5.0, min_det: float = 0.1,
                 max_condition: float = 25.0) -> LatticeBasis:
    """Seeded random basis with entries in [-bound, bound].

    Rejects ``|det| <= min_det`` and ``|b1| |b2| / |det| > max_condition``;
    the second clamp bounds the coefficients of a shortest vector by
    ``max_condition``, which keeps brute-force oracles exact.
    """
    while True:
        B = rng.uniform(-bound, bound, size=(2, 2))
        det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
        if abs(det) <= min_det:
            continue
        if np.linalg.norm(B[0]) * np.linalg.norm(B[1]) / abs(det) > max_condition:
            continue
        return LatticeBasis.from_vectors(B[0], B[1])
