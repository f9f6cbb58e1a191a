"""The degree-3 ramified cover of the sphere by the hexagonal torus.

The Calabi sphere is the quotient of the flat torus R^2 / HEX by the
rotation of angle 2 pi / 3 about the origin.  Functions on the sphere are
represented by deck-invariant, HEX-periodic conformal factors ``u`` built
from cosine modes of the dual lattice, so values and gradients are exact and
the periodic trapezoid rule is spectrally accurate.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import kernels
from .errors import FieldFormatError, ResolutionError
from .lattice import HEX_HEIGHT, SQRT3, PlanePoint, TorusPoint, reduce_mod_hex

SPHERE_AREA_GC = 1.0 / (2.0 * SQRT3)
TORUS_AREA = HEX_HEIGHT

# dual basis of HEX: <k_i, b_j> = delta_ij
K1 = (1.0, -1.0 / SQRT3)
K2 = (0.0, 2.0 / SQRT3)

_C = -0.5
_S = SQRT3 / 2.0
ROTATION = np.array([[_C, -_S], [_S, _C]])

MIN_AREA_N = 8
MIN_SUP_N = 32
ROW_CHUNK = 1 << 18


class DeckRotation:
    """Rotation of order 3 about ``center`` (the origin by default).

    Rotations about any lift of a cone point belong to the deck group of
    the orbifold cover, so deck-invariant fields are invariant under all
    of them.
    """

    def __init__(self, center=(0.0, 0.0)):
        self.center = np.asarray(center, dtype=float)

    def apply_array(self, xy, power: int = 1) -> np.ndarray:
        xy = np.asarray(xy, dtype=float)
        M = np.linalg.matrix_power(ROTATION, power % 3)
        return (xy - self.center) @ M.T + self.center

    def __call__(self, q: PlanePoint, power: int = 1) -> PlanePoint:
        x, y = self.apply_array(np.array([q.x, q.y]), power)
        return PlanePoint(float(x), float(y))

    def on_torus(self, p: TorusPoint, power: int = 1) -> TorusPoint:
        return reduce_mod_hex(self(p.p, power))


R = DeckRotation()


@dataclass(frozen=True)
class FixedPointSet:
    p0: TorusPoint
    p1: TorusPoint
    p2: TorusPoint

    def __iter__(self):
        return iter((self.p0, self.p1, self.p2))

    def heights(self) -> tuple[float, float, float]:
        return tuple(sorted(p.y for p in self))


def fixed_points() -> FixedPointSet:
    """Canonical representatives of the three fixed points of R on the torus.

    Any orbit representatives would do; these are the origin and the
    centroids of the two triangles of the unit cell.
    """
    return FixedPointSet(
        TorusPoint(PlanePoint(0.0, 0.0)),
        TorusPoint(PlanePoint(0.5, 0.5 / SQRT3)),
        TorusPoint(PlanePoint(0.0, 1.0 / SQRT3)),
    )


@dataclass(frozen=True)
class ModeTerm:
    """``amplitude * cos(2 pi <m K1 + n K2, q> + phase)``."""

    m: int
    n: int
    amplitude: float
    phase: float = 0.0
    symmetrized: bool = False

    @property
    def k(self) -> tuple[float, float]:
        return (float(self.m), (2.0 * self.n - self.m) / SQRT3)


def rotate_index(m: int, n: int) -> tuple[int, int]:
    """Action of the deck rotation on dual-lattice coordinates."""
    return -n, m - n


@dataclass(frozen=True)
class ConformalFactorField:
    """Conformal factor ``u`` of the metric ``exp(2u) g_c``.

    Terms are stored as given; a term flagged ``symmetrized`` is evaluated
    as the average of its three rotated copies.
    """

    constant: float = 0.0
    terms: tuple[ModeTerm, ...] = field(default_factory=tuple)

    @classmethod
    def zero(cls) -> "ConformalFactorField":
        return cls()

    @classmethod
    def const(cls, c: float) -> "ConformalFactorField":
        return cls(float(c))

    @classmethod
    def mode(cls, m: int, n: int, amplitude: float, phase: float = 0.0) -> "ConformalFactorField":
        return cls(0.0, (ModeTerm(int(m), int(n), float(amplitude), float(phase)),))

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return replace(self, constant=self.constant + float(other))
        return ConformalFactorField(self.constant + other.constant, self.terms + other.terms)

    __radd__ = __add__

    def scaled(self, c: float) -> "ConformalFactorField":
        return ConformalFactorField(
            c * self.constant,
            tuple(replace(t, amplitude=c * t.amplitude) for t in self.terms),
        )

    @property
    def is_symmetric(self) -> bool:
        return all(t.symmetrized for t in self.terms)

    @property
    def is_constant(self) -> bool:
        return all(t.amplitude == 0.0 for t in self.terms)

    @cached_property
    def _expanded(self):
        # integer frequency pairs (m, p) with k = (m, p / sqrt 3), p = 2n - m
        ms, ps, amp, ph = [], [], [], []
        for t in self.terms:
            if t.amplitude == 0.0:
                continue
            if t.symmetrized:
                m, n = t.m, t.n
                for _ in range(3):
                    ms.append(m)
                    ps.append(2 * n - m)
                    amp.append(t.amplitude / 3.0)
                    ph.append(t.phase)
                    m, n = rotate_index(m, n)
            else:
                ms.append(t.m)
                ps.append(2 * t.n - t.m)
                amp.append(t.amplitude)
                ph.append(t.phase)
        return (np.array(ms, dtype=np.int64), np.array(ps, dtype=np.int64),
                np.array(amp, dtype=float), np.array(ph, dtype=float))

    def evaluate(self, x, y, with_grad: bool = True):
        """Values (and gradient components) at the points ``(x, y)``.

        Returns flat arrays ``(u, du/dx, du/dy)``.
        """
        x = np.asarray(x, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        m, p, amp, ph = self._expanded
        v, gx, gy = kernels.eval_modes(x, y, m, p, amp, ph, with_grad)
        if self.constant != 0.0:
            v = v + self.constant
        return v, gx, gy

    def values(self, x, y) -> np.ndarray:
        """Values at ``(x, y)`` in the broadcast shape of the inputs."""
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return self.evaluate(x, y, with_grad=False)[0].reshape(shape)

    def max_frequency(self) -> float:
        m, p, _, _ = self._expanded
        return float(np.max(np.hypot(m, p / SQRT3))) if m.size else 0.0

    def to_text(self) -> str:
        return format_field(self)

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(format_field(self, canonical=True).encode()).hexdigest()[:16]


def symmetrize(raw: ConformalFactorField) -> ConformalFactorField:
    """Average of ``raw`` over the deck group, ``(1/3) sum_j raw(R^j q)``."""
    return ConformalFactorField(raw.constant, tuple(replace(t, symmetrized=True) for t in raw.terms))


def eval_field(u: ConformalFactorField, q) -> tuple[float, PlanePoint]:
    """Value and exact gradient of ``u`` at a single point."""
    p = q.p if isinstance(q, TorusPoint) else q
    v, gx, gy = u.evaluate([p.x], [p.y])
    return float(v[0]), PlanePoint(float(gx[0]), float(gy[0]))


def torus_grid(N: int):
    """Node coordinates of the N x N periodic grid on [0,1) x [0, sqrt(3)/2)."""
    return np.arange(N) / N, np.arange(N) * (HEX_HEIGHT / N)


def _row_blocks(N: int):
    rows = max(1, ROW_CHUNK // N)
    for start in range(0, N, rows):
        yield start, min(N, start + rows)


def torus_integral(u: ConformalFactorField, N: int, func) -> float:
    """Periodic trapezoid rule for the integral of ``func(u)`` over the torus.

    Rows are summed with compensated summation in a fixed order, so the
    result does not depend on how the grid is chunked.
    """
    if N < MIN_AREA_N:
        raise ResolutionError(f"grid size N={N} below minimum {MIN_AREA_N}")
    xs, ys = torus_grid(N)
    row_sums = []
    for a, b in _row_blocks(N):
        X, Y = np.meshgrid(xs, ys[a:b])
        vals = func(u.values(X, Y)).reshape(b - a, N)
        row_sums.extend(kernels.compensated_sum(r) for r in vals)
    return kernels.compensated_sum(np.array(row_sums)) * (HEX_HEIGHT / (N * N))


def sphere_area(u: ConformalFactorField, N: int = 128) -> float:
    """Area of the sphere with metric ``exp(2u) g_c``.

    A third of the torus integral of ``exp(2u)``; for ``u = 0`` this is
    ``1 / (2 sqrt 3)``.
    """
    return torus_integral(u, N, lambda v: np.exp(2.0 * v)) / 3.0


def field_moments(u: ConformalFactorField, N: int = 128) -> tuple[float, float]:
    """Mean of ``u`` and mean of ``(u - mean)^2`` over the sphere."""
    mean = torus_integral(u, N, lambda v: v) / TORUS_AREA
    var = torus_integral(u, N, lambda v: (v - mean) ** 2) / TORUS_AREA
    return mean, var


def _grid_max(u: ConformalFactorField, N: int, func) -> float:
    if N < MIN_SUP_N:
        raise ResolutionError(f"grid size N={N} below minimum {MIN_SUP_N}")
    xs, ys = torus_grid(N)
    best = 0.0
    for a, b in _row_blocks(N):
        X, Y = np.meshgrid(xs, ys[a:b])
        v, _, gy = u.evaluate(X, Y)
        best = max(best, float(np.max(func(v, gy))))
    return best


def sup_deviation(u: ConformalFactorField, N: int = 256) -> float:
    """Grid estimate of ``sup |exp(u) - 1|``; converges from below as N grows."""
    return _grid_max(u, N, lambda v, gy: np.abs(np.expm1(v)))


def sup_slope(u: ConformalFactorField, N: int = 256) -> float:
    """Grid estimate of ``sup |d/dy exp(u)|``; converges from below as N grows."""
    return _grid_max(u, N, lambda v, gy: np.abs(np.exp(v) * gy))


# -- field-definition text format ------------------------------------------


def parse_field(text: str) -> ConformalFactorField:
    """Parse ``const <c>`` / ``mode <m> <n> <amplitude> <phase>`` lines.

    Blank lines and ``#`` comments are ignored; the result is always
    symmetrized.
    """
    const = 0.0
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "const" and len(parts) == 2:
                const += _finite(parts[1])
            elif parts[0] == "mode" and len(parts) == 5:
                terms.append(ModeTerm(int(parts[1]), int(parts[2]), _finite(parts[3]), _finite(parts[4])))
            else:
                raise FieldFormatError(f"line {lineno}: unrecognised directive {line!r}")
        except ValueError as exc:
            if isinstance(exc, FieldFormatError):
                raise
            raise FieldFormatError(f"line {lineno}: {exc}") from None
    return symmetrize(ConformalFactorField(const, tuple(terms)))


def _finite(tok: str) -> float:
    v = float(tok)
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {tok!r}")
    return v


def load_field(path) -> ConformalFactorField:
    with open(path, encoding="utf-8") as fh:
        return parse_field(fh.read())


def format_field(u: ConformalFactorField, canonical: bool = False) -> str:
    lines = [] if canonical else ["# conformal factor u, metric exp(2u) g_c (symmetrized on load)"]
    lines.append(f"const {u.constant!r}")
    for t in u.terms:
        lines.append(f"mode {t.m} {t.n} {t.amplitude!r} {t.phase!r}")
    return "\n".join(lines) + "\n"


def random_field(seed: int, amplitude: float, n_terms: int = 4, max_index: int = 3,
                 N: int = 64) -> ConformalFactorField:
    """Seeded symmetrized Fourier field with grid sup ``|u|`` equal to ``amplitude``.

    Mode indices satisfy ``|m|, |n| <= max_index``; the normalisation is
    measured on an N x N grid.
    """
    rng = np.random.default_rng(seed)
    terms = []
    while len(terms) < n_terms:
        m, n = (int(v) for v in rng.integers(-max_index, max_index + 1, size=2))
        if m == 0 and n == 0:
            continue
        terms.append(ModeTerm(m, n, float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.0, 2.0 * math.pi))))
    u = symmetrize(ConformalFactorField(0.0, tuple(terms)))
    if amplitude == 0.0:
        return u.scaled(0.0)
    xs, ys = torus_grid(N)
    X, Y = np.meshgrid(xs, ys)
    peak = float(np.max(np.abs(u.values(X, Y))))
    return u.scaled(amplitude / peak)
