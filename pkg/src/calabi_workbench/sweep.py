"""Geodesic loops, sweep-out families and the lifted Stokes domains.

Everything is built in the plane (the universal cover of the torus).  The
loop ``gamma(s)`` is the horizontal unit segment at height ``s``.  Between
two consecutive special heights ``k / (2 sqrt 3)`` it is a figure eight:
one side of the downward triangle around the cone point at the lower height
(length ``a_low``) and one side of the upward triangle around the cone point
at the upper height (length ``a_high = 1 - a_low``).

For ``alpha <= 1/2`` the cycle is the pair of those triangles shrunk by the
homothety of ratio ``2 alpha`` about their centres.  For ``alpha > 1/2`` it
is the convex hexagon with alternating sides ``a_high, a_low`` developed
around the third cone point, shrunk by ``2 - 2 alpha``.  Both are
deck-invariant polygons that cover their image on the sphere three times,
hence the weight 1/3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cover import SPHERE_AREA_GC, ConformalFactorField, DeckRotation, sup_deviation, sup_slope
from .errors import ParameterRangeError, SpecialHeightError
from .lattice import HEX_HEIGHT, SQRT3
from .quadrature import DEFAULT_PANEL_ORDER, composite_gauss_legendre
from .reports import FAILS, HOLDS, OUTSIDE, InequalityReport

STEP = 1.0 / (2.0 * SQRT3)
TAN30 = 1.0 / SQRT3
# heights this close (in units of STEP) to a special height are snapped onto it
DEGENERATE_TOL = 1e-12
RANGE_TOL = 1e-12
THIRD = 1.0 / 3.0

FIRST = "first"
SECOND = "second"


@dataclass(frozen=True)
class QuadratureParams:
    arc_nodes: int = 64
    area_nodes: int = 64
    panel_order: int = DEFAULT_PANEL_ORDER

    def doubled(self) -> "QuadratureParams":
        return QuadratureParams(2 * self.arc_nodes, 2 * self.area_nodes, self.panel_order)


DEFAULT_QUAD = QuadratureParams()


@dataclass
class OneCycleLift:
    """A one-cycle on the sphere given by closed polygons in the plane.

    ``components`` are ``(m, 2)`` vertex arrays; a polygon is closed when
    its last vertex equals the first modulo HEX.  ``centers`` holds, for
    weight-1/3 components, the cone-point lift about which the polygon is
    invariant under the order-3 rotation.
    """

    components: list
    weight: float
    centers: list = field(default_factory=list)

    def edges(self):
        for poly in self.components:
            for a, b in zip(poly[:-1], poly[1:]):
                yield a, b

    def edge_array(self) -> np.ndarray:
        """All edges as an ``(e, 2, 2)`` array."""
        segs = [np.stack([a, b]) for a, b in self.edges()]
        return np.array(segs) if segs else np.zeros((0, 2, 2))

    def length_gc(self) -> float:
        e = self.edge_array()
        return self.weight * float(np.sum(np.hypot(*(e[:, 1] - e[:, 0]).T)))

    def length(self, u: ConformalFactorField, nodes: int = 64, panel_order: int = DEFAULT_PANEL_ORDER) -> float:
        """Length on the sphere for the metric ``exp(2u) g_c``."""
        e = self.edge_array()
        if len(e) == 0:
            return 0.0
        return self.weight * float(np.sum(_segment_integrals(u, e[:, 0], e[:, 1], nodes, panel_order)))

    def is_closed(self, tol: float = 1e-12) -> bool:
        from .lattice import reduce_mod_hex_array

        for poly in self.components:
            ends = reduce_mod_hex_array(np.array([poly[0], poly[-1]]))
            d = ends[0] - ends[1]
            # compare on the torus: a wrap across the rectangle edge is not a gap
            if min(abs(d[0]), 1.0 - abs(d[0])) > tol or min(abs(d[1]), HEX_HEIGHT - abs(d[1])) > tol:
                return False
        return True

    def sample(self, per_edge: int = 16) -> np.ndarray:
        t = (np.arange(per_edge) + 0.5) / per_edge
        pts = [a + t[:, None] * (b - a) for a, b in self.edges()]
        return np.concatenate(pts) if pts else np.zeros((0, 2))


@dataclass(frozen=True)
class HeightSplit:
    """How the loop at height ``s`` splits around the cone points.

    Indices 0, 1, 2 name the fixed points at heights 0, 1/(2 sqrt 3),
    1/sqrt 3.  ``special`` marks the three heights where the loop passes
    through a cone point (``a_low == 0``).
    """

    s: float
    k: int
    a_low: float
    a_high: float
    lower: int
    upper: int
    target: int
    lower_center: tuple
    upper_center: tuple
    target_center: tuple
    special: bool

    @property
    def encircled(self) -> tuple[int, int]:
        return (self.lower, self.upper)


def _check_s(s: float):
    if not (math.isfinite(s) and -RANGE_TOL <= s <= HEX_HEIGHT + RANGE_TOL):
        raise ParameterRangeError(f"s={s!r} outside [0, sqrt(3)/2]")


def _check_alpha(alpha: float):
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise ParameterRangeError(f"alpha={alpha!r} outside [0, 1]")


def classify_height(s: float) -> HeightSplit:
    """Split data for any height, special heights included.

    A special height ``k / (2 sqrt 3)`` is assigned to interval ``k`` with
    ``a_low = 0``; ``s = sqrt(3)/2`` stays in interval 2 with ``a_high = 0``.
    """
    _check_s(s)
    s = min(max(s, 0.0), HEX_HEIGHT)
    q = s / STEP
    k = min(int(math.floor(q + DEGENERATE_TOL)), 2)
    a_low = min(max(q - k, 0.0), 1.0)
    if a_low < DEGENERATE_TOL:
        a_low = 0.0
        s = k * STEP
    a_high = 1.0 - a_low
    if a_high < DEGENERATE_TOL:
        a_low, a_high = 1.0, 0.0
        s = (k + 1) * STEP
    x_low = 0.0 if k % 2 == 0 else 0.5
    x_up = 0.5 - x_low
    return HeightSplit(
        s=s,
        k=k,
        a_low=a_low,
        a_high=a_high,
        lower=k % 3,
        upper=(k + 1) % 3,
        target=(k + 2) % 3,
        lower_center=(x_low, k * STEP),
        upper_center=(x_up, (k + 1) * STEP),
        target_center=(x_up, (k - 1) * STEP),
        special=(a_low == 0.0 or a_high == 0.0),
    )


def split_lengths(s: float) -> HeightSplit:
    """Figure-eight decomposition of ``gamma(s)`` for a non-special height."""
    split = classify_height(s)
    if split.special:
        raise SpecialHeightError(f"s={s!r} is a special height; use the first-case path")
    return split


# -- polygons ---------------------------------------------------------------


def _closed(vertices) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    return np.vstack([v, v[:1]])


def _point(center) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    return np.stack([c, c])


def _scaled(poly: np.ndarray, center, ratio: float) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    return c + ratio * (poly - c)


def lower_triangle(center, side: float) -> np.ndarray:
    """Downward equilateral triangle with its top side horizontal (counterclockwise)."""
    cx, cy = center
    r = side * TAN30 / 2.0
    return _closed([(cx, cy - 2.0 * r), (cx + side / 2.0, cy + r), (cx - side / 2.0, cy + r)])


def upper_triangle(center, side: float) -> np.ndarray:
    """Upward equilateral triangle with its bottom side horizontal (counterclockwise)."""
    cx, cy = center
    r = side * TAN30 / 2.0
    return _closed([(cx - side / 2.0, cy - r), (cx + side / 2.0, cy - r), (cx, cy + 2.0 * r)])


_HEX_DIRECTIONS = np.deg2rad([180.0, 240.0, 300.0, 0.0, 60.0, 120.0])


def developed_hexagon(split: HeightSplit) -> np.ndarray:
    """The loop ``gamma_1 * gamma_2^{-1}`` developed around the target cone point.

    Counterclockwise, starting at the right end of the ``a_high`` side that
    lies on the line ``y = s``.  At special heights it is a triangle with
    doubled vertices.
    """
    lengths = [split.a_high, split.a_low] * 3
    v = [np.array([split.target_center[0] + split.a_high / 2.0, split.s])]
    for ang, ell in zip(_HEX_DIRECTIONS, lengths):
        v.append(v[-1] + ell * np.array([math.cos(ang), math.sin(ang)]))
    return np.array(v)


def gamma(s: float) -> OneCycleLift:
    """The loop ``gamma_s``: the horizontal unit segment at height ``s``."""
    _check_s(s)
    return OneCycleLift([np.array([[0.0, s], [1.0, s]])], 1.0, [None])


@dataclass
class SweepCycle:
    s: float
    alpha: float
    case: str
    k: int
    a_low: float
    a_high: float
    branch: str
    cycle: OneCycleLift

    @property
    def sides(self) -> tuple[float, float]:
        return (self.a_low, self.a_high)


def sweep_cycle(s: float, alpha: float) -> SweepCycle:
    """The one-cycle ``z_s^alpha`` of the sweep-out attached to ``gamma(s)``."""
    _check_alpha(alpha)
    split = classify_height(s)
    comps, centers = [], []
    if alpha <= 0.5:
        ratio = 2.0 * alpha
        branch = "triangles"
        for side, center, make in (
            (split.a_low, split.lower_center, lower_triangle),
            (split.a_high, split.upper_center, upper_triangle),
        ):
            if side * ratio < DEGENERATE_TOL:
                comps.append(_point(center))
            else:
                comps.append(_scaled(make(center, side), center, ratio))
            centers.append(np.asarray(center, dtype=float))
    else:
        ratio = 2.0 - 2.0 * alpha
        branch = "hexagon"
        c = split.target_center
        if ratio < DEGENERATE_TOL:
            comps.append(_point(c))
        else:
            comps.append(_scaled(developed_hexagon(split), c, ratio))
        centers.append(np.asarray(c, dtype=float))
    return SweepCycle(
        s=split.s,
        alpha=alpha,
        case=FIRST if split.special else SECOND,
        k=split.k,
        a_low=split.a_low,
        a_high=split.a_high,
        branch=branch,
        cycle=OneCycleLift(comps, THIRD, centers),
    )


def expected_length_gc(alpha: float) -> float:
    return 1.0 - 2.0 * abs(alpha - 0.5)


# -- quadrature along segments ----------------------------------------------


def _segment_integrals(u, A, B, nodes, panel_order=DEFAULT_PANEL_ORDER) -> np.ndarray:
    """``int exp(u) dl`` along each segment ``A[i] -> B[i]``."""
    t, w = composite_gauss_legendre(nodes, panel_order)
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    d = B - A
    P = A[:, None, :] + t[None, :, None] * d[:, None, :]
    vals = np.exp(u.values(P[..., 0], P[..., 1])).reshape(len(A), len(t))
    return np.hypot(d[:, 0], d[:, 1]) * (vals @ w)


def _horizontal_integrals(u, xl, xr, y, nodes, panel_order=DEFAULT_PANEL_ORDER) -> np.ndarray:
    """``int exp(u) dx`` over horizontal segments ``[xl, xr] x {y}`` (arrays)."""
    t, w = composite_gauss_legendre(nodes, panel_order)
    xl, xr, y = (np.asarray(a, dtype=float).ravel() for a in (xl, xr, y))
    X = xl[:, None] + t[None, :] * (xr - xl)[:, None]
    Y = np.broadcast_to(y[:, None], X.shape)
    vals = np.exp(u.values(X, Y)).reshape(X.shape)
    return (xr - xl) * (vals @ w)


def representative_edges(s: float, alpha: float):
    """One horizontal edge per sphere arc of ``z_s^alpha``.

    By deck invariance the sphere length of the cycle is the sum of the
    ``exp(u)``-lengths of these edges.  Returns a list of ``(xl, xr, y)``.
    """
    return _edges_of_split(classify_height(s), alpha)


def _edges_of_split(sp: HeightSplit, alpha: float):
    out = []
    if alpha <= 0.5:
        lam = 2.0 * alpha
        cx, cy = sp.lower_center
        h = lam * sp.a_low
        out.append((cx - h / 2.0, cx + h / 2.0, cy + lam * sp.a_low * TAN30 / 2.0))
        cx, cy = sp.upper_center
        h = lam * sp.a_high
        out.append((cx - h / 2.0, cx + h / 2.0, cy - lam * sp.a_high * TAN30 / 2.0))
    else:
        lam = 2.0 - 2.0 * alpha
        cx, cy = sp.target_center
        d_low = (1.0 + sp.a_high) * STEP
        d_high = (1.0 + sp.a_low) * STEP
        h = lam * sp.a_low
        out.append((cx - h / 2.0, cx + h / 2.0, cy - lam * d_low))
        h = lam * sp.a_high
        out.append((cx - h / 2.0, cx + h / 2.0, cy + lam * d_high))
    return out


def sweep_lengths(u: ConformalFactorField, s_values, alpha_values, nodes: int = 64,
                  panel_order: int = DEFAULT_PANEL_ORDER) -> np.ndarray:
    """Matrix of sphere lengths ``l_g(z_s^alpha)`` over an (s, alpha) grid."""
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    alpha_values = np.atleast_1d(np.asarray(alpha_values, dtype=float))
    splits = [classify_height(float(s)) for s in s_values]
    segs = [e for sp in splits for a in alpha_values for e in _edges_of_split(sp, float(a))]
    xl, xr, y = np.array(segs).T
    ints = _horizontal_integrals(u, xl, xr, y, nodes, panel_order)
    return ints.reshape(len(s_values), len(alpha_values), 2).sum(axis=2)


def gamma_lengths(u: ConformalFactorField, s_values, nodes: int = 64,
                  panel_order: int = DEFAULT_PANEL_ORDER) -> np.ndarray:
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    n = len(s_values)
    return _horizontal_integrals(u, np.zeros(n), np.ones(n), s_values, nodes, panel_order)


# -- distances on the sphere ------------------------------------------------

_BOX_M, _BOX_N = np.meshgrid(np.arange(-3, 4), np.arange(-2, 3), indexing="ij")
_LATTICE_OFFSETS = np.column_stack([_BOX_M.ravel() + 0.5 * _BOX_N.ravel(), HEX_HEIGHT * _BOX_N.ravel()])


def _images(points: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    """Orbifold images of ``points`` near ``anchor``: shape ``(n, 3 * L, 2)``."""
    from .lattice import reduce_mod_hex_array

    rot = DeckRotation()
    out = []
    for j in range(3):
        v = rot.apply_array(points, j) - anchor
        v = reduce_mod_hex_array(v)
        out.append(v[:, None, :] + _LATTICE_OFFSETS[None, :, :])
    return np.concatenate(out, axis=1) + anchor


def sphere_distance_to_cycle(points: np.ndarray, cycle: OneCycleLift) -> np.ndarray:
    """Distance on the Calabi sphere from each point to the image of ``cycle``."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    best = np.full(len(points), np.inf)
    for a, b in cycle.edges():
        mid = 0.5 * (a + b)
        P = _images(points, mid)
        d = b - a
        dd = float(d @ d)
        if dd == 0.0:
            dist = np.hypot(*(P - a).transpose(2, 0, 1))
        else:
            t = np.clip(((P - a) @ d) / dd, 0.0, 1.0)
            dist = np.hypot(*(P - (a + t[..., None] * d)).transpose(2, 0, 1))
        best = np.minimum(best, dist.min(axis=1))
    return best


def sphere_hausdorff(c1: OneCycleLift, c2: OneCycleLift, per_edge: int = 16) -> float:
    """Sampled Hausdorff distance between the images of two cycles on the sphere."""
    s1, s2 = c1.sample(per_edge), c2.sample(per_edge)
    if len(s1) == 0 or len(s2) == 0:
        return 0.0
    return float(max(sphere_distance_to_cycle(s1, c2).max(), sphere_distance_to_cycle(s2, c1).max()))


# -- Stokes domains ---------------------------------------------------------


@dataclass
class TrapezoidDomain:
    """Region between a horizontal arc of the loop lift and its shrunken copy.

    ``outer`` and ``inner`` are ``(2, 2)`` arrays ordered left to right, and
    ``apex`` is the centre of the homothety that produced ``inner``.  The
    legs ``outer[0] -> inner[0]`` and ``inner[1] -> outer[1]`` form the
    curve c; with this orientation ``outer - inner = c + sigma * area term``
    where ``sigma = +1`` when the outer arc lies above the inner one.
    """

    index: int
    outer: np.ndarray
    inner: np.ndarray
    apex: np.ndarray
    branch: str

    @property
    def outer_length(self) -> float:
        return float(self.outer[1, 0] - self.outer[0, 0])

    @property
    def inner_length(self) -> float:
        return float(self.inner[1, 0] - self.inner[0, 0])

    @property
    def height(self) -> float:
        return abs(float(self.outer[0, 1] - self.inner[0, 1]))

    @property
    def sigma(self) -> float:
        return 1.0 if self.outer[0, 1] >= self.inner[0, 1] else -1.0

    @property
    def area(self) -> float:
        return 0.5 * (self.outer_length + self.inner_length) * self.height

    @property
    def thirty_degree_area(self) -> float:
        """``(1/4) tan(pi/6) (|outer|^2 - |inner|^2)``.

        Equals :attr:`area` exactly when the legs meet at 30 degrees to the
        normal, i.e. when the apex sits at distance ``|outer| / (2 sqrt 3)``.
        """
        return 0.25 * TAN30 * (self.outer_length**2 - self.inner_length**2)

    @property
    def is_empty(self) -> bool:
        return self.area == 0.0

    def legs(self):
        return [(self.outer[0], self.inner[0]), (self.inner[1], self.outer[1])]

    def polygon(self) -> np.ndarray:
        """Vertices in counterclockwise order (for area oracles)."""
        if self.sigma > 0:
            v = [self.inner[0], self.inner[1], self.outer[1], self.outer[0]]
        else:
            v = [self.outer[0], self.outer[1], self.inner[1], self.inner[0]]
        return np.array(v)


def trapezoid_domains(s: float, alpha: float) -> list[TrapezoidDomain]:
    """The two lifted domains swept between ``gamma(s)`` and ``z_s^alpha``.

    Index 1 belongs to the ``a_low`` arc and index 2 to the ``a_high`` arc,
    except at special heights, where index 1 is the full arc and index 2 is
    reduced to a point.  At ``alpha = 1/2`` both are empty.
    """
    _check_alpha(alpha)
    sp = classify_height(s)
    out = []
    if alpha <= 0.5:
        full = representative_edges(s, 0.5)
        centers = [sp.lower_center, sp.upper_center]
        ratio = 2.0 * alpha
        branch = "triangles"
    else:
        # hexagon sides at ratio 1
        cx, cy = sp.target_center
        full = [
            (cx - sp.a_low / 2.0, cx + sp.a_low / 2.0, cy - (1.0 + sp.a_high) * STEP),
            (cx - sp.a_high / 2.0, cx + sp.a_high / 2.0, cy + (1.0 + sp.a_low) * STEP),
        ]
        centers = [sp.target_center, sp.target_center]
        ratio = 2.0 - 2.0 * alpha
        branch = "hexagon"
    if sp.a_low == 0.0:
        # first case: the non-degenerate arc is numbered first
        full, centers = full[::-1], centers[::-1]
    for i, ((xl, xr, y), c) in enumerate(zip(full, centers), 1):
        c = np.asarray(c, dtype=float)
        outer = np.array([[xl, y], [xr, y]])
        inner = c + ratio * (outer - c)
        out.append(TrapezoidDomain(i, outer, inner, c, branch))
    return out


def shoelace_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _leg_integral(u, a, b, nodes, panel_order) -> float:
    """``int exp(u) dx`` along the oriented segment ``a -> b``."""
    t, w = composite_gauss_legendre(nodes, panel_order)
    P = a[None, :] + t[:, None] * (b - a)[None, :]
    return float((b[0] - a[0]) * (np.exp(u.values(P[:, 0], P[:, 1])) @ w))


def _area_integral(u, dom: TrapezoidDomain, nodes, panel_order) -> float:
    """``int d/dy exp(u) dA`` over the trapezoid (tensor Gauss-Legendre)."""
    t, w = composite_gauss_legendre(nodes, panel_order)
    (ol, orr), (il, ir) = dom.outer, dom.inner
    eta = t
    y = ol[1] + eta * (il[1] - ol[1])
    xl = ol[0] + eta * (il[0] - ol[0])
    xr = orr[0] + eta * (ir[0] - orr[0])
    width = xr - xl
    X = xl[:, None] + width[:, None] * t[None, :]
    Y = np.broadcast_to(y[:, None], X.shape)
    v, _, gy = u.evaluate(X, Y)
    f = (np.exp(v) * gy).reshape(X.shape)
    return float(dom.height * (w @ (width * (f @ w))))


@dataclass
class StokesTerms:
    index: int
    lhs: float
    legs: float
    area_term: float
    length_gc_diff: float
    area: float

    @property
    def rhs(self) -> float:
        return self.legs + self.area_term

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def stokes_terms(u: ConformalFactorField, s: float, alpha: float,
                 quad: QuadratureParams = DEFAULT_QUAD) -> list[StokesTerms]:
    """Both sides of the Stokes identity, per component.

    Left: ``l_g(outer arc) - l_g(inner arc)``.  Right: the ``exp(u) dx``
    integral over the legs plus ``sigma`` times the area integral of
    ``d/dy exp(u)``.
    """
    out = []
    for dom in trapezoid_domains(s, alpha):
        if dom.outer_length == 0.0:
            out.append(StokesTerms(dom.index, 0.0, 0.0, 0.0, 0.0, 0.0))
            continue
        arcs = _horizontal_integrals(
            u,
            [dom.outer[0, 0], dom.inner[0, 0]],
            [dom.outer[1, 0], dom.inner[1, 0]],
            [dom.outer[0, 1], dom.inner[0, 1]],
            quad.arc_nodes,
            quad.panel_order,
        )
        legs = sum(_leg_integral(u, a, b, quad.arc_nodes, quad.panel_order) for a, b in dom.legs())
        area_term = dom.sigma * _area_integral(u, dom, quad.area_nodes, quad.panel_order) if dom.height else 0.0
        out.append(StokesTerms(dom.index, float(arcs[0] - arcs[1]), legs, area_term,
                               dom.outer_length - dom.inner_length, dom.area))
    return out


def stokes_residual(u: ConformalFactorField, s: float, alpha: float,
                    quad: QuadratureParams = DEFAULT_QUAD) -> list[float]:
    """``|LHS - RHS|`` of the Stokes identity for each of the two components."""
    if alpha == 0.5:
        raise ParameterRangeError("alpha = 1/2: the Stokes domains are empty")
    return [t.residual for t in stokes_terms(u, s, alpha, quad)]


def stokes_lower_bound_check(u: ConformalFactorField, s: float, alpha: float, N: int = 256,
                             quad: QuadratureParams = DEFAULT_QUAD, safety: float = 1.0,
                             tol: float = 1e-10) -> InequalityReport:
    """Per-arc lower bound on the length drop from the Stokes estimate.

    Checks ``F * (l_gc(gamma_i) - l_gc(z_i)) <= l_g(gamma_i) - l_g(z_i)``
    with ``F = 1 - sup|exp(u) - 1| - (1/(2 sqrt 3)) sup|d_y exp(u)|``.  The
    bound that uses each domain's exact area in place of
    ``(1/(2 sqrt 3)) * length drop`` is reported alongside.
    """
    dev = safety * sup_deviation(u, N)
    slope = safety * sup_slope(u, N)
    factor = 1.0 - dev - 0.5 * TAN30 * slope
    comps = []
    worst = math.inf
    rigorous_ok = True
    for t in stokes_terms(u, s, alpha, quad):
        bound = factor * t.length_gc_diff
        exact_area_bound = (1.0 - dev) * t.length_gc_diff - slope * t.area
        comps.append({
            "index": t.index,
            "length_drop_g": t.lhs,
            "length_drop_gc": t.length_gc_diff,
            "bound": bound,
            "domain_area": t.area,
            "exact_area_bound": exact_area_bound,
        })
        worst = min(worst, t.lhs - bound)
        rigorous_ok = rigorous_ok and exact_area_bound <= t.lhs + tol
    lhs_total = sum(c["bound"] for c in comps)
    rhs_total = sum(c["length_drop_g"] for c in comps)
    if factor <= 0.0:
        verdict = OUTSIDE
    else:
        verdict = HOLDS if worst >= -tol else FAILS
    return InequalityReport(
        name="stokes_lower_bound",
        lhs=lhs_total,
        rhs=rhs_total,
        verdict=verdict,
        inputs={"s": s, "alpha": alpha},
        tolerances={"tol": tol},
        settings={"N": N, "safety": safety, "arc_nodes": quad.arc_nodes, "area_nodes": quad.area_nodes},
        details={
            "factor": factor,
            "sup_deviation": dev,
            "sup_slope": slope,
            "worst_component_margin": worst,
            "exact_area_bound_holds": rigorous_ok,
            "components": comps,
        },
        field_digest=u.digest,
    )


__all__ = [
    "SPHERE_AREA_GC",
    "STEP",
    "OneCycleLift",
    "HeightSplit",
    "SweepCycle",
    "TrapezoidDomain",
    "QuadratureParams",
    "classify_height",
    "split_lengths",
    "gamma",
    "sweep_cycle",
    "trapezoid_domains",
    "stokes_residual",
    "stokes_terms",
    "stokes_lower_bound_check",
    "sweep_lengths",
    "gamma_lengths",
    "sphere_hausdorff",
    "shoelace_area",
]
