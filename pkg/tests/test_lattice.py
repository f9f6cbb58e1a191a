import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi_workbench.errors import DegenerateLatticeError, InvalidInputError
from calabi_workbench.lattice import (
    HEX,
    HEX_HEIGHT,
    LOEWNER_CONSTANT,
    LatticeBasis,
    PlanePoint,
    flat_torus_systole,
    hex_coefficients,
    lagrange_reduce,
    lagrange_transform,
    loewner_check,
    random_basis,
    reduce_mod_hex,
    reduce_mod_hex_array,
    shortest_vector_bruteforce,
)

coords = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)


def in_domain(x, y):
    return 0.0 <= y < HEX_HEIGHT and 0.0 <= x < 1.0


def brute_representative(x, y, slack=1e-12):
    # translates inside the domain up to rounding; edge points may have two
    for m, n in itertools.product(range(-5, 6), repeat=2):
        xx, yy = x + m + 0.5 * n, y + HEX_HEIGHT * n
        if -slack <= yy < HEX_HEIGHT + slack and -slack <= xx < 1.0 + slack:
            return xx, yy
    raise AssertionError("no representative in the search box")


def same_class_close(a, b, tol=1e-12):
    # compare two representatives, allowing the wrap across either edge
    da, db = hex_coefficients(PlanePoint(a[0] - b[0], a[1] - b[1]))
    return abs(da - round(da)) < tol and abs(db - round(db)) < tol and \
        min(abs(a[1] - b[1]), abs(abs(a[1] - b[1]) - HEX_HEIGHT)) < tol


@pytest.mark.parametrize(
    "q, expected",
    [((0.0, 0.0), (0.0, 0.0)), ((1.5, HEX_HEIGHT), (0.0, 0.0)), ((0.25, 0.5), (0.25, 0.5))],
)
def test_reduce_known_points(q, expected):
    t = reduce_mod_hex(PlanePoint(*q))
    assert t.x == pytest.approx(expected[0], abs=1e-15)
    assert t.y == pytest.approx(expected[1], abs=1e-15)


def test_reduce_against_bruteforce_example():
    t = reduce_mod_hex(PlanePoint(-0.3, 1.0))
    bx, by = brute_representative(-0.3, 1.0)
    assert (t.x, t.y) == pytest.approx((bx, by), abs=1e-14)


@given(st.floats(-2.5, 2.5), st.floats(-2.5, 2.5))
def test_reduce_matches_bruteforce(x, y):
    t = reduce_mod_hex(PlanePoint(x, y))
    assert in_domain(t.x, t.y)
    bx, by = brute_representative(x, y)
    assert same_class_close((t.x, t.y), (bx, by))


@given(coords, coords)
def test_reduce_is_idempotent_and_lattice_equivalent(x, y):
    t = reduce_mod_hex(PlanePoint(x, y))
    assert in_domain(t.x, t.y)
    t2 = reduce_mod_hex(t.p)
    assert (t2.x, t2.y) == (t.x, t.y)
    a, b = hex_coefficients(PlanePoint(x - t.x, y - t.y))
    assert abs(a - round(a)) < 1e-9 and abs(b - round(b)) < 1e-9


@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=20))
def test_array_reduction_matches_scalar(points):
    arr = reduce_mod_hex_array(np.array(points))
    for (x, y), row in zip(points, arr):
        t = reduce_mod_hex(PlanePoint(x, y))
        assert tuple(row) == (t.x, t.y)


@pytest.mark.parametrize("bad", [(math.nan, 0.0), (0.0, math.inf)])
def test_reduce_rejects_non_finite(bad):
    with pytest.raises(InvalidInputError):
        reduce_mod_hex_array(np.array([bad]))
    with pytest.raises((InvalidInputError, ValueError)):
        reduce_mod_hex(PlanePoint(*bad))


@pytest.mark.parametrize(
    "b1, b2, shortest",
    [((1, 0), (0.5, HEX_HEIGHT), 1.0), ((1, 0), (10, 1), 1.0), ((2, 0), (0, 3), 2.0)],
)
def test_lagrange_reduce_examples(b1, b2, shortest):
    red = lagrange_reduce(LatticeBasis.from_vectors(b1, b2))
    assert red.b1.norm() == pytest.approx(shortest, abs=1e-12)
    assert abs(red.det) == pytest.approx(abs(b1[0] * b2[1] - b1[1] * b2[0]), rel=1e-12)


def test_reduction_of_skewed_basis_recovers_unit_vector():
    red = lagrange_reduce(LatticeBasis.from_vectors((1, 0), (10, 1)))
    assert abs(red.b1.x) == pytest.approx(0.0, abs=1e-12) or abs(red.b2.x) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "b1, b2",
    [((1, 0), (0.5, 0.9)), ((2, 0), (0, 3)), ((1, 0), (0.5, HEX_HEIGHT))],
)
def test_systole_matches_bruteforce(b1, b2):
    basis = LatticeBasis.from_vectors(b1, b2)
    assert flat_torus_systole(basis) == pytest.approx(shortest_vector_bruteforce(basis, 12), abs=1e-12)


def test_reduced_basis_conditions_and_transform(rng):
    for _ in range(200):
        basis = random_basis(rng)
        red = lagrange_reduce(basis)
        assert red.b1.norm() <= red.b2.norm() + 1e-12
        assert abs(red.b1.dot(red.b2)) <= 0.5 * red.b1.dot(red.b1) + 1e-9
        T = lagrange_transform(basis)
        assert abs(round(np.linalg.det(T))) == 1
        np.testing.assert_allclose(T @ basis.matrix(), red.matrix(), atol=1e-9)


@pytest.mark.parametrize("b2", [(2.0, 0.0), (0.0, 0.0), (1e-14, 0.0)])
def test_degenerate_basis_rejected(b2):
    with pytest.raises(DegenerateLatticeError):
        LatticeBasis.from_vectors((1.0, 0.0), b2)


def test_loewner_hex_equality():
    rep = loewner_check(HEX)
    assert rep.holds
    assert rep.details["area"] == pytest.approx(HEX_HEIGHT, abs=1e-15)
    assert rep.details["systole"] == pytest.approx(1.0, abs=1e-15)
    assert rep.details["equality"]


def test_loewner_square_strict():
    rep = loewner_check(LatticeBasis.from_vectors((1, 0), (0, 1)))
    assert rep.holds and rep.details["ratio"] == pytest.approx(1.0)
    assert not rep.details["equality"]


@given(st.floats(0.1, 10.0), st.floats(0.0, 2 * math.pi))
def test_loewner_equality_invariant_under_similarity(scale, angle):
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]]) * scale
    B = HEX.matrix() @ rot.T
    rep = loewner_check(LatticeBasis.from_vectors(B[0], B[1]), equality_tol=1e-10)
    assert rep.details["equality"]


def test_random_lattices_satisfy_loewner(rng):
    for _ in range(300):
        rep = loewner_check(random_basis(rng))
        assert rep.details["ratio"] >= LOEWNER_CONSTANT - 1e-12
