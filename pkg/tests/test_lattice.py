from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import brute_hilbert_basis, brute_lattice_points, det, dot, in_cone, matmul
from toric_vanishing.errors import InputError, UnboundedPolyhedronError, UnsupportedError
from toric_vanishing.lattice import (
    Cone,
    RationalPolyhedron,
    count_lattice_points,
    dual_cone,
    hilbert_basis,
    lattice_points,
    primitive,
    smith_normal_form,
)


def test_primitive():
    assert primitive((2, 4)) == (1, 2)
    assert primitive((0, -3)) == (0, -1)
    assert primitive((1, 1, 1)) == (1, 1, 1)
    with pytest.raises(InputError):
        primitive((0, 0))


def test_dual_cone_examples():
    assert sorted(dual_cone(Cone(((1, 0), (0, 1)))).rays) == [(0, 1), (1, 0)]
    assert sorted(dual_cone(Cone(((1, 0), (1, 2)))).rays) == [(0, 1), (2, -1)]
    half = dual_cone(Cone(((1, 0),)))
    assert isinstance(half, RationalPolyhedron)
    assert half.contains((0, 5)) and half.contains((0, -5)) and not half.contains((-1, 0))


def test_dual_cone_brute_force():
    c = Cone(((1, 0), (1, 2)))
    d = dual_cone(c)
    for u in [(x, y) for x in range(-5, 6) for y in range(-5, 6)]:
        assert (all(dot(u, v) >= 0 for v in c.rays)) == in_cone(d.rays, u)


def test_dual_cone_rank_limit():
    with pytest.raises(UnsupportedError):
        dual_cone(Cone(((1, 0, 0, 0, 0),)))


def test_hilbert_basis_examples():
    assert hilbert_basis(Cone(((1, 0), (0, 1)))) == [(0, 1), (1, 0)]
    assert hilbert_basis(Cone(((0, 1), (2, -1)))) == [(0, 1), (1, 0), (2, -1)]
    assert hilbert_basis(Cone(((0, 1), (2, -1)))) == brute_hilbert_basis([(0, 1), (2, -1)], 4)


def test_hilbert_basis_a2_chart():
    c = Cone(((1, 0), (1, 3)))
    chart = hilbert_basis(dual_cone(c))
    assert chart == brute_hilbert_basis(list(dual_cone(c).rays), 4)
    assert len(chart) == 3
    own = hilbert_basis(c)
    assert own == brute_hilbert_basis(list(c.rays), 4)
    assert len(own) == 4


def test_hilbert_basis_rank_limit():
    with pytest.raises(UnsupportedError):
        hilbert_basis(Cone(((1, 0, 0, 0), (0, 1, 0, 0))))


def test_lattice_points_examples():
    tri = RationalPolyhedron((((1, 0), -1), ((0, 1), -1), ((-1, -1), -1)))
    pts = lattice_points(tri)
    assert pts == brute_lattice_points(tri.inequalities, 5)
    assert len(pts) == 10
    assert lattice_points(RationalPolyhedron((((1,), 1), ((-1,), 0)))) == []
    assert lattice_points(RationalPolyhedron((((1,), 0), ((-1,), 0)))) == [(0,)]


def test_unbounded_polyhedron():
    with pytest.raises(UnboundedPolyhedronError, match="unbounded polyhedron"):
        lattice_points(RationalPolyhedron((((1, 0), 0), ((0, 1), 0))))


def test_smith_examples():
    assert smith_normal_form([[1, 0], [0, 1]])[0] == [1, 1]
    assert smith_normal_form([[1, 0], [1, 2]])[0] == [1, 2]
    assert smith_normal_form([[0, 0], [0, 0]])[0] == [0, 0]


small = st.integers(-3, 3)
vec2 = st.tuples(small, small).filter(any)
vec3 = st.tuples(small, small, small).filter(any)


@given(vec2, vec2)
def test_dual_is_involution_rank2(a, b):
    assume(a[0] * b[1] - a[1] * b[0] != 0)
    c = Cone((primitive(a), primitive(b)))
    assert sorted(dual_cone(dual_cone(c)).rays) == sorted(c.rays)


@settings(max_examples=40, deadline=None)
@given(vec3, vec3, vec3)
def test_dual_is_involution_rank3(a, b, c):
    assume(det([a, b, c]) != 0)
    cone = Cone(tuple(primitive(v) for v in (a, b, c)))
    assert sorted(dual_cone(dual_cone(cone)).rays) == sorted(cone.rays)


@settings(max_examples=40, deadline=None)
@given(vec2, vec2)
def test_hilbert_basis_matches_brute_force(a, b):
    assume(a[0] * b[1] - a[1] * b[0] != 0)
    rays = [primitive(a), primitive(b)]
    hb = hilbert_basis(Cone(tuple(rays)))
    assert hb == brute_hilbert_basis(rays, 6)


@settings(max_examples=15, deadline=None)
@given(st.tuples(st.integers(-1, 1), st.integers(-1, 1), st.integers(0, 2)).filter(any))
def test_hilbert_basis_rank3_irreducible(v):
    rays = [(1, 0, 0), (0, 1, 0), primitive(v)]
    assume(det(rays) != 0)
    hb = hilbert_basis(Cone(tuple(rays)))
    assert hb == brute_hilbert_basis(rays, 3)


bounds = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(bounds, bounds, bounds, st.integers(-2, 2))
def test_lattice_points_brute_and_unimodular(b1, b2, b3, k):
    ineqs = (((1, 0), b1), ((0, 1), b2), ((-1, -1), b3))
    pts = lattice_points(RationalPolyhedron(ineqs))
    assert pts == brute_lattice_points(ineqs, 10)
    assert count_lattice_points(RationalPolyhedron(ineqs)) == len(pts)
    # u' = u A with A = [[1, k], [0, 1]]; normals transform by A^{-1}
    inv = [[1, -k], [0, 1]]
    moved = tuple((tuple(sum(inv[i][j] * w[j] for j in range(2)) for i in range(2)), b) for w, b in ineqs)
    image = sorted((u[0], k * u[0] + u[1]) for u in pts)
    assert lattice_points(RationalPolyhedron(moved)) == image


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_smith_normal_form_properties(m):
    divisors, u, v = smith_normal_form(m)
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = matmul(matmul(u, m), v)
    for i in range(3):
        for j in range(3):
            assert diag[i][j] == (divisors[i] if i == j else 0)
    assert all(x >= 0 for x in divisors)
    for a, b in zip(divisors, divisors[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    d = det(m)
    prod = 1
    for x in divisors:
        prod *= x
    assert prod == abs(d)


def test_rational_vertices():
    p = RationalPolyhedron((((2, 0), Fraction(1)), ((0, 1), 0), ((-1, -1), -2)))
    assert p.vertices() == sorted([(Fraction(1, 2), Fraction(0)), (Fraction(2), Fraction(0)), (Fraction(1, 2), Fraction(3, 2))])
