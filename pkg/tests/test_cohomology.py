import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import cech_cohomology, dot
from toric_vanishing.cohomology import (
    DegreeComplex,
    cohomology_table,
    degree_bounds,
    degree_complex,
    euler_characteristic,
    local_cohomology_at,
    reduced_cohomology,
    serre_duality_check,
)
from toric_vanishing.divisors import canonical_divisor, divisor, h0_count, is_ample, is_cartier, is_nef, linear_shift
from toric_vanishing.errors import InputError
from toric_vanishing.fan import NAMED_FANS, Fan, named_fan

CATALOG = sorted(NAMED_FANS)
SURFACES = [n for n in CATALOG if named_fan(n).rank == 2]


def complex_of(faces):
    verts = sorted({v for f in faces for v in f})
    return DegreeComplex((), tuple(verts), tuple(faces))


def test_reduced_cohomology_examples():
    assert reduced_cohomology(complex_of(()), 2) == {-1: 1}
    two_points = reduced_cohomology(complex_of(((0,), (1,))), 2)
    assert two_points[0] == 1 and two_points[-1] == 0
    hollow = reduced_cohomology(complex_of(((0,), (1,), (2,), (0, 1), (1, 2), (0, 2))), 3)
    assert hollow == {-1: 0, 0: 0, 1: 1}
    filled = reduced_cohomology(complex_of(((0,), (1,), (2,), (0, 1), (1, 2), (0, 2), (0, 1, 2))), 3)
    assert all(v == 0 for v in filled.values())


def test_degree_complex_p1():
    f = named_fan("p1")
    d = divisor(f, [-2, 0])
    c = degree_complex(d, (1,))
    assert c.vertices == (0, 1) and c.faces == ((0,), (1,))
    assert reduced_cohomology(c, 2)[0] == 1
    assert local_cohomology_at(d, (1,), 2) == {0: 0, 1: 1}


def test_degree_complex_inside_polytope_is_empty():
    d = divisor(named_fan("p2"), [2, 2, 2])
    c = degree_complex(d, (0, 0))
    assert c.vertices == () and reduced_cohomology(c, 3) == {-1: 1}


def test_degree_complex_canonical_p2():
    k = canonical_divisor(named_fan("p2"))
    full = degree_complex(k, (0, 0))
    assert full.vertices == (0, 1, 2)
    assert reduced_cohomology(full, 3)[1] == 1
    # at (-1,-1) the third ray is not negative: an edge, contractible
    edge = degree_complex(k, (-1, -1))
    assert edge.vertices == (0, 1)
    assert all(v == 0 for v in reduced_cohomology(edge, 3).values())


def test_degree_bounds_examples():
    d = divisor(named_fan("p1"), [-2, 0])
    box = degree_bounds(d)
    assert all((m,) in box for m in (0, 1, 2))
    assert cohomology_table(divisor(named_fan("p2"), [0, 0, 0]), 3).dims == (1, 0, 0)


def test_table_examples():
    p2 = named_fan("p2")
    assert cohomology_table(divisor(p2, [0, 0, -3]), 2).dims == (0, 0, 1)
    assert cohomology_table(divisor(p2, [1, 0, 0]), 2).dims == (3, 0, 0)
    assert cohomology_table(divisor(p2, [0, 0, 2]), 5).dims == (6, 0, 0)
    assert cohomology_table(divisor(p2, [0, 0, -5]), 5).dims == (0, 0, 6)
    q = named_fan("p1xp1")
    assert cohomology_table(divisor(q, [-1, 0, -1, 0]), 3).dims == (0, 0, 0)
    assert cohomology_table(divisor(q, [-2, 0, 1, 0]), 3).dims == (0, 2, 0)


def test_serre_examples():
    p2 = named_fan("p2")
    assert serre_duality_check(divisor(p2, [0, 0, 2]), 3)
    w = named_fan("p112")
    assert cohomology_table(canonical_divisor(w), 5).dims == (0, 0, 1)
    assert serre_duality_check(divisor(w, [0, 0, 0]), 2)


def test_errors():
    with pytest.raises(InputError):
        cohomology_table(divisor(named_fan("p2"), ["1/2", 0, 0]), 3)
    with pytest.raises(InputError):
        cohomology_table(divisor(Fan(((1, 0), (0, 1)), ((0, 1),)), [0, 0]), 3)


def _oracle_radius(f, cs):
    top = max(abs(x) for r in f.rays for x in r)
    return top * sum(abs(c) for c in cs) + 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SURFACES + ["p1"]), st.sampled_from([2, 3, 5, 7]), st.data())
def test_table_matches_cech_oracle(name, p, data):
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-3, 3), min_size=f.n_rays, max_size=f.n_rays))
    got = cohomology_table(divisor(f, cs), p).dims
    assert got == cech_cohomology(f.rays, f.max_cones, cs, p, _oracle_radius(f, cs))


@settings(max_examples=8, deadline=None)
@given(st.lists(st.integers(-2, 1), min_size=4, max_size=4), st.sampled_from([2, 3]))
def test_table_matches_cech_oracle_p3(cs, p):
    f = named_fan("p3")
    got = cohomology_table(divisor(f, cs), p).dims
    assert got == cech_cohomology(f.rays, f.max_cones, cs, p, sum(abs(c) for c in cs) + 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_support_runs_sum_to_dims(name, data):
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-4, 4), min_size=f.n_rays, max_size=f.n_rays))
    d = divisor(f, cs)
    t = cohomology_table(d, 3)
    for i in range(f.rank + 1):
        runs = t.support(i)
        assert sum(r.length * r.local_dim for r in runs) == t[i]
        for r in runs[:3]:
            m = r.start[:-1] + (r.start[-1] + r.length - 1,)
            assert local_cohomology_at(d, m, 3)[i] == r.local_dim


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_wide_scan_audit(name, data):
    """Degrees outside the candidate box (sampled from a 3x box) carry nothing."""
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-4, 4), min_size=f.n_rays, max_size=f.n_rays))
    d = divisor(f, cs)
    box = degree_bounds(d)
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    lo = [a - (b - a + 1) for a, b in zip(box.lo, box.hi)]
    hi = [b + (b - a + 1) for a, b in zip(box.lo, box.hi)]
    seen = {}
    for _ in range(200):
        m = tuple(rng.randint(a, b) for a, b in zip(lo, hi))
        c = degree_complex(d, m)
        signs = tuple(dot(m, v) + a < 0 for v, a in zip(f.rays, cs))
        # chamber constancy: equal sign vectors give equal complexes
        if signs in seen:
            assert seen[signs] == (c.vertices, c.faces)
        seen[signs] = (c.vertices, c.faces)
        if m not in box:
            assert all(v == 0 for v in reduced_cohomology(c, 2).values())


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_shift_invariance(name, data):
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-3, 3), min_size=f.n_rays, max_size=f.n_rays))
    u = data.draw(st.lists(st.integers(-2, 2), min_size=f.rank, max_size=f.rank))
    d = divisor(f, cs)
    assert cohomology_table(d, 2).dims == cohomology_table(linear_shift(d, u), 2).dims


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_nef_and_ample_consequences(name, data):
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-2, 3), min_size=f.n_rays, max_size=f.n_rays))
    d = divisor(f, cs)
    if not is_cartier(d) or not is_nef(d):
        return
    t = cohomology_table(d, 3)
    assert all(x == 0 for x in t.dims[1:])
    if is_ample(d):
        assert euler_characteristic(t) == h0_count(d)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_field_independence(name, data):
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-4, 4), min_size=f.n_rays, max_size=f.n_rays))
    d = divisor(f, cs)
    tables = {cohomology_table(d, p).dims for p in (2, 3, 5, 7)}
    assert len(tables) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG), st.sampled_from([2, 3, 5, 7]), st.data())
def test_serre_duality_property(name, p, data):
    f = named_fan(name)
    cs = data.draw(st.lists(st.integers(-4, 4), min_size=f.n_rays, max_size=f.n_rays))
    assert serre_duality_check(divisor(f, cs), p)


def test_large_table_closed_form():
    f = named_fan("p3")
    t = cohomology_table(divisor(f, [0, 0, 0, -40]), 5)
    # h^3(O(-d)) = h^0(O(d-4)) = C(d-1, 3)
    assert t.dims == (0, 0, 0, 9139)


@pytest.mark.parametrize("name", CATALOG)
def test_structure_sheaf(name):
    f = named_fan(name)
    n = f.rank
    assert cohomology_table(divisor(f, [0] * f.n_rays), 2).dims == (1,) + (0,) * n
    assert cohomology_table(canonical_divisor(f), 2).dims == (0,) * n + (1,)


def test_h0_cross_check_is_exhaustive_on_small_box():
    f = named_fan("f2")
    for cs in product(range(0, 3), repeat=4):
        d = divisor(f, cs)
        assert cohomology_table(d, 2)[0] == h0_count(d)
