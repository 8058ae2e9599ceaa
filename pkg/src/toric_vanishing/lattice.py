"""Lattice vectors, rational cones, polyhedra and lattice-point enumeration.

Everything is exact: integer tuples for lattice vectors, Fractions for
rational data. numpy is only used with int64 for vectorised scans over
lattice boxes, where all quantities are small integers.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import ceil, floor, gcd

import numpy as np

from .errors import InputError, UnboundedPolyhedronError, UnsupportedError
from .linalg import nullspace_q, primitive_integer, rank_q, solve_q

MAX_RANK = 4
MAX_HILBERT_RANK = 3


def pairing(u, v):
    return sum(x * y for x, y in zip(u, v))


def primitive(v):
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise InputError("zero vector has no primitive generator")
    return tuple(x // g for x in v)


def is_primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def _independent_subset(vectors):
    basis = []
    for v in vectors:
        if rank_q(basis + [list(v)]) > len(basis):
            basis.append(list(v))
    return basis


def extreme_rays(ineqs, eqs, n):
    """Extreme rays of the pointed cone {x : w.x >= 0 (w in ineqs), e.x = 0 (e in eqs)}.

    Rays are returned as sorted primitive integer tuples. The caller must
    guarantee that the cone is pointed.
    """
    ineqs = [tuple(w) for w in ineqs]
    eq_basis = _independent_subset([tuple(e) for e in eqs])
    need = n - 1 - len(eq_basis)
    found = set()
    if need < 0:
        return []
    for tight in combinations(ineqs, need):
        rows = eq_basis + [list(w) for w in tight]
        ns = nullspace_q(rows, n)
        if len(ns) != 1:
            continue
        x = primitive_integer(ns[0])
        for cand in (x, tuple(-c for c in x)):
            if all(pairing(w, cand) >= 0 for w in ineqs):
                found.add(cand)
    return sorted(found)


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone generated by primitive integer rays."""

    rays: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        if not rays:
            raise InputError("a cone needs at least one ray")
        n = len(rays[0])
        if any(len(r) != n for r in rays):
            raise InputError("rays of different ranks")
        object.__setattr__(self, "rays", rays)

    @property
    def ambient_rank(self):
        return len(self.rays[0])

    @cached_property
    def dim(self):
        return rank_q([list(r) for r in self.rays])

    @cached_property
    def span_equations(self):
        """Integer basis of the annihilator of the linear span of the rays."""
        return [primitive_integer(v) for v in nullspace_q([list(r) for r in self.rays], self.ambient_rank)]

    @cached_property
    def facet_normals(self):
        """Primitive inward facet normals, chosen inside the linear span.

        Together with span_equations they give an exact H-description when
        the cone is strongly convex.
        """
        d = self.dim
        basis = _independent_subset(self.rays)
        found = set()
        for sub in combinations(self.rays, d - 1):
            gram = [[pairing(v, b) for b in basis] for v in sub]
            ns = nullspace_q(gram, d)
            if len(ns) != 1:
                continue
            w = [sum(c * b[k] for c, b in zip(ns[0], basis)) for k in range(self.ambient_rank)]
            w = primitive_integer(w)
            vals = [pairing(w, v) for v in self.rays]
            if all(x >= 0 for x in vals):
                found.add(w)
            elif all(x <= 0 for x in vals):
                found.add(tuple(-x for x in w))
        return sorted(found)

    @cached_property
    def is_strongly_convex(self):
        return rank_q([list(w) for w in self.facet_normals]) == self.dim if self.facet_normals else self.dim == 0

    def is_extremal(self, ray):
        tight = [list(w) for w in self.facet_normals if pairing(w, ray) == 0]
        return rank_q(tight, self.ambient_rank) == self.dim - 1

    def violations(self):
        out = []
        for r in self.rays:
            if not is_primitive(r):
                out.append(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            out.append("duplicate rays")
        if not self.is_strongly_convex:
            out.append("cone is not strongly convex")
        else:
            for r in self.rays:
                if not self.is_extremal(r):
                    out.append(f"ray {r} is not extremal")
        return out

    def contains(self, x):
        return all(pairing(e, x) == 0 for e in self.span_equations) and all(
            pairing(w, x) >= 0 for w in self.facet_normals
        )

    def face_rays(self, subset):
        """Rays of the smallest face containing the given rays."""
        normals = [w for w in self.facet_normals if all(pairing(w, v) == 0 for v in subset)]
        return [v for v in self.rays if all(pairing(w, v) == 0 for w in normals)]


@dataclass(frozen=True)
class RationalPolyhedron:
    """{u : <u, normal> >= bound for every (normal, bound)}."""

    inequalities: tuple

    def __post_init__(self):
        ineqs = tuple((tuple(int(x) for x in w), Fraction(b)) for w, b in self.inequalities)
        if not ineqs:
            raise InputError("polyhedron needs at least one inequality")
        if any(not any(w) for w, _ in ineqs):
            raise InputError("inequality normals must be nonzero")
        object.__setattr__(self, "inequalities", ineqs)

    @property
    def rank(self):
        return len(self.inequalities[0][0])

    def contains(self, u):
        return all(pairing(w, u) >= b for w, b in self.inequalities)

    def is_bounded(self):
        n = self.rank
        normals = [list(w) for w, _ in self.inequalities]
        if rank_q(normals, n) < n:
            return False
        return not extreme_rays(normals, [], n)

    def vertices(self):
        """Vertices as tuples of Fractions, sorted. Empty if infeasible."""
        n = self.rank
        verts = set()
        for sub in combinations(self.inequalities, n):
            x = solve_q([list(w) for w, _ in sub], [b for _, b in sub])
            if x is None or rank_q([list(w) for w, _ in sub], n) < n:
                continue
            if self.contains(x):
                verts.add(tuple(x))
        return sorted(verts)


def dual_cone(c):
    """The dual cone {u : <u, v> >= 0 for v in c}.

    Full-dimensional input gives a Cone by its extremal rays. Otherwise the
    dual contains a line and is returned as an inequality description.
    """
    n = c.ambient_rank
    if n > MAX_RANK:
        raise UnsupportedError(f"rank {n} exceeds the supported maximum {MAX_RANK}")
    if c.dim < n:
        return RationalPolyhedron(tuple((r, 0) for r in c.rays))
    return Cone(tuple(extreme_rays(c.rays, [], n)))


def _box_points(lo, hi):
    return product(*[range(a, b + 1) for a, b in zip(lo, hi)])


def hilbert_basis(c):
    """Minimal generating set of the semigroup c ∩ Z^n, sorted.

    Every Hilbert basis element lies in the zonotope sum_i [0, 1] v_i of the
    rays, so candidates come from its bounding box; decomposable candidates
    are removed.
    """
    n = c.ambient_rank
    if n > MAX_HILBERT_RANK:
        raise UnsupportedError(f"Hilbert bases supported up to rank {MAX_HILBERT_RANK}")
    if not c.is_strongly_convex:
        raise InputError("Hilbert basis needs a strongly convex cone")
    lo = [sum(min(0, r[k]) for r in c.rays) for k in range(n)]
    hi = [sum(max(0, r[k]) for r in c.rays) for k in range(n)]
    cands = [x for x in _box_points(lo, hi) if any(x) and c.contains(x)]
    basis = []
    for x in cands:
        if not any(h != x and c.contains(tuple(a - b for a, b in zip(x, h))) for h in cands):
            basis.append(x)
    return sorted(basis)


def _integer_system(poly):
    normals = np.array([w for w, _ in poly.inequalities], dtype=np.int64)
    # for integer u, <u, w> >= b  <=>  <u, w> >= ceil(b)
    bounds = np.array([ceil(b) for _, b in poly.inequalities], dtype=np.int64)
    return normals, bounds


def _scan_box(poly):
    if not poly.is_bounded():
        raise UnboundedPolyhedronError()
    verts = poly.vertices()
    if not verts:
        return None
    n = poly.rank
    lo = [floor(min(v[k] for v in verts)) for k in range(n)]
    hi = [ceil(max(v[k] for v in verts)) for k in range(n)]
    return lo, hi


def _iter_box_chunks(lo, hi, chunk=200_000):
    """Yield int64 arrays of box points in lexicographic order."""
    n = len(lo)
    tail = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo[1:], hi[1:])]
    if tail:
        grid = np.stack(np.meshgrid(*tail, indexing="ij"), axis=-1).reshape(-1, n - 1)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    step = max(1, chunk // max(1, len(grid)))
    for start in range(lo[0], hi[0] + 1, step):
        heads = np.arange(start, min(start + step, hi[0] + 1), dtype=np.int64)
        block = np.concatenate(
            [np.repeat(heads, len(grid))[:, None], np.tile(grid, (len(heads), 1))], axis=1
        )
        yield block


def lattice_points(poly):
    """All integer points of a bounded rational polyhedron, lexicographically sorted."""
    box = _scan_box(poly)
    if box is None:
        return []
    normals, bounds = _integer_system(poly)
    out = []
    for block in _iter_box_chunks(*box):
        keep = np.all(block @ normals.T >= bounds, axis=1)
        out.extend(tuple(int(x) for x in row) for row in block[keep])
    return out


def count_lattice_points(poly):
    box = _scan_box(poly)
    if box is None:
        return 0
    normals, bounds = _integer_system(poly)
    return int(sum(np.count_nonzero(np.all(b @ normals.T >= bounds, axis=1)) for b in _iter_box_chunks(*box)))


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(mat):
    """Smith normal form of an integer matrix.

    Returns (divisors, U, V) with U * mat * V diagonal, the diagonal being
    `divisors` (nonnegative, each dividing the next) padded with zeros.
    U and V are unimodular.
    """
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u, v = _identity(m), _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv), None
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    divisors = [a[i][i] for i in range(min(m, n))]
    return divisors, u, v
