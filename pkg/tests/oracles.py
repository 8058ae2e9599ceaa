"""Independent brute-force oracles used by the tests.

None of these import the package's algorithms; they recompute the same
quantities by different routes (Cech complexes, exhaustive box scans,
root-of-unity searches).
"""
from fractions import Fraction
from itertools import combinations, product
from math import comb


def rank_mod(rows, p):
    """Gaussian elimination mod p, written independently of the package."""
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], p - 2, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


# Witt vectors ----------------------------------------------------------------

def teichmuller_by_search(a0, p):
    """The unique t in Z/p^2 with t = a0 mod p and t^p = t mod p^2."""
    hits = [t for t in range(a0 % p, p * p, p) if pow(t, p, p * p) == t]
    assert len(hits) == 1
    return hits[0]


def to_zp2(a0, a1, p):
    return (teichmuller_by_search(a0, p) + p * a1) % (p * p)


def from_zp2(x, p):
    a0 = x % p
    return a0, ((x - teichmuller_by_search(a0, p)) // p) % p


# lattice geometry ------------------------------------------------------------

def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def box(radius, n):
    return product(range(-radius, radius + 1), repeat=n)


def brute_lattice_points(ineqs, radius):
    """Integer points of {u : <u, w> >= b} inside [-radius, radius]^n."""
    n = len(ineqs[0][0])
    return sorted(u for u in box(radius, n) if all(dot(u, w) >= Fraction(b) for w, b in ineqs))


def brute_hilbert_basis(rays, radius):
    """Irreducible nonzero lattice points of cone(rays), searched in a box.

    Membership uses the definition: x = sum lambda_i v_i, lambda >= 0,
    tested via rational solving over all subsets of rays of full rank
    (Caratheodory).
    """
    n = len(rays[0])
    pts = [x for x in box(radius, n) if any(x) and in_cone(rays, x)]
    pset = set(pts)
    return sorted(
        x for x in pts if not any(tuple(a - b for a, b in zip(x, y)) in pset for y in pts if y != x)
    )


def _solve(cols, x):
    """Solve sum c_i cols_i = x over Q for linearly independent cols; None if impossible."""
    n = len(x)
    k = len(cols)
    aug = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(x[i])] for i in range(n)]
    r = 0
    piv_cols = []
    for c in range(k):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        aug[r] = [v / aug[r][c] for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    return [aug[i][k] for i in range(k)]


def in_cone(rays, x):
    if not any(x):
        return True
    for k in range(1, len(rays) + 1):
        for sub in combinations(rays, k):
            c = _solve(list(sub), x)
            if c is not None and all(v >= 0 for v in c):
                return True
    return False


def det(m):
    m = [list(map(Fraction, r)) for r in m]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return int(out)


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


# cohomology ------------------------------------------------------------------

def cech_cohomology(rays, max_cones, coeffs, p, radius):
    """h^i(X, O(D)) over F_p from the Cech complex of the affine cover.

    On U_tau the degree-m piece of O(D) is F_p if <m, v_rho> >= -a_rho for
    every ray of tau, else 0. Summed over degrees in [-radius, radius]^n.
    """
    n = len(rays[0])
    cones = [frozenset(c) for c in max_cones]
    k_max = len(cones)
    simplices = {k: list(combinations(range(k_max), k + 1)) for k in range(k_max)}
    inter = {s: frozenset.intersection(*[cones[i] for i in s]) for k in simplices for s in simplices[k]}
    dims = [0] * (n + 1)
    for m in box(radius, n):
        ok = {r: dot(m, rays[r]) >= -coeffs[r] for r in range(len(rays))}
        active = {k: [s for s in simplices[k] if all(ok[r] for r in inter[s])] for k in simplices}
        ranks = {}
        for k in range(k_max - 1):
            src, dst = active[k], active[k + 1]
            pos = {s: j for j, s in enumerate(src)}
            rows = []
            for t in dst:
                row = [0] * len(src)
                for i in range(len(t)):
                    face = t[:i] + t[i + 1:]
                    if face in pos:
                        row[pos[face]] = (-1) ** i
                rows.append(row)
            ranks[k] = rank_mod(rows, p) if rows and src else 0
        for k in range(k_max):
            h = len(active[k]) - ranks.get(k, 0) - ranks.get(k - 1, 0)
            if h:
                assert k <= n, (m, k, h)
                dims[k] += h
    return tuple(dims)


def koszul_dims(u, p):
    n = len(u)
    if all(x % p == 0 for x in u):
        return tuple(comb(n, i) for i in range(n + 1))
    return (0,) * (n + 1)


# ampleness -------------------------------------------------------------------

def ample_by_minimizers(rays, max_cones, coeffs):
    """Strict convexity test: for x interior to each max cone sigma,
    u(sigma) is the unique minimizer of <u(tau), x> over all max cones."""
    us = []
    for c in max_cones:
        cols = [rays[i] for i in c]
        # solve <u, v_i> = -a_i: transpose system
        n = len(rays[0])
        mat = [[Fraction(v[j]) for j in range(n)] + [Fraction(-coeffs[i])] for v, i in zip(cols, c)]
        sol = _least_solve(mat, n)
        if sol is None:
            return None
        us.append(sol)
    for k, c in enumerate(max_cones):
        x = [sum(rays[i][j] for i in c) for j in range(len(rays[0]))]
        mine = dot(us[k], x)
        if any(dot(us[t], x) <= mine for t in range(len(max_cones)) if t != k):
            return False
    return True


def _least_solve(aug, n):
    m = [r[:] for r in aug]
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [v / m[r][c] for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(m[i][n] != 0 for i in range(r, len(m))):
        return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = m[i][n]
    return sol
