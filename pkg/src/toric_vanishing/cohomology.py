"""M-graded cohomology of O_X(D) for torus-invariant Weil divisors.

For each degree m in M the graded piece is

    H^i(X, O(D))_m  =  reduced H^{i-1}(V_{D,m}; F_p),

where V_{D,m} is the simplicial complex on the rays rho with
<m, v_rho> < -a_rho whose faces are the subsets lying in a common cone.
V_{D,m} only depends on which rays are "negative", so the scan groups
degrees by that bitmask: along the last coordinate axis the mask is
piecewise constant with at most one breakpoint per ray, and each run of
equal masks is counted in one step.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, comb, floor

import numpy as np

from .divisors import canonical_divisor, h0_count
from .errors import InputError, VerificationError
from .fan import is_complete
from .lattice import pairing
from .linalg import det_int, inverse_q, rank_mod_p


@dataclass(frozen=True)
class DegreeComplex:
    degree: tuple
    vertices: tuple
    faces: tuple  # nonempty faces, each a sorted tuple of ray indices


@dataclass(frozen=True)
class DegreeBox:
    lo: tuple
    hi: tuple

    def __contains__(self, m):
        return all(a <= x <= b for a, x, b in zip(self.lo, m, self.hi))

    def points(self):
        from itertools import product

        return product(*[range(a, b + 1) for a, b in zip(self.lo, self.hi)])

    @property
    def size(self):
        out = 1
        for a, b in zip(self.lo, self.hi):
            out *= b - a + 1
        return out


@dataclass(frozen=True)
class SupportRun:
    """Degrees start, start + e_n, ..., start + (length-1) e_n, each of local dimension local_dim."""

    start: tuple
    length: int
    local_dim: int


@dataclass
class GradedCohomologyTable:
    divisor: object
    prime: int
    dims: tuple
    box: DegreeBox
    mask_dims: dict = field(repr=False)
    _runs: tuple = field(repr=False, default=None)

    def __getitem__(self, i):
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def support(self, i):
        """Runs of degrees m with H^i(X, O(D))_m != 0."""
        prefix, starts, lengths, masks = self._runs
        out = []
        for col, row_starts, row_lengths, row_masks in zip(prefix, starts, lengths, masks):
            for s, length, mask in zip(row_starts, row_lengths, row_masks):
                if length <= 0:
                    continue
                local = self.mask_dims[int(mask)].get(i - 1, 0)
                if local:
                    m = tuple(int(x) for x in col) + (int(s),)
                    out.append(SupportRun(m, int(length), local))
        return out


# per-fan precomputation ----------------------------------------------------

class _FanContext:
    def __init__(self, fan):
        if not is_complete(fan):
            raise InputError("cohomology tables need a complete fan")
        self.fan = fan
        self.n = fan.rank
        self.rays = np.array(fan.rays, dtype=np.int64)
        self.cone_masks = tuple(sum(1 << i for i in c) for c in fan.max_cones)
        subsystems = []
        for sub in combinations(range(fan.n_rays), self.n):
            mat = [list(fan.rays[i]) for i in sub]
            det = det_int(mat)
            if det == 0:
                continue
            inv = inverse_q(mat)
            # vertex m solves R_S m = b, so m = inv b; store det * inv as integers
            adj = [[int(x * det) for x in row] for row in inv]
            subsystems.append((sub, adj, det))
        if not subsystems:
            raise InputError("degenerate fan: no full-rank ray subsystem")
        self.subsystems = subsystems
        self._rc_cache = {}

    def reduced_cohomology(self, mask, p):
        key = (mask, p)
        if key not in self._rc_cache:
            self._rc_cache[key] = _reduced_cohomology_of_faces(_faces_from_mask(mask, self.cone_masks), p)
        return self._rc_cache[key]


@lru_cache(maxsize=64)
def _context(fan):
    return _FanContext(fan)


def _bits(mask):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _faces_from_mask(mask, cone_masks):
    faces = set()
    for cm in cone_masks:
        sub = _bits(mask & cm)
        for k in range(len(sub) + 1):
            faces.update(combinations(sub, k))
    return faces


def _reduced_cohomology_of_faces(faces, p):
    """Reduced cohomology dims over F_p of a face-closed family of sorted tuples.

    The empty face is the (-1)-cell of the augmented cochain complex.
    Returns {i: dim} for i = -1 .. top dimension.
    """
    by_size = {}
    for f in faces:
        by_size.setdefault(len(f), []).append(f)
    if () not in faces:
        by_size.setdefault(0, []).append(())
    top = max(by_size)
    for k in by_size:
        by_size[k].sort()
    ranks = {}
    for k in range(top):
        src, dst = by_size.get(k, []), by_size.get(k + 1, [])
        if not src or not dst:
            ranks[k] = 0
            continue
        pos = {f: j for j, f in enumerate(src)}
        rows = []
        for g in dst:
            row = [0] * len(src)
            for t in range(len(g)):
                row[pos[g[:t] + g[t + 1:]]] = (-1) ** t
            rows.append(row)
        ranks[k] = rank_mod_p(rows, p)
    out = {}
    for k in range(top + 1):
        dim = len(by_size.get(k, [])) - ranks.get(k, 0) - ranks.get(k - 1, 0)
        out[k - 1] = dim
    return out


# public operations ---------------------------------------------------------

def degree_complex(d, m):
    """The complex V_{D,m}: negative rays, faces lying in common cones."""
    f = d.fan
    a = d.int_coeffs()
    verts = tuple(i for i, v in enumerate(f.rays) if pairing(m, v) < -a[i])
    vset = set(verts)
    faces = set()
    for c in f.max_cones:
        sub = sorted(vset.intersection(c))
        for k in range(1, len(sub) + 1):
            faces.update(combinations(sub, k))
    return DegreeComplex(tuple(m), verts, tuple(sorted(faces, key=lambda t: (len(t), t))))


def reduced_cohomology(c, p):
    """{i: dim reduced H^i(c; F_p)} for i = -1 .. dim c."""
    return _reduced_cohomology_of_faces(set(c.faces) | {()}, p)


def degree_bounds(d):
    """Box containing every degree that can carry cohomology.

    The box is the bounding box of all vertices of the arrangement
    <m, v_rho> = -a_rho (one per invertible n-subset of rays), widened by 1.
    Degrees outside it lie in unbounded chambers, which carry no cohomology
    since each group is finite-dimensional.
    """
    ctx = _context(d.fan)
    a = d.int_coeffs()
    n = ctx.n
    lo, hi = [None] * n, [None] * n
    for sub, adj, det in ctx.subsystems:
        b = [-a[i] for i in sub]
        for k in range(n):
            num = sum(x * y for x, y in zip(adj[k], b))
            val = Fraction(num, det)
            lo[k] = floor(val) if lo[k] is None else min(lo[k], floor(val))
            hi[k] = ceil(val) if hi[k] is None else max(hi[k], ceil(val))
    return DegreeBox(tuple(x - 1 for x in lo), tuple(x + 1 for x in hi))


def _sweep(ctx, a, box):
    """Run-length encode the negative-ray mask over the box along the last axis.

    Returns (prefix coords, run starts, run lengths, run masks); rows are
    indexed by the first n-1 coordinates.
    """
    n = ctx.n
    rays = ctx.rays
    lo, hi = box.lo, box.hi
    if n == 1:
        prefix = np.zeros((1, 0), dtype=np.int64)
    else:
        axes = [np.arange(lo[k], hi[k] + 1, dtype=np.int64) for k in range(n - 1)]
        prefix = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n - 1)
    cols = len(prefix)
    # rho is negative at m  <=>  m_n * v_n < c_rho := -a_rho - <m', v'>
    c = -np.asarray(a, dtype=np.int64)[None, :] - prefix @ rays[:, : n - 1].T
    vn = rays[:, n - 1]
    last_lo, last_hi = lo[n - 1], hi[n - 1]
    thresholds = {}
    breaks = [np.full((cols, 1), last_lo, dtype=np.int64)]
    for rho in range(len(vn)):
        v = int(vn[rho])
        if v > 0:
            t = np.floor_divide(c[:, rho] - 1, v)  # negative iff m_n <= t
            thresholds[rho] = ("le", t)
            breaks.append((t + 1)[:, None])
        elif v < 0:
            t = np.floor_divide(c[:, rho], v) + 1  # negative iff m_n >= t
            thresholds[rho] = ("ge", t)
            breaks.append(t[:, None])
        else:
            thresholds[rho] = ("const", c[:, rho] > 0)
    starts = np.sort(np.clip(np.concatenate(breaks, axis=1), last_lo, last_hi + 1), axis=1)
    ends = np.concatenate([starts[:, 1:], np.full((cols, 1), last_hi + 1, dtype=np.int64)], axis=1)
    lengths = ends - starts
    masks = np.zeros(starts.shape, dtype=np.int64)
    for rho, (kind, t) in thresholds.items():
        if kind == "le":
            member = starts <= t[:, None]
        elif kind == "ge":
            member = starts >= t[:, None]
        else:
            member = np.broadcast_to(t[:, None], starts.shape)
        masks |= member.astype(np.int64) << rho
    return prefix, starts, lengths, masks


def cohomology_table(d, p, check_h0=True):
    """dims h^0..h^n of O_X(D) over F_p, with per-degree support runs.

    The h^0 entry is cross-checked against the lattice-point count of P_D;
    a disagreement raises VerificationError.
    """
    if not d.is_integral():
        raise InputError("cohomology tables need an integral divisor")
    ctx = _context(d.fan)
    if ctx.fan.n_rays > 62:
        raise InputError("too many rays for mask encoding")
    a = d.int_coeffs()
    box = degree_bounds(d)
    prefix, starts, lengths, masks = _sweep(ctx, a, box)
    keep = lengths > 0
    uniq, inverse = np.unique(masks[keep], return_inverse=True)
    totals = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(totals, inverse, lengths[keep])
    n = ctx.n
    dims = [0] * (n + 1)
    mask_dims = {}
    for mask, total in zip(uniq.tolist(), totals.tolist()):
        rc = ctx.reduced_cohomology(mask, p)
        mask_dims[mask] = rc
        for i in range(n + 1):
            dims[i] += total * rc.get(i - 1, 0)
    extra = sorted({k for rc in mask_dims.values() for k, v in rc.items() if v and k >= n})
    if extra:
        raise VerificationError(f"reduced cohomology in degrees {extra}, beyond rank {n}")
    table = GradedCohomologyTable(d, p, tuple(dims), box, mask_dims, (prefix, starts, lengths, masks))
    if check_h0:
        expected = h0_count(d)
        if expected != dims[0]:
            raise VerificationError(
                f"h0 mismatch for {d}: graded engine {dims[0]}, lattice points {expected}"
            )
    return table


def euler_characteristic(table):
    return sum((-1) ** i * x for i, x in enumerate(table.dims))


def serre_duality_check(d, p):
    """h^i(D) == h^{n-i}(K - D) for all i."""
    n = d.fan.rank
    left = cohomology_table(d, p).dims
    right = cohomology_table(canonical_divisor(d.fan) - d, p).dims
    return all(left[i] == right[n - i] for i in range(n + 1))


def local_cohomology_at(d, m, p):
    """{i: dim H^i(X, O(D))_m} computed directly from the degree complex."""
    rc = reduced_cohomology(degree_complex(d, m), p)
    return {i: rc.get(i - 1, 0) for i in range(d.fan.rank + 1)}


def binomial_row(n):
    return tuple(comb(n, i) for i in range(n + 1))
