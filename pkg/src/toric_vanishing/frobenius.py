"""Chart-level Frobenius lifting on toric varieties.

On an affine chart U_sigma = Spec W_2(F_p)[sigma^dual ∩ M] the lifting of
Frobenius is the monomial map chi^u -> chi^{pu}. This module realises that
map on finitely supported chart elements, checks compatibility with
torus-invariant Cartier divisors, and verifies the graded statements
about log de Rham complexes on the torus chart: the Cartier
quasi-isomorphism, Hara's one-dimensional twisted complex and its
product (Kunneth) version.

The ground field is F_p, so the Frobenius twist X' of X is X itself.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, comb

from .errors import InputError, UnsupportedError, VerificationError
from .lattice import Cone, RationalPolyhedron, dual_cone, hilbert_basis, lattice_points, pairing
from .linalg import rank_mod_p
from .witt import WittElem, pr1, witt_frobenius


# semigroup algebra ---------------------------------------------------------

@dataclass(frozen=True)
class SemigroupElem:
    """Finitely supported sum of W_2(F_p) multiples of chi^u, u in sigma^dual ∩ M."""

    chart: Cone
    p: int
    terms: tuple  # sorted ((u, WittElem), ...), no zero coefficients

    @classmethod
    def from_dict(cls, chart, p, coeffs):
        terms = []
        for u, c in coeffs.items():
            u = tuple(int(x) for x in u)
            if not isinstance(c, WittElem):
                c = WittElem(*c, p) if isinstance(c, tuple) else WittElem(int(c), 0, p)
            if c.p != p:
                raise InputError("coefficient over the wrong prime")
            if c.is_zero():
                continue
            if any(pairing(u, v) < 0 for v in chart.rays):
                raise InputError(f"exponent {u} is not in the dual cone of the chart")
            terms.append((u, c))
        return cls(chart, p, tuple(sorted(terms)))

    @classmethod
    def monomial(cls, chart, p, u, coeff=None):
        return cls.from_dict(chart, p, {tuple(u): coeff if coeff is not None else WittElem.one(p)})

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        _same_chart(self, other)
        out = self.as_dict()
        for u, c in other.terms:
            out[u] = out[u] + c if u in out else c
        return SemigroupElem.from_dict(self.chart, self.p, out)

    def __mul__(self, other):
        return chart_mul(self, other)


def _same_chart(a, b):
    if a.chart != b.chart or a.p != b.p:
        raise InputError("elements live on different charts or primes")


def chart_mul(a, b):
    """Convolution product with Witt coefficient arithmetic."""
    _same_chart(a, b)
    out = {}
    for u, c in a.terms:
        for v, e in b.terms:
            w = tuple(x + y for x, y in zip(u, v))
            prod = c * e
            out[w] = out[w] + prod if w in out else prod
    return SemigroupElem.from_dict(a.chart, a.p, out)


def monomial_frobenius(p):
    return lambda u: tuple(p * x for x in u)


def lift_frobenius(a, lift=None):
    """chi^u -> chi^{lift(u)} (default u -> pu), Witt Frobenius on coefficients."""
    lift = lift or monomial_frobenius(a.p)
    out = {}
    for u, c in a.terms:
        w = tuple(lift(u))
        fc = witt_frobenius(c)
        out[w] = out[w] + fc if w in out else fc
    return SemigroupElem.from_dict(a.chart, a.p, out)


def reduce_mod_p(a):
    """Image in F_p[sigma^dual ∩ M] as {u: residue}, zero terms dropped."""
    return {u: pr1(c) for u, c in a.terms if pr1(c)}


def fp_mul(x, y, p):
    out = {}
    for u, c in x.items():
        for v, e in y.items():
            w = tuple(a + b for a, b in zip(u, v))
            out[w] = (out.get(w, 0) + c * e) % p
    return {u: c for u, c in out.items() if c}


def fp_power(x, k, n, p):
    """x**k in F_p[M] by repeated multiplication; n is the lattice rank."""
    out = {(0,) * n: 1}
    for _ in range(k):
        out = fp_mul(out, x, p)
    return out


def chart_semigroup_generators(chart):
    """Hilbert basis of sigma^dual ∩ M for a full-dimensional chart cone."""
    if chart.dim != chart.ambient_rank:
        raise UnsupportedError("chart cone must be full-dimensional")
    return hilbert_basis(dual_cone(chart))


def random_element(chart, p, rng, n_terms=4, max_mult=3):
    gens = chart_semigroup_generators(chart)
    coeffs = {}
    for _ in range(n_terms):
        u = [0] * chart.ambient_rank
        for g in gens:
            k = rng.randint(0, max_mult)
            u = [x + k * y for x, y in zip(u, g)]
        coeffs[tuple(u)] = WittElem(rng.randrange(p), rng.randrange(p), p)
    return SemigroupElem.from_dict(chart, p, coeffs)


# compatibility with divisors ----------------------------------------------

def _divides(chart, g, w):
    """chi^g divides chi^w in the chart semigroup."""
    return all(pairing(tuple(b - a for a, b in zip(g, w)), v) >= 0 for v in chart.rays)


def divisorial_ideal_generators(chart, orders):
    """Minimal monomial generators of {chi^w : <w, v_rho> >= orders[rho]} on the chart."""
    n = chart.ambient_rank
    if chart.dim != n:
        raise UnsupportedError("chart cone must be full-dimensional")
    dual_rays = dual_cone(chart).rays
    lower = RationalPolyhedron(tuple((v, c) for v, c in zip(chart.rays, orders)))
    verts = lower.vertices()
    # minimal generators lie in (a vertex) + [0,1)-combinations of the dual rays
    slack = [sum(pairing(r, v) for r in dual_rays) for v in chart.rays]
    tops = [max(pairing(x, v) for x in verts) + s for v, s in zip(chart.rays, slack)]
    box = RationalPolyhedron(
        tuple((v, c) for v, c in zip(chart.rays, orders))
        + tuple((tuple(-x for x in v), -t) for v, t in zip(chart.rays, tops))
    )
    pts = lattice_points(box)
    return [w for w in pts if not any(h != w and _divides(chart, h, w) for h in pts)]


def _exponent(g):
    if isinstance(g, SemigroupElem):
        if len(g.terms) != 1 or g.terms[0][1] != WittElem.one(g.p):
            raise UnsupportedError("only monomial ideal generators are supported")
        return g.terms[0][0]
    return tuple(int(x) for x in g)


def compatibility_check(chart, generators, p, lift=None):
    """Does the lifted ideal F~(I_D) generate the ideal of pD on the chart?

    `generators` are exponents of the monomial (fractional) ideal of D on the
    chart, e.g. [-u(sigma)] for Cartier data u(sigma). The ideal of pD is the
    divisorial ideal with orders p * (order of D along each ray).
    """
    lift = lift or monomial_frobenius(p)
    gens = [_exponent(g) for g in generators]
    if not gens:
        raise InputError("need at least one generator")
    orders = [min(pairing(g, v) for g in gens) for v in chart.rays]
    target = divisorial_ideal_generators(chart, [p * o for o in orders])
    lifted = [tuple(lift(g)) for g in gens]
    inside = all(all(pairing(w, v) >= p * o for v, o in zip(chart.rays, orders)) for w in lifted)
    covers = all(any(_divides(chart, g, t) for g in lifted) for t in target)
    return inside and covers


# graded log de Rham complexes on the torus chart -------------------------

def wedge_basis(n, i):
    return list(combinations(range(n), i))


def koszul_matrix(u, i, p):
    """Matrix of omega -> u ∧ omega from Lambda^i to Lambda^{i+1} over F_p.

    This is d on the degree-u piece chi^u * dlog x_I of the log de Rham
    complex of the torus: d(chi^u dlog x_I) = chi^u (sum_j u_j dlog x_j) ∧ dlog x_I.
    Rows index Lambda^{i+1}, columns Lambda^i.
    """
    n = len(u)
    src, dst = wedge_basis(n, i), wedge_basis(n, i + 1)
    pos = {J: r for r, J in enumerate(dst)}
    mat = [[0] * len(src) for _ in dst]
    for col, I in enumerate(src):
        for j in range(n):
            if j in I or u[j] % p == 0:
                continue
            J = tuple(sorted(I + (j,)))
            sign = (-1) ** sum(1 for k in I if k < j)
            mat[pos[J]][col] = (sign * u[j]) % p
    return mat


def graded_log_complex(u, p):
    """Cohomology dims of (Lambda^• F_p^n, u ∧ ·) by explicit ranks."""
    n = len(u)
    if n > 4:
        raise UnsupportedError("graded log complexes supported for n <= 4")
    ranks = [rank_mod_p(koszul_matrix(u, i, p), p) if i < n else 0 for i in range(n + 1)]
    return tuple(comb(n, i) - ranks[i] - (ranks[i - 1] if i else 0) for i in range(n + 1))


def _apply(mat, vec, p):
    return [sum(a * b for a, b in zip(row, vec)) % p for row in mat]


def log_form_f(j, n, p, lift=None):
    """f(dlog x_j) = p^{-1} F~*(dlog x~_j) as a vector on the Lambda^1 basis.

    F~*(x~_j) = chi^{lift(e_j)} with coefficient 1, so F~*(dlog x~_j) has
    integer coefficients lift(e_j)_k on dlog x~_k. Each must lie in
    p W_2 = {(0, c)}; dividing by p keeps c.
    """
    lift = lift or monomial_frobenius(p)
    image = lift(tuple(int(k == j) for k in range(n)))
    out = []
    for c in image:
        w = WittElem.zero(p)
        unit = WittElem.one(p) if c >= 0 else -WittElem.one(p)
        for _ in range(abs(c)):
            w = w + unit
        if w.a0 != 0:
            raise VerificationError(f"lift is not a Frobenius lift: dlog coefficient {c} not divisible by p")
        out.append(w.a1)
    return out


def _wedge(vecs, n, p):
    """Wedge product of 1-forms (vectors on dlog x_k) on the Lambda^i basis."""
    i = len(vecs)
    out = {}
    for I in wedge_basis(n, i):
        # determinant of the i x i minor with columns I
        total = 0
        for perm in _permutations_with_sign(i):
            sgn, order = perm
            term = sgn
            for row, col in enumerate(order):
                term *= vecs[row][I[col]]
            total += term
        out[I] = total % p
    return [out[I] for I in wedge_basis(n, i)]


def _permutations_with_sign(k):
    from itertools import permutations

    for perm in permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        yield (-1) ** inv, perm


@dataclass(frozen=True)
class LogFormElem:
    """chi^degree * sum_I parts[I] dlog x_I, all |I| equal, coefficients in F_p."""

    degree: tuple
    parts: tuple  # sorted ((I, c), ...), c != 0
    p: int

    @classmethod
    def build(cls, degree, parts, p):
        clean = tuple(sorted((tuple(I), c % p) for I, c in dict(parts).items() if c % p))
        if len({len(I) for I, _ in clean}) > 1:
            raise InputError("log form mixes wedge degrees")
        return cls(tuple(degree), clean, p)

    def vector(self, i):
        """Coefficients on the Lambda^i basis wedge_basis(n, i)."""
        d = dict(self.parts)
        return [d.get(I, 0) for I in wedge_basis(len(self.degree), i)]


def phi_form(v, I, p, lift=None):
    """phi(chi^v dlog x_I) = chi^{pv} f(dlog x_{i1}) ∧ ... ∧ f(dlog x_ik)."""
    n = len(v)
    vecs = [log_form_f(j, n, p, lift) for j in I]
    coeffs = _wedge(vecs, n, p) if I else [1]
    return LogFormElem.build(tuple(p * x for x in v), zip(wedge_basis(n, len(I)), coeffs), p)


def cartier_operator(form, i):
    """C on a degree-w cocycle of the torus log complex, w = form.degree.

    Off pM the degree-w complex is exact, so the class is zero; this is
    checked (the cocycle must be a coboundary) and None returned. On pM the
    differential vanishes and C(chi^{pv} omega) = chi^v omega.
    """
    w, p = form.degree, form.p
    n = len(w)
    vec = form.vector(i)
    if i < n and any(_apply(koszul_matrix(w, i, p), vec, p)):
        raise VerificationError("not a cocycle")
    if any(x % p for x in w):
        if i == 0:
            if any(vec):
                raise VerificationError("nonzero cocycle in degree 0 off pM")
            return None
        cols = [list(c) for c in zip(*koszul_matrix(w, i - 1, p))]
        if rank_mod_p(cols + [vec], p) != rank_mod_p(cols, p):
            raise VerificationError(f"cocycle in degree {w} is not a coboundary")
        return None
    return LogFormElem.build(tuple(x // p for x in w), form.parts, p)


@dataclass
class ChartReport:
    ok: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


def _check_c_phi(v, p, bad, lift=None):
    n = len(v)
    for i in range(n + 1):
        for I in wedge_basis(n, i):
            back = cartier_operator(phi_form(v, I, p, lift), i)
            if back != LogFormElem.build(v, {I: 1}, p):
                bad.append({"form": [list(v), list(I)], "reason": "C∘phi != Id"})


def cartier_quasi_iso_check(n, p, radius=None):
    """Torus-chart check of the Cartier quasi-isomorphism and C∘phi = Id.

    (a) on the box [-radius, radius]^n the degree-u cohomology is nonzero
    exactly for u in pM, with dims C(n, i), and d∘d = 0 in every degree;
    (b) for every v with pv in the box and every I, phi(chi^v dlog x_I) is
    a cocycle and C maps it back to chi^v dlog x_I.
    """
    if n > 4:
        raise UnsupportedError("n <= 4 only")
    radius = p if radius is None else radius
    if radius < p:
        raise InputError("box side must be at least 2p+1")
    expected = binomials(n)
    zero = (0,) * (n + 1)
    bad, nonzero_degrees, pm_points = [], 0, 0
    for u in product(range(-radius, radius + 1), repeat=n):
        dims = graded_log_complex(u, p)
        in_pm = all(x % p == 0 for x in u)
        pm_points += in_pm
        nonzero_degrees += dims != zero
        for i in range(n - 1):
            if any(any(row) for row in _matmul_mod(koszul_matrix(u, i + 1, p), koszul_matrix(u, i, p), p)):
                bad.append({"degree": list(u), "reason": "d∘d != 0"})
        if dims != (expected if in_pm else zero):
            bad.append({"degree": list(u), "dims": list(dims)})
    k = radius // p
    for v in product(range(-k, k + 1), repeat=n):
        _check_c_phi(v, p, bad)
    ok = not bad and nonzero_degrees == pm_points
    return ChartReport(ok, bad, {"nonzero_degrees": nonzero_degrees, "pM_points": pm_points})


def binomials(n):
    return tuple(comb(n, i) for i in range(n + 1))


def _matmul_mod(a, b, p):
    if not a or not b:
        return []
    return [[sum(x * y for x, y in zip(row, col)) % p for col in zip(*b)] for row in a]


def hara_complex(p, r, xdeg=0):
    """(h^0, h^1) of sum_{i<p} O t^{i-r} -> sum_{i<p} O (dt/t) t^{i-r} in one X'-degree.

    In X'-degree s the basis is t^{i - r + ps}, i = 0..p-1, and d multiplies
    t^e by e, so d is the diagonal matrix diag(e mod p).
    """
    if not 0 <= r < p:
        raise InputError(f"twist r={r} outside [0, {p})")
    exps = [i - r + p * xdeg for i in range(p)]
    mat = [[(e if a == b else 0) % p for b, _ in enumerate(exps)] for a, e in enumerate(exps)]
    rk = rank_mod_p(mat, p)
    return (p - rk, p - rk)


def _twisted_block_dims(s, g, p):
    """Cohomology of F_*(Omega^•(log D)(G)) in X'-degree s: sum over the p^n exponents."""
    n = len(g)
    total = [0] * (n + 1)
    for i in product(range(p), repeat=n):
        e = tuple(a - b + p * c for a, b, c in zip(i, g, s))
        for k, x in enumerate(graded_log_complex(e, p)):
            total[k] += x
    return tuple(total)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def twisted_quasi_iso_check(p, h_coeffs, radius=1):
    """Hara-twisted comparison on the chart A^n with D the coordinate divisors.

    G = p*ceil(H) - ceil(p*H) must have coefficients in [0, p). For every
    X'-degree s in [0, radius]^n the twisted and untwisted complexes
    have equal cohomology, matching the Kunneth product of the
    one-dimensional Hara complexes; phi_G(chi^s dlog x_I) is a cocycle and
    C_G maps it back to chi^s dlog x_I.
    """
    h = [Fraction(x) for x in h_coeffs]
    n = len(h)
    if not 1 <= n <= 2:
        raise UnsupportedError("twisted checks implemented for n <= 2")
    g = [p * ceil(x) - ceil(p * x) for x in h]
    if any(not 0 <= x < p for x in g):
        raise VerificationError(f"rounding twist {g} outside [0, {p})")
    kunneth = [1]
    for x in g:
        kunneth = _poly_mul(kunneth, list(hara_complex(p, x)))
    bad = []
    for s in product(range(radius + 1), repeat=n):
        tw = _twisted_block_dims(s, g, p)
        un = _twisted_block_dims(s, [0] * n, p)
        if tw != un or list(tw) != kunneth:
            bad.append({"xdeg": list(s), "twisted": list(tw), "untwisted": list(un)})
        for i in range(n + 1):
            for I in wedge_basis(n, i):
                form = phi_form(s, I, p)
                # phi_G lands on x^{ps}, block index ps - (ps - g) = g in each coordinate
                block = [e - (p * c - x) for e, c, x in zip(form.degree, s, g)]
                if not all(0 <= b < p for b in block):
                    bad.append({"form": [list(s), list(I)], "reason": "phi_G leaves the twisted block"})
                    continue
                if cartier_operator(form, i) != LogFormElem.build(s, {I: 1}, p):
                    bad.append({"form": [list(s), list(I)], "reason": "C_G∘phi_G != Id"})
    return ChartReport(not bad, bad, {"G": g, "kunneth": kunneth})
