"""Torus-invariant Q-divisors on a fan.

A divisor is one rational coefficient per ray, D = sum_rho a_rho D_rho.
"""
import re
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm
from typing import NamedTuple

from .errors import InputError, NotCartierError, NotQCartierError
from .fan import Fan, is_complete, is_simplicial
from .lattice import RationalPolyhedron, count_lattice_points, lattice_points, pairing
from .linalg import solve_q

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


@dataclass(frozen=True)
class TQDivisor:
    fan: Fan
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.fan.n_rays:
            raise InputError(f"expected {self.fan.n_rays} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def _check(self, other):
        if other.fan != self.fan:
            raise InputError("divisors live on different fans")

    def __add__(self, other):
        self._check(other)
        return TQDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return TQDivisor(self.fan, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TQDivisor(self.fan, tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        return TQDivisor(self.fan, tuple(Fraction(k) * a for a in self.coeffs))

    __rmul__ = __mul__

    def int_coeffs(self):
        if not self.is_integral():
            raise InputError("divisor is not integral")
        return tuple(int(c) for c in self.coeffs)

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if c != 0]

    def __repr__(self):
        return f"TQDivisor({self.fan.name or 'fan'}, [{', '.join(map(str, self.coeffs))}])"


def divisor(fan, coeffs):
    return TQDivisor(fan, tuple(coeffs))


def round_down(d):
    return TQDivisor(d.fan, tuple(Fraction(floor(c)) for c in d.coeffs))


def round_up(d):
    return TQDivisor(d.fan, tuple(Fraction(-floor(-c)) for c in d.coeffs))


def frac(d):
    return TQDivisor(d.fan, tuple(c - floor(c) for c in d.coeffs))


def rounding_twist(h, p):
    """G = p*ceil(H) - ceil(p*H); coefficients always lie in [0, p)."""
    return frobenius_multiple(round_up(h), p) - round_up(frobenius_multiple(h, p))


@dataclass(frozen=True)
class CartierData:
    """u(sigma) in M per maximal cone with <u(sigma), v_rho> = -a_rho."""

    divisor: TQDivisor
    u: tuple

    def support_function(self, cone_index, v):
        return pairing(self.u[cone_index], v)


def rational_cartier_data(d):
    """Rational local data per maximal cone; raises NotQCartierError if some cone has none."""
    f = d.fan
    out = []
    for k, idx in enumerate(f.max_cones):
        sol = solve_q([list(f.rays[i]) for i in idx], [-d.coeffs[i] for i in idx])
        if sol is None:
            raise NotQCartierError(k)
        out.append(tuple(sol))
    return tuple(out)


def cartier_data(d):
    """Integral Cartier data for d, or NotCartierError naming the offending cone."""
    data = rational_cartier_data(d)
    for k, u in enumerate(data):
        if any(x.denominator != 1 for x in u):
            raise NotCartierError(k, u)
    return CartierData(d, tuple(tuple(int(x) for x in u) for u in data))


def is_cartier(d):
    try:
        cartier_data(d)
    except NotCartierError:
        return False
    return True


def cartier_index(d):
    """Smallest m > 0 with m*d Cartier (d must be Q-Cartier)."""
    m = 1
    for u in rational_cartier_data(d):
        for x in u:
            m = lcm(m, x.denominator)
    return m


def _wall_values(d):
    f = d.fan
    if not is_complete(f):
        raise InputError("ampleness is only decided on complete fans")
    data = rational_cartier_data(d)
    for k, idx in enumerate(f.max_cones):
        inside = set(idx)
        for rho in range(f.n_rays):
            if rho not in inside:
                yield k, rho, pairing(data[k], f.rays[rho]) + d.coeffs[rho]


def is_ample(d):
    """Strict convexity of the support function across every wall.

    Equivalent to <u_m(sigma), v_rho> > -m a_rho for the Cartier data of
    m*d, m the Cartier index; evaluated here with rational data.
    """
    return all(val > 0 for _, _, val in _wall_values(d))


def is_nef(d):
    return all(val >= 0 for _, _, val in _wall_values(d))


def canonical_divisor(f):
    return TQDivisor(f, tuple(Fraction(-1) for _ in f.rays))


def boundary_divisor(f):
    return TQDivisor(f, tuple(Fraction(1) for _ in f.rays))


def polytope_PD(d):
    return RationalPolyhedron(tuple((v, -a) for v, a in zip(d.fan.rays, d.coeffs)))


class GlobalSections(NamedTuple):
    count: int
    monomials: list


def h0_lattice(d):
    """Global sections of O(floor(d)) as the characters chi^u, u in P_D ∩ M."""
    pts = lattice_points(polytope_PD(round_down(d)))
    return GlobalSections(len(pts), pts)


def h0_count(d):
    return count_lattice_points(polytope_PD(round_down(d)))


def principal_divisor(f, u):
    """div(chi^u) = sum_rho <u, v_rho> D_rho."""
    return TQDivisor(f, tuple(Fraction(pairing(u, v)) for v in f.rays))


def linear_shift(d, u):
    return d + principal_divisor(d.fan, u)


def frobenius_multiple(d, p):
    return d * p


# JSON ----------------------------------------------------------------------

def divisor_to_json(d):
    return {"coeffs": [str(c) for c in d.coeffs]}


def divisor_from_json(fan, obj):
    try:
        raw = obj["coeffs"]
        if not isinstance(raw, list):
            raise TypeError("coeffs must be a list")
        coeffs = []
        for c in raw:
            s = str(c)
            if not _RATIONAL.match(s):
                raise ValueError(f"not an exact rational: {c!r}")
            coeffs.append(Fraction(s.replace(" ", "")))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed divisor JSON: {exc}") from exc
    return TQDivisor(fan, tuple(coeffs))


# sampling ------------------------------------------------------------------

def sample_divisor(f, rng, lo=-3, hi=3):
    return TQDivisor(f, tuple(Fraction(rng.randint(lo, hi)) for _ in f.rays))


@lru_cache(maxsize=None)
def ample_witness(f, max_steps=100_000):
    """Some integral ample divisor on a complete simplicial fan, or None.

    Wall values are linear in the coefficients, so ampleness is a system
    of strict homogeneous inequalities w.a > 0; the perceptron update
    a += w on a violated row reaches a solution whenever one exists.
    """
    if not is_simplicial(f):
        return None
    basis = [TQDivisor(f, tuple(Fraction(int(i == j)) for j in range(f.n_rays))) for i in range(f.n_rays)]
    cols = [[val for _, _, val in _wall_values(e)] for e in basis]
    rows = []
    for r in zip(*cols):
        den = lcm(*(x.denominator for x in r))
        rows.append([int(x * den) for x in r])
    a = [0] * f.n_rays
    for _ in range(max_steps):
        bad = next((w for w in rows if sum(x * y for x, y in zip(w, a)) <= 0), None)
        if bad is None:
            d = TQDivisor(f, tuple(Fraction(x) for x in a))
            return d if is_ample(d) else None
        a = [x + y for x, y in zip(a, bad)]
    return None


def sample_ample_integral(f, rng, lo=-1, hi=3, max_tries=200):
    """Integral divisor certified ample by the wall test.

    Rejection sampling in [lo, hi] first; when the ample cone is too thin
    for that, c * (ample witness) + noise in [lo, hi] with growing c.
    """
    for _ in range(max_tries):
        d = sample_divisor(f, rng, lo, hi)
        if is_ample(d):
            return d
    base = ample_witness(f)
    if base is None:
        raise InputError(f"no ample divisor found on {f.name or 'fan'}")
    for c in range(1, 1000):
        d = base * rng.randint(c, 2 * c) + sample_divisor(f, rng, lo, hi)
        if is_ample(d):
            return d
    return base


def sample_ample_q_divisor(f, rng, max_den=6, max_tries=10_000):
    """H = (A + delta) / den with A ample integral, delta a small integral
    perturbation on random rays and den <= max_den; re-certified ample."""
    for _ in range(max_tries):
        a = sample_ample_integral(f, rng, lo=0, hi=2, max_tries=50)
        den = rng.randint(1, max_den)
        delta = [rng.choice((-1, 0, 0, 1)) for _ in f.rays]
        h = TQDivisor(f, tuple(Fraction(int(c) + e, den) for c, e in zip(a.coeffs, delta)))
        if is_ample(h):
            return h
    raise InputError(f"no ample Q-divisor found on {f.name or 'fan'}")
