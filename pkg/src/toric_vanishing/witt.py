"""Witt vectors of length two over the prime field F_p."""
from dataclasses import dataclass
from math import comb

from .errors import InputError


def _check_prime(p):
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise InputError(f"{p} is not prime")


@dataclass(frozen=True)
class WittElem:
    """An element (a0, a1) of W_2(F_p).

    Components are reduced to [0, p) on construction, so equality is
    structural.
    """

    a0: int
    a1: int
    p: int

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "a0", self.a0 % self.p)
        object.__setattr__(self, "a1", self.a1 % self.p)

    @classmethod
    def zero(cls, p):
        return cls(0, 0, p)

    @classmethod
    def one(cls, p):
        return cls(1, 0, p)

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __neg__(self):
        p = self.p
        b0 = (-self.a0) % p
        # choose b1 so that the second component of the sum vanishes
        return WittElem(b0, _carry(self.a0, b0, p) - self.a1, p)

    def __sub__(self, other):
        return witt_add(self, -other)

    def is_zero(self):
        return self.a0 == 0 and self.a1 == 0

    def __repr__(self):
        return f"W{self.p}({self.a0}, {self.a1})"


def _same_prime(a, b):
    if a.p != b.p:
        raise InputError(f"Witt vectors over different primes: {a.p} and {b.p}")
    return a.p


def _carry(x0, y0, p):
    # exact over Z; divisible by p since p | C(p, i) for 0 < i < p
    total = sum(comb(p, i) * x0 ** i * y0 ** (p - i) for i in range(1, p))
    assert total % p == 0
    return total // p


def witt_add(a, b):
    p = _same_prime(a, b)
    return WittElem(a.a0 + b.a0, a.a1 + b.a1 - _carry(a.a0, b.a0, p), p)


def witt_mul(a, b):
    p = _same_prime(a, b)
    return WittElem(a.a0 * b.a0, a.a0 ** p * b.a1 + b.a0 ** p * a.a1, p)


def witt_frobenius(a):
    p = a.p
    return WittElem(pow(a.a0, p, p), pow(a.a1, p, p), p)


def pr1(a):
    """Reduction W_2(F_p) -> F_p."""
    return a.a0


def from_residue(x, p):
    """The map x -> (0, x) onto the kernel of pr1 (multiplication by p)."""
    return WittElem(0, x, p)


def teichmuller(a0, p):
    """Teichmuller representative of a0 in Z/p^2 (a0^p is already stable)."""
    return pow(a0, p, p * p)


def witt_to_int(a):
    """The ring isomorphism W_2(F_p) -> Z/p^2."""
    p = a.p
    return (teichmuller(a.a0, p) + p * a.a1) % (p * p)


def witt_from_int(x, p):
    """Inverse of witt_to_int."""
    x %= p * p
    a0 = x % p
    a1 = ((x - teichmuller(a0, p)) // p) % p
    return WittElem(a0, a1, p)


def witt_zp2_iso(a):
    return witt_to_int(a)


def all_elements(p):
    return [WittElem(a0, a1, p) for a0 in range(p) for a1 in range(p)]
