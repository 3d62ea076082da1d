"""Arithmetic in (Z/qZ)^x for a prime q: primitive roots and discrete logs."""
from functools import cached_property, lru_cache
from math import isqrt

import numpy as np

from . import kernels
from .errors import ModulusError, UnitRequiredError

__all__ = [
    "PrimeContext",
    "get_context",
    "is_prime",
    "primes_between",
    "prime_factors",
    "divisors",
    "find_primitive_root",
    "dlog",
    "mod_inv",
]


def is_prime(n):
    """Deterministic trial division."""
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def primes_between(lo, hi):
    """Primes p with lo <= p <= hi (sieve)."""
    lo, hi = int(lo), int(hi)
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.flatnonzero(sieve) if p >= lo]


def prime_factors(n):
    """Distinct prime factors of n, ascending."""
    n = int(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n):
    n = int(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _check_modulus(q):
    if isinstance(q, bool) or int(q) != q:
        raise ModulusError(f"modulus must be an integer, got {q!r}")
    q = int(q)
    if q < 3 or not is_prime(q):
        raise ModulusError(f"modulus must be a prime >= 3, got {q}")
    return q


def find_primitive_root(q):
    """Smallest generator of (Z/qZ)^x."""
    q = _check_modulus(q)
    cofactors = [(q - 1) // p for p in prime_factors(q - 1)]
    for g in range(2, q):
        if all(pow(g, e, q) != 1 for e in cofactors):
            return g
    raise AssertionError("no primitive root found")


class PrimeContext:
    """A prime modulus together with its smallest primitive root ``g`` and
    dense tables ``power[e] = g**e mod q`` and ``dlog[a] = e``.

    ``dlog[0]`` holds -1 as a sentinel for the non-unit residue. Instances
    are treated as immutable; derived tables are computed lazily and cached.
    """

    def __init__(self, q):
        self.q = _check_modulus(q)
        self.phi = self.q - 1
        self.g = find_primitive_root(self.q)
        power = kernels.power_table(self.g, self.q)
        table = np.full(self.q, -1, dtype=np.int64)
        table[power] = np.arange(self.phi, dtype=np.int64)
        power.flags.writeable = False
        table.flags.writeable = False
        self.power = power
        self.dlog_table = table

    def __repr__(self):
        return f"PrimeContext(q={self.q}, g={self.g})"

    def __reduce__(self):
        return (get_context, (self.q,))

    def dlog(self, a):
        a = int(a) % self.q
        if a == 0:
            raise UnitRequiredError(f"{a} is not a unit modulo {self.q}")
        return int(self.dlog_table[a])

    def mod_inv(self, a):
        a = int(a) % self.q
        if a == 0:
            raise UnitRequiredError(f"{a} is not a unit modulo {self.q}")
        return pow(a, -1, self.q)

    def dlog_array(self, n):
        """Discrete logs of an integer array; -1 where q divides n."""
        return self.dlog_table[np.asarray(n, dtype=np.int64) % self.q]

    @cached_property
    def roots(self):
        """``e(t / phi)`` for t = 0..phi-1."""
        r = kernels.roots_of_unity(self.phi)
        r.flags.writeable = False
        return r

    @cached_property
    def gauss_sums(self):
        """tau(chi_k) = sum_a chi_k(a) e(a/q) for every k, via one FFT over
        the exponent of the primitive root."""
        additive = kernels.roots_of_unity(self.q)[self.power]
        tau = np.fft.ifft(additive) * self.phi
        tau.flags.writeable = False
        return tau


@lru_cache(maxsize=64)
def get_context(q):
    """Cached :class:`PrimeContext` constructor."""
    return PrimeContext(q)


def dlog(ctx, a):
    return ctx.dlog(a)


def mod_inv(ctx, a):
    return ctx.mod_inv(a)
