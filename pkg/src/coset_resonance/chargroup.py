"""The character group mod a prime q, its subgroups, cosets and kernels.

Characters are indexed by ``k`` in ``[0, q-2]`` relative to the smallest
primitive root ``g``: ``chi_k(g**a) = e(k*a/(q-1))``. Because the unit group
is cyclic, every subgroup is ``{chi_k : d | k}`` for a divisor ``d`` of q-1,
and ``d`` is both its index and the size of its kernel.

Exact statements are checked with integer angles ``k*dlog(a) mod (q-1)``;
floating point only enters through the final lookup ``e(t/(q-1))``.
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import kernels
from .errors import ConfigurationError, UnitRequiredError
from .modarith import PrimeContext, get_context

__all__ = [
    "Character",
    "Subgroup",
    "Coset",
    "KernelSet",
    "ExactRootSum",
    "char_eval",
    "kernel",
    "coset_char_sum",
    "coset_char_sum_exact",
    "principal_orthogonality_closed_form",
    "gauss_sum",
    "gauss_sums_direct",
    "coset_twisted_gauss_sum",
    "coset_twisted_gauss_sum_proof_route",
]

EVEN, ODD, MIXED = "all-even", "all-odd", "mixed"


def _ctx(ctx_or_q):
    return ctx_or_q if isinstance(ctx_or_q, PrimeContext) else get_context(ctx_or_q)


def _unit(ctx, a):
    a = int(a)
    if a % ctx.q == 0:
        raise UnitRequiredError(f"{a} is not a unit modulo {ctx.q}")
    return a


@dataclass(frozen=True)
class Character:
    ctx: PrimeContext
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", int(self.k) % self.ctx.phi)

    @property
    def parity(self):
        """0 for even, 1 for odd; chi_k(-1) = e(k/2)."""
        return self.k % 2

    @property
    def is_principal(self):
        return self.k == 0

    @property
    def is_primitive(self):
        return self.k != 0

    def conj(self):
        return Character(self.ctx, -self.k)

    def __mul__(self, other):
        return Character(self.ctx, self.k + other.k)

    def angle(self, n):
        """Integer t with chi(n) = e(t/(q-1)), or None when q | n."""
        if int(n) % self.ctx.q == 0:
            return None
        return (self.k * self.ctx.dlog(n)) % self.ctx.phi

    def __call__(self, n):
        return char_eval(self, n)

    def values(self, n):
        """Vectorized evaluation on an integer array."""
        ell = self.ctx.dlog_array(n)
        out = self.ctx.roots[(self.k * ell) % self.ctx.phi]
        return np.where(ell >= 0, out, 0.0)

    def __repr__(self):
        return f"Character(q={self.ctx.q}, k={self.k})"


def char_eval(chi, n):
    t = chi.angle(n)
    if t is None:
        return 0j
    return complex(chi.ctx.roots[t])


@dataclass(frozen=True)
class KernelSet:
    """Units fixed by every character of a subgroup."""

    ctx: PrimeContext
    residues: tuple

    @property
    def size(self):
        return len(self.residues)

    def __contains__(self, a):
        return int(a) % self.ctx.q in self.residues

    @property
    def extended(self):
        """ker H union -ker H, sorted."""
        q = self.ctx.q
        return tuple(sorted(set(self.residues) | {q - h for h in self.residues}))


@dataclass(frozen=True)
class Subgroup:
    """H = {chi_k : k = 0 mod d}, for a divisor d of q-1."""

    ctx: PrimeContext
    d: int

    def __post_init__(self):
        d = int(self.d)
        if d < 1 or self.ctx.phi % d:
            raise ConfigurationError(f"index {d} does not divide q-1 = {self.ctx.phi}")
        object.__setattr__(self, "d", d)

    @classmethod
    def of_index(cls, q, d):
        return cls(_ctx(q), d)

    @property
    def order(self):
        return self.ctx.phi // self.d

    @property
    def index(self):
        return self.d

    @property
    def indices(self):
        return np.arange(0, self.ctx.phi, self.d, dtype=np.int64)

    def members(self):
        return [Character(self.ctx, int(k)) for k in self.indices]

    def kernel(self):
        return kernel(self)

    def coset(self, c):
        return Coset(self, c)

    def cosets(self):
        return [Coset(self, c) for c in range(self.d)]


@dataclass(frozen=True)
class Coset:
    """chi_c H = {chi_k : k = c mod d}."""

    subgroup: Subgroup
    c: int

    def __post_init__(self):
        object.__setattr__(self, "c", int(self.c) % self.subgroup.d)

    @property
    def ctx(self):
        return self.subgroup.ctx

    @property
    def d(self):
        return self.subgroup.d

    @property
    def size(self):
        return self.subgroup.order

    @property
    def representative(self):
        return Character(self.ctx, self.c)

    @property
    def is_subgroup(self):
        return self.c == 0

    @property
    def contains_principal(self):
        return self.c == 0

    @property
    def indices(self):
        return np.arange(self.c, self.ctx.phi, self.d, dtype=np.int64)

    def members(self):
        return [Character(self.ctx, int(k)) for k in self.indices]

    @property
    def parity_profile(self):
        if self.d % 2:
            return MIXED
        return ODD if self.c % 2 else EVEN

    def parity_split(self):
        """[(kappa, sub-coset of characters with that parity)].

        For odd d the coset splits into cosets of H intersected with the even
        characters (index 2d); for even d it is already of one parity.
        """
        if self.d % 2 == 0:
            return [(self.c % 2, self)]
        sub = Subgroup(self.ctx, 2 * self.d)
        out = []
        for kappa in (0, 1):
            # the unique residue mod 2d that is c mod d and kappa mod 2
            c2 = self.c if self.c % 2 == kappa else self.c + self.d
            out.append((kappa, Coset(sub, c2)))
        return out


def kernel(H):
    """ker H as the set {g**(a*(q-1)/d)}; size d."""
    ctx = H.ctx
    step = ctx.phi // H.d
    res = ctx.power[np.arange(H.d, dtype=np.int64) * step]
    return KernelSet(ctx, tuple(sorted(int(h) for h in res)))


def coset_char_sum(C, a):
    """sum_{chi in C} chi(a) by direct floating-point summation."""
    a = _unit(C.ctx, a)
    ell = np.array([C.ctx.dlog(a)], dtype=np.int64)
    ones = np.ones(1, dtype=np.complex128)
    return complex(kernels.linear_forms(C.indices, ell, ones, C.ctx.roots).sum())


@dataclass(frozen=True)
class ExactRootSum:
    """``count * e(angle)`` with an exact rational angle; count 0 means the
    sum vanishes identically."""

    count: int
    angle: Fraction

    def __complex__(self):
        if self.count == 0:
            return 0j
        return self.count * complex(np.exp(2j * np.pi * float(self.angle)))


def _exact_root_sum(angles, phi):
    """Exact value of sum_t e(t/phi) over an integer multiset of angles.

    Handles the two shapes that arise from character sums over cosets: all
    angles equal, or the angles cover a coset of a nontrivial subgroup of
    Z/phi uniformly (which sums to zero).
    """
    hist = Counter(int(t) % phi for t in angles)
    if len(hist) == 1:
        (t, n), = hist.items()
        return ExactRootSum(n, Fraction(t, phi))
    base = min(hist)
    step = phi
    for t in hist:
        step = gcd(step, t - base)
    period = phi // step
    expected = {(base + j * step) % phi for j in range(period)}
    if set(hist) == expected and len(set(hist.values())) == 1:
        return ExactRootSum(0, Fraction(0))
    raise ArithmeticError("angle multiset is not a uniform coset; no exact closed form")


def coset_char_sum_exact(C, a):
    """Same sum as :func:`coset_char_sum`, decided exactly from the integer
    angles k*dlog(a) mod (q-1)."""
    a = _unit(C.ctx, a)
    ell = C.ctx.dlog(a)
    return _exact_root_sum(C.indices * ell, C.ctx.phi)


def principal_orthogonality_closed_form(C, a):
    """chi_1(a) * #H when a lies in ker H, else 0 (exact)."""
    a = _unit(C.ctx, a)
    if a % C.ctx.q not in kernel(C.subgroup):
        return ExactRootSum(0, Fraction(0))
    t = C.representative.angle(a)
    return ExactRootSum(C.size, Fraction(t, C.ctx.phi))


def gauss_sums_direct(ctx, ks):
    """tau(chi_k) for each k in ks by direct summation over residues."""
    a = np.arange(1, ctx.q, dtype=np.int64)
    additive = kernels.roots_of_unity(ctx.q)[a]
    ks = np.asarray(ks, dtype=np.int64)
    return kernels.linear_forms(ks, ctx.dlog_table[a], additive, ctx.roots)


def gauss_sum(chi):
    """tau(chi) = sum_{a mod q} chi(a) e(a/q), by direct summation."""
    return complex(gauss_sums_direct(chi.ctx, [chi.k])[0])


def coset_twisted_gauss_sum(C, a):
    """sum_{chi in C} tau(chi) chi(a), summing over the coset directly."""
    a = _unit(C.ctx, a)
    ctx = C.ctx
    taus = gauss_sums_direct(ctx, C.indices)
    vals = ctx.roots[(C.indices * ctx.dlog(a)) % ctx.phi]
    return complex(np.sum(taus * vals))


def coset_twisted_gauss_sum_proof_route(C, a):
    """chi_1(a) #H sum_{h in ker H} chi_1(n) e(n/q) with n = h * a^{-1} mod q."""
    a = _unit(C.ctx, a)
    ctx = C.ctx
    chi1 = C.representative
    a_inv = ctx.mod_inv(a)
    acc = 0j
    for h in kernel(C.subgroup).residues:
        n = (h * a_inv) % ctx.q
        acc += chi1(n) * np.exp(2j * np.pi * n / ctx.q)
    return complex(chi1(a) * C.size * acc)
