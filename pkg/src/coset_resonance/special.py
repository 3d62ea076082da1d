"""Smoothing kernel of the approximate functional equation.

For parity kappa in {0, 1}::

    V_kappa(y) = 2 / Gamma((1/2 + kappa)/2) * int_y^inf t**(kappa - 1/2) exp(-t**2) dt
               = Gamma(s, y**2) / Gamma(s),          s = (1/2 + kappa)/2

The second line is the default evaluation route; the first is kept as an
independent quadrature oracle.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from . import kernels
from .errors import DomainError

__all__ = [
    "SUPPORTED_S",
    "upper_incomplete_gamma",
    "SmoothingKernel",
    "v_kappa",
    "v_kappa_quadrature",
    "kernel_weights",
    "zeta_half",
    "zeta_half_alternating",
]

SUPPORTED_S = (0.25, 0.75)
_GAMMA = {s: math.gamma(s) for s in SUPPORTED_S}


def _check_s(s):
    for t in SUPPORTED_S:
        if s == t:
            return t
    raise DomainError(f"upper_incomplete_gamma is certified for s in {SUPPORTED_S}, got {s}")


def upper_incomplete_gamma(s, x):
    """Gamma(s, x) for s in {1/4, 3/4}; accepts a scalar or an array."""
    s = _check_s(s)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("upper_incomplete_gamma needs x >= 0")
    out = kernels.upper_gamma(s, np.ascontiguousarray(arr.ravel()), _GAMMA[s])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def _kappa(kappa):
    if kappa not in (0, 1):
        raise DomainError(f"parity must be 0 or 1, got {kappa}")
    return int(kappa)


@lru_cache(maxsize=1)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def _panel(f, a, b, nodes):
    x, w = _gauss_legendre(nodes)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * x)))


def _adaptive(f, a, b, tol, nodes, depth=0):
    whole = _panel(f, a, b, nodes)
    m = 0.5 * (a + b)
    left, right = _panel(f, a, m, nodes), _panel(f, m, b, nodes)
    if abs(left + right - whole) <= tol or depth >= 30:
        return left + right
    return (_adaptive(f, a, m, 0.5 * tol, nodes, depth + 1)
            + _adaptive(f, m, b, 0.5 * tol, nodes, depth + 1))


@dataclass(frozen=True)
class SmoothingKernel:
    """V_kappa together with the quadrature settings of its oracle route.

    ``truncation`` is the integrand level below which the tail of the
    quadrature is dropped.
    """

    kappa: int
    nodes: int = 64
    truncation: float = 1e-18
    atol: float = 1e-15

    def __post_init__(self):
        _kappa(self.kappa)

    @property
    def s(self):
        return 0.25 + 0.5 * self.kappa

    def __call__(self, y):
        return v_kappa(self, y)

    def quadrature(self, y):
        return v_kappa_quadrature(self, y)


def v_kappa(kernel, y):
    """V_kappa(y) via the regularized upper incomplete gamma Gamma(s, y^2)/Gamma(s)."""
    if not isinstance(kernel, SmoothingKernel):
        kernel = SmoothingKernel(_kappa(kernel))
    arr = np.asarray(y, dtype=np.float64)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("V_kappa(y) needs y >= 0")
    s = kernel.s
    return upper_incomplete_gamma(s, arr * arr) / _GAMMA[s]


def v_kappa_quadrature(kernel, y):
    """V_kappa(y) by adaptive Gauss-Legendre on the defining integral.

    The substitution t = u**2 turns the integrand into 2 u**(2 kappa) exp(-u**4),
    which is smooth at the origin.
    """
    if not isinstance(kernel, SmoothingKernel):
        kernel = SmoothingKernel(_kappa(kernel))
    y = float(y)
    if y < 0 or math.isnan(y):
        raise DomainError("V_kappa(y) needs y >= 0")
    kappa = kernel.kappa

    def f(u):
        return 2.0 * u ** (2 * kappa) * np.exp(-u ** 4)

    lo = math.sqrt(y)
    hi = max(lo, (-math.log(kernel.truncation)) ** 0.25)
    while f(np.array([hi]))[0] > kernel.truncation:
        hi += 0.5
    total = 0.0
    edges = np.arange(lo, hi, 0.5).tolist() + [hi]
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            total += _adaptive(f, a, b, kernel.atol, kernel.nodes)
    return 2.0 * total / math.gamma(kernel.s)


@lru_cache(maxsize=256)
def kernel_weights(kappa, step, length):
    """Read-only array ``V_kappa(n * step) / sqrt(n)`` for n = 1..length.

    Memoized on the exact argument grid, which the AFE reuses for every
    character of a given parity.
    """
    n = np.arange(1, length + 1, dtype=np.float64)
    w = v_kappa(kappa, n * step) / np.sqrt(n)
    w.flags.writeable = False
    return w


# ---------------------------------------------------------------------------
# zeta(1/2), needed for the principal character


@lru_cache(maxsize=None)
def _bernoulli(m):
    """B_0..B_m as Fractions (B_1 = -1/2)."""
    B = [Fraction(0)] * (m + 1)
    for n in range(m + 1):
        acc = Fraction(0)
        for k in range(n):
            acc += math.comb(n + 1, k) * B[k]
        B[n] = Fraction(1) if n == 0 else -acc / (n + 1)
    return tuple(B)


def zeta_half(terms=20, cutoff=20):
    """zeta(1/2) by Euler-Maclaurin with ``terms`` Bernoulli corrections."""
    s = 0.5
    B = _bernoulli(2 * terms)
    N = cutoff
    head = math.fsum(n ** -s for n in range(1, N))
    acc = [head, N ** (1 - s) / (s - 1), 0.5 * N ** -s]
    rising = s  # s (s+1) ... (s+2j-2)
    for j in range(1, terms + 1):
        if j > 1:
            rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
        acc.append(float(B[2 * j]) / math.factorial(2 * j) * rising * N ** (-s - 2 * j + 1))
    return math.fsum(acc)


def zeta_half_alternating(n=60):
    """zeta(1/2) = eta(1/2) / (1 - sqrt 2), with eta summed by the
    Cohen-Rodriguez Villegas-Zagier acceleration."""
    d = (3 + math.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b, c, acc = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        acc += c / math.sqrt(k + 1)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1))
    eta = acc / d
    return eta / (1 - math.sqrt(2.0))
