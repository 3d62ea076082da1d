"""Resonator coefficients r(n), their Rayleigh quotient, and R(chi).

The quotient maximized by a resonator is

    Q(r) = Re sum_{m k <= N} r(m) conj(r(m k)) / sqrt(k)  /  sum_{n <= N} |r(n)|^2

i.e. the top eigenvalue of the symmetric N x N matrix with ones on the
diagonal and 1/(2 sqrt(k)) at positions (m, mk) and (mk, m).
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from . import kernels
from .errors import ConfigurationError, DegenerateInputError
from .modarith import primes_between

__all__ = [
    "Resonator",
    "ResonatorSpec",
    "build_resonator",
    "rayleigh_ratio",
    "pair_matrix",
    "power_iteration",
    "optimize_bruteforce",
    "resonate",
    "resonate_coset",
    "resonate_all",
    "BRUTEFORCE_MAX_N",
]

BRUTEFORCE_MAX_N = 256


@dataclass(frozen=True)
class Resonator:
    """Sparse coefficients ``values[i] = r(support[i])`` with support in [1, N]."""

    N: int
    support: np.ndarray
    values: np.ndarray
    degenerate: bool = False
    label: str = "custom"

    def __post_init__(self):
        sup = np.asarray(self.support, dtype=np.int64)
        val = np.asarray(self.values)
        if sup.shape != val.shape:
            raise ConfigurationError("support and values differ in length")
        if sup.size and (sup.min() < 1 or sup.max() > self.N):
            raise ConfigurationError(f"resonator support must lie in [1, {self.N}]")
        order = np.argsort(sup, kind="stable")
        object.__setattr__(self, "support", sup[order])
        object.__setattr__(self, "values", val[order])

    @classmethod
    def delta(cls, N=1, label="delta"):
        return cls(max(int(N), 1), np.array([1]), np.array([1.0]), label=label)

    @classmethod
    def from_dense(cls, dense, label="custom"):
        """From an array indexed by n = 1..N (``dense[0]`` is r(1))."""
        dense = np.asarray(dense)
        nz = np.flatnonzero(dense)
        return cls(dense.size, nz + 1, dense[nz], label=label)

    @property
    def norm_sq(self):
        return float(np.sum(np.abs(self.values) ** 2))

    @property
    def is_real(self):
        return not np.iscomplexobj(self.values) or not np.any(np.imag(self.values))

    def dense(self):
        """Array of length N+1 with r(n) at index n (index 0 unused)."""
        out = np.zeros(self.N + 1, dtype=np.complex128)
        out[self.support] = self.values
        return out

    def as_dict(self):
        return {int(n): v.item() for n, v in zip(self.support, self.values)}


@dataclass(frozen=True)
class ResonatorSpec:
    """Scale parameters for the standard resonator.

    ``L_param = sqrt(log N log log N)``; primes p with L_param**2 < p <= P2
    carry weight r(p) = L_param / (sqrt(p) log p), with the default
    ``P2 = exp((log L_param)**2)``.
    """

    N: int
    prime_window: tuple = None
    L_param: float = field(init=False)

    def __post_init__(self):
        N = int(self.N)
        if N < 1:
            raise ConfigurationError("resonator support bound N must be >= 1")
        object.__setattr__(self, "N", N)
        L = math.sqrt(math.log(N) * math.log(math.log(N))) if N > math.e else 0.0
        object.__setattr__(self, "L_param", L)
        if self.prime_window is None:
            window = (L * L, math.exp(math.log(L) ** 2)) if L > 1 else (1.0, 1.0)
            object.__setattr__(self, "prime_window", window)
        else:
            p1, p2 = map(float, self.prime_window)
            if p1 < L * L:
                raise ConfigurationError(f"window start {p1} must be at least L^2 = {L * L:.6g}")
            object.__setattr__(self, "prime_window", (p1, p2))

    def primes(self):
        p1, p2 = self.prime_window
        hi = min(int(math.floor(p2)), self.N)
        return [p for p in primes_between(2, hi) if p > p1]


def build_resonator(spec):
    """Multiplicative r supported on squarefree n <= N built from window primes.

    Falls back to r = delta_1 (flagged ``degenerate``) when the window holds
    no primes, which is the case for every N below roughly 10**8.
    """
    if not isinstance(spec, ResonatorSpec):
        spec = ResonatorSpec(spec)
    N, L = spec.N, spec.L_param
    primes = spec.primes()
    if not primes:
        if N > 1:
            warnings.warn(f"prime window {spec.prime_window} is empty for N={N}; using r = delta_1",
                          RuntimeWarning, stacklevel=2)
        return Resonator(N, np.array([1]), np.array([1.0]), degenerate=True, label="standard")

    weight = {p: L / (math.sqrt(p) * math.log(p)) for p in primes}
    support, values = [1], [1.0]
    stack = [(1, 1.0, 0)]
    while stack:
        n, r, start = stack.pop()
        for i in range(start, len(primes)):
            p = primes[i]
            if n * p > N:
                break
            support.append(n * p)
            values.append(r * weight[p])
            stack.append((n * p, r * weight[p], i + 1))
    return Resonator(N, np.array(support), np.array(values), label="standard")


def rayleigh_ratio(r):
    """Q(r) as defined in the module docstring."""
    norm = r.norm_sq
    if not norm > 0:
        raise DegenerateInputError("resonator has zero norm")
    if r.N > 4_000_000:
        return _rayleigh_sparse(r) / norm
    rd = r.dense()
    N = r.N
    acc = 0.0
    for k in range(1, N + 1):
        m_max = N // k
        acc += np.real(np.dot(rd[1:m_max + 1], np.conj(rd[k:k * m_max + 1:k]))) / math.sqrt(k)
    return float(acc / norm)


def _rayleigh_sparse(r):
    sup, val = r.support, r.values
    acc = 0.0
    for i, m in enumerate(sup):
        j = np.flatnonzero(sup % m == 0)
        k = sup[j] // m
        acc += np.real(np.sum(val[i] * np.conj(val[j]) / np.sqrt(k)))
    return float(acc)


def pair_matrix(N):
    """Dense symmetric matrix of the quadratic form Q (rows/cols n = 1..N)."""
    A = np.zeros((N, N))
    for m in range(1, N + 1):
        A[m - 1, m - 1] = 1.0
        for k in range(2, N // m + 1):
            A[m - 1, m * k - 1] = A[m * k - 1, m - 1] = 0.5 / math.sqrt(k)
    return A


def power_iteration(A, tol=1e-10, max_iter=100_000):
    """Top eigenpair of a symmetric nonnegative matrix, from the all-ones start.

    Stops once successive Rayleigh quotients differ by less than ``tol``.
    """
    x = np.ones(A.shape[0])
    x /= np.linalg.norm(x)
    lam = float(x @ A @ x)
    for _ in range(max_iter):
        y = A @ x
        x = y / np.linalg.norm(y)
        new = float(x @ A @ x)
        if abs(new - lam) < tol:
            return new, x
        lam = new
    raise RuntimeError(f"power iteration did not converge in {max_iter} steps")


def optimize_bruteforce(N, tol=1e-10):
    """Maximum of Q over all r supported on [1, N], with a maximizer."""
    N = int(N)
    if N < 1 or N > BRUTEFORCE_MAX_N:
        raise ConfigurationError(f"brute-force optimizer needs 1 <= N <= {BRUTEFORCE_MAX_N}, got {N}")
    value, vec = power_iteration(pair_matrix(N), tol=tol)
    vec = np.abs(vec)  # Perron vector; fixes the sign
    return value, Resonator(N, np.arange(1, N + 1), vec / vec[0], label="optimal")


def _check_modulus(r, q):
    if r.N >= q:
        raise ConfigurationError(f"resonator length N={r.N} must be below q={q}")


def resonate(r, chi):
    """R(chi) = sum_{n <= N} r(n) chi(n)."""
    _check_modulus(r, chi.ctx.q)
    return complex(np.sum(r.values * chi.values(r.support)))


def resonate_coset(r, C):
    """R(chi) for every chi in a coset, by direct summation over the support."""
    ctx = C.ctx
    _check_modulus(r, ctx.q)
    ells = ctx.dlog_table[r.support]
    return kernels.linear_forms(C.indices, ells, r.values.astype(np.complex128), ctx.roots)


def resonate_all(r, ctx):
    """R(chi_k) for all k by FFT over discrete logs."""
    _check_modulus(r, ctx.q)
    ells = ctx.dlog_table[r.support]
    binned = np.zeros(ctx.phi, dtype=np.complex128)
    np.add.at(binned, ells, r.values)
    return np.fft.ifft(binned) * ctx.phi
