"""Central values L(chi, 1/2) from the approximate functional equation.

For a character chi mod q of parity kappa and a balance parameter X > 0::

    L*(chi) = sum_n chi(n)/sqrt(n) V_kappa(n sqrt(pi) / (X sqrt(q)))
            + eps(chi) sum_n conj(chi(n))/sqrt(n) V_kappa(n sqrt(pi) X / sqrt(q))

with eps(chi) = tau(chi) / (i**kappa sqrt(q)). For primitive chi this is
L(chi, 1/2) and does not depend on X; for the principal character it is a
different number, and :func:`l_principal_exact` supplies the true value.

Two evaluation paths are provided. :func:`l_star` sums one character
directly. :func:`l_star_sweep` evaluates every character at once: the sums
are linear forms in ``e(k * dlog(n) / (q-1))``, so binning the weights by
discrete log and taking one FFT gives all q-1 values.
"""
from dataclasses import dataclass
import math

import numpy as np

from .chargroup import Character
from .errors import DomainError, PrimitivityRequiredError
from .modarith import PrimeContext, get_context
from .special import kernel_weights, zeta_half

__all__ = [
    "AfeParams",
    "CentralValue",
    "l_star",
    "l_star_sweep",
    "l_value",
    "l_principal_exact",
    "epsilon_factor",
    "afe_consistency_residual",
    "completed_l",
]

TAIL_ACCEPT = 1e-8


@dataclass(frozen=True)
class AfeParams:
    """Balance ``X`` and truncation threshold ``cutoff`` for kernel arguments."""

    X: float = 1.0
    cutoff: float = 40.0

    def __post_init__(self):
        if not (self.X > 0 and math.isfinite(self.X)):
            raise DomainError(f"AFE balance X must be positive, got {self.X}")
        if not self.cutoff >= 30:
            raise DomainError(f"AFE cutoff must be >= 30, got {self.cutoff}")

    def steps(self, q):
        """Kernel argument per unit n for the principal and dual sums."""
        r = math.sqrt(math.pi / q)
        return r / self.X, r * self.X

    def lengths(self, q):
        """Last n kept in each sum (argument <= cutoff)."""
        a1, a2 = self.steps(q)
        return int(self.cutoff / a1), int(self.cutoff / a2)


@dataclass(frozen=True)
class CentralValue:
    value: complex
    tail_bound: float
    parity: int
    params: AfeParams
    k: int = 0


def _tail_bound(step, length, kappa, cutoff):
    # V(y) <= exp(-y^2)/Gamma(s) for y >= 1 and y^2 >= cutoff*y past the cut,
    # so the dropped terms form a dominated geometric series
    s = 0.25 + 0.5 * kappa
    first = step * (length + 1)
    ratio = math.exp(-cutoff * step)
    return math.exp(-cutoff * first) / ((1.0 - ratio) * math.gamma(s) * math.sqrt(length + 1))


def _ctx(x):
    return x if isinstance(x, PrimeContext) else get_context(x)


def _epsilon(ctx, k):
    kappa = k % 2
    return ctx.gauss_sums[k] / ((1j ** kappa) * math.sqrt(ctx.q))


def l_star(chi, params=None):
    """L*(chi, 1/2) for one character by direct summation in ascending n."""
    params = params or AfeParams()
    ctx = chi.ctx
    kappa = chi.parity
    a1, a2 = params.steps(ctx.q)
    m1, m2 = params.lengths(ctx.q)
    w1 = kernel_weights(kappa, a1, m1)
    w2 = kernel_weights(kappa, a2, m2)
    chi_n = chi.values(np.arange(1, max(m1, m2) + 1, dtype=np.int64))
    principal = np.sum(chi_n[:m1] * w1)
    dual = np.sum(np.conj(chi_n[:m2]) * w2)
    eps = _epsilon(ctx, chi.k)
    tail = _tail_bound(a1, m1, kappa, params.cutoff) + float(abs(eps)) * _tail_bound(a2, m2, kappa, params.cutoff)
    return CentralValue(complex(principal + eps * dual), tail, kappa, params, chi.k)


def _binned(ctx, weights):
    """Sum of weights[n-1] over n with dlog(n) = l, for each l."""
    n = np.arange(1, weights.size + 1, dtype=np.int64)
    ell = ctx.dlog_table[n % ctx.q]
    unit = ell >= 0
    return np.bincount(ell[unit], weights=weights[unit], minlength=ctx.phi)


def l_star_sweep(ctx, params=None, ks=None):
    """L*(chi_k, 1/2) for every k (or the selected ``ks``) via FFT."""
    ctx = _ctx(ctx)
    params = params or AfeParams()
    a1, a2 = params.steps(ctx.q)
    m1, m2 = params.lengths(ctx.q)
    phi = ctx.phi
    k_all = np.arange(phi, dtype=np.int64) if ks is None else np.asarray(ks, dtype=np.int64) % phi
    out = np.empty(k_all.size, dtype=np.complex128)
    for kappa in (0, 1):
        sel = (k_all % 2) == kappa
        if not sel.any():
            continue
        principal = np.fft.ifft(_binned(ctx, kernel_weights(kappa, a1, m1))) * phi
        dual = np.fft.fft(_binned(ctx, kernel_weights(kappa, a2, m2)))
        k = k_all[sel]
        eps = ctx.gauss_sums[k] / ((1j ** kappa) * math.sqrt(ctx.q))
        out[sel] = principal[k] + eps * dual[k]
    return out


def l_principal_exact(ctx):
    """L(chi_0, 1/2) = zeta(1/2) (1 - q^{-1/2})."""
    q = ctx.q if isinstance(ctx, PrimeContext) else int(ctx)
    return zeta_half() * (1.0 - q ** -0.5)


def l_value(chi, params=None):
    """L(chi, 1/2): the AFE value for primitive chi, the exact one for chi_0."""
    if chi.is_principal:
        return complex(l_principal_exact(chi.ctx))
    return l_star(chi, params).value


def epsilon_factor(chi):
    """Root number tau(chi) / (i^kappa sqrt q) of a primitive character."""
    if chi.is_principal:
        raise PrimitivityRequiredError("the principal character has no functional equation of this shape")
    return complex(_epsilon(chi.ctx, chi.k))


def afe_consistency_residual(chi, X1, X2, cutoff=40.0):
    """|L*(chi; X1) - L*(chi; X2)|; zero up to rounding for primitive chi."""
    if chi.is_principal:
        raise PrimitivityRequiredError("X-independence holds only for primitive characters")
    v1 = l_star(chi, AfeParams(X1, cutoff)).value
    v2 = l_star(chi, AfeParams(X2, cutoff)).value
    return abs(v1 - v2)


def completed_l(chi, value):
    """Lambda(chi, 1/2) = (q/pi)^{1/4} Gamma((1/2 + kappa)/2) L(chi, 1/2)."""
    q = chi.ctx.q
    return (q / math.pi) ** 0.25 * math.gamma(0.25 + 0.5 * chi.parity) * value


def character(q, k):
    return Character(_ctx(q), k)
