"""Resonance moments over a coset of characters mod q.

With R(chi) = sum_{n <= N} r(n) chi(n)::

    M1 = sum_{chi in C} |R(chi)|^2
    M2 = sum_{chi in C} L(chi, 1/2) |R(chi)|^2

and Re(M2)/M1 <= max_{chi in C} |L(chi, 1/2)|. Each moment is available by
summing over characters directly and by the congruence ("kernel") form that
orthogonality produces; the two must agree.
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
import math
import warnings

import numpy as np

from . import kernels
from .chargroup import MIXED, Coset, Subgroup, kernel
from .errors import BudgetError, ConfigurationError, InvariantViolation, UnitRequiredError
from .lcentral import AfeParams, l_principal_exact, l_star_sweep
from .modarith import divisors, get_context
from .resonator import (
    BRUTEFORCE_MAX_N,
    Resonator,
    ResonatorSpec,
    build_resonator,
    optimize_bruteforce,
    resonate_all,
    resonate_coset,
)
from .special import kernel_weights

__all__ = [
    "ExperimentParams",
    "ErrorBudget",
    "MomentReport",
    "Lemma5Result",
    "L_scale",
    "iroot",
    "lemma5_inequality",
    "m1",
    "m2",
    "m2_kernel",
    "main_term",
    "principal_small_h1",
    "pt_dt_decompose",
    "lemma5_check",
    "error_budget",
    "theorem_bound",
    "make_resonator",
    "coset_scan",
    "scan_prime",
    "AVERAGE_TOL",
    "EPSILON",
]

EPSILON = 0.01
AVERAGE_TOL = 1e-6
K_EXPONENT_EPS = 0.1
DEFAULT_BUDGET = 10**6
LEMMA5_BUDGET = 10**9
ROUTE_RTOL = 1e-8


def L_scale(q):
    """sqrt(log q / log log q)."""
    return math.sqrt(math.log(q) / math.log(math.log(q)))


def iroot(x, m):
    """floor(x ** (1/m)) for positive integers, exact."""
    x, m = int(x), int(m)
    r = int(round(x ** (1.0 / m)))
    while r ** m > x:
        r -= 1
    while (r + 1) ** m <= x:
        r += 1
    return r


def lemma5_inequality(N, K, n_max, q):
    """N^(2K-1) (n^(2K) - 1)/(n - 1) < q, evaluated in integers."""
    N, n, q = int(N), int(n_max), int(q)
    # both factors grow fast, so stop as soon as the running value reaches q
    lead = 1
    for _ in range(2 * K - 1):
        lead *= N
        if lead >= q:
            return False
    total, term = 0, lead
    for _ in range(2 * K):
        total += term
        if total >= q:
            return False
        term *= n
    return True


@dataclass(frozen=True)
class ExperimentParams:
    """Parameters of one coset experiment.

    Use :meth:`defaults` to fill N, X and delta from the coset type: the
    subgroup itself takes N = q^(1/3), X = q^(1/6); a nontrivial coset takes
    X = 1, delta = (2/3)/(2K-1) and N = q^(1/(3(2K-1))), lowered until the
    exact small-solution inequality holds.
    """

    q: int
    K: int
    c: int
    N: int
    X: float
    delta: float
    k_too_large: bool = False
    lemma5_ok: bool = True

    @property
    def trivial_coset(self):
        return self.c % self.K == 0

    @property
    def n_max(self):
        """Largest n with n <= q^delta."""
        return int(math.floor(self.q ** self.delta * (1 + 1e-12)))

    @classmethod
    def defaults(cls, q, K=1, c=0, N=None, X=None, delta=None, strict=True):
        ctx = get_context(q)
        q, K = ctx.q, int(K)
        if K < 1 or ctx.phi % K:
            raise ConfigurationError(f"index K={K} must divide q-1={ctx.phi}")
        c = int(c) % K
        if delta is None:
            delta = (2.0 / 3.0) / (2 * K - 1)
        if c == 0:
            N = iroot(q, 3) if N is None else int(N)
            X = q ** (1.0 / 6.0) if X is None else float(X)
        else:
            X = 1.0 if X is None else float(X)
            n_max = int(math.floor(q ** delta * (1 + 1e-12)))
            if N is None:
                N = max(iroot(q, 3 * (2 * K - 1)), 1)
                while N > 1 and not lemma5_inequality(N, K, n_max, q):
                    N -= 1
            elif strict and not lemma5_inequality(int(N), K, n_max, q):
                raise ConfigurationError(
                    f"N={N} violates N^(2K-1)(n^2K-1)/(n-1) < q for K={K}, n<={n_max}, q={q}")
        N = int(N)
        if N < 1 or N >= q:
            raise ConfigurationError(f"resonator length N={N} must satisfy 1 <= N < q={q}")
        n_max = int(math.floor(q ** delta * (1 + 1e-12)))
        k_flag = K > math.log(q) ** (1 - K_EXPONENT_EPS)
        if k_flag:
            warnings.warn(f"index K={K} exceeds (log q)^0.9 = {math.log(q) ** 0.9:.3g}",
                          RuntimeWarning, stacklevel=2)
        # the small-solution inequality only constrains nontrivial cosets
        ok = c == 0 or lemma5_inequality(N, K, max(n_max, 1), q)
        return cls(q, K, c, N, float(X), float(delta), k_flag, ok)

    @property
    def xn_condition(self):
        """X N < sqrt(pi q): principal congruences collapse to equalities."""
        return self.X * self.N < math.sqrt(math.pi * self.q)


@dataclass(frozen=True)
class ErrorBudget:
    """The five error terms, each scaled by #H * sum |r(n)|^2."""

    dual_large_y: float
    principal_large_y: float
    dual_small_y: float
    principal_small_y: float
    principal_character: float
    scale: float

    def as_tuple(self):
        return (self.dual_large_y, self.principal_large_y, self.dual_small_y,
                self.principal_small_y, self.principal_character)

    def relative(self):
        return tuple(t / self.scale for t in self.as_tuple())

    @property
    def bounded(self):
        """All relative terms <= 1 (error comparable to M1 at most)."""
        return all(t <= 1.0 for t in self.relative())


def error_budget(params, norm_sq, eps=EPSILON):
    q, X, N = params.q, params.X, params.N
    phi = q - 1
    scale = (phi // params.K) * norm_sq
    rel = (
        N / (q ** 0.25 * X ** 0.5),
        X ** 0.5 * N / q ** (0.75 - eps),
        N / (q ** 0.25 * X ** 0.5),
        1.0 / (X ** 0.5 * q ** (0.25 - eps)),
        N * X ** 0.5 * q ** 0.25 / phi,
    )
    return ErrorBudget(*(scale * t for t in rel), scale)


def theorem_bound(q, K, parity_profile):
    """Predicted log of the coset maximum, o(1) terms dropped.

    ``parity_profile`` is "trivial" for the subgroup itself, otherwise the
    coset's profile ("mixed", "all-even", "all-odd").
    """
    L = L_scale(q)
    if parity_profile == "trivial" or K == 1:
        return L / math.sqrt(3) - math.log(K)
    if parity_profile == MIXED:
        return L / (math.sqrt(3) * math.sqrt(2 * K - 1))
    return L / (math.sqrt(3) * math.sqrt(K - 1))


# ---------------------------------------------------------------------------
# moments


def _check_length(r, q):
    if r.N >= q:
        raise ConfigurationError(f"resonator length N={r.N} must be below q={q}")


def m1(C, r, route="direct"):
    """sum_{chi in C} |R(chi)|^2 by direct summation or by the congruence form

        #H sum_{h in ker H} conj(chi_1(h)) sum_{h n1 = n2 (q)} r(n1) conj(r(n2))
    """
    ctx = C.ctx
    _check_length(r, ctx.q)
    if route == "direct":
        return float(np.sum(np.abs(resonate_coset(r, C)) ** 2))
    if route == "kernel":
        hs = np.array(kernel(C.subgroup).residues, dtype=np.int64)
        weights = np.conj(ctx.roots[(C.c * ctx.dlog_table[hs]) % ctx.phi])
        total = kernels.congruence_pair_sum(hs, weights, r.dense(), ctx.q)
        return float(C.size * total.real)
    raise ValueError(f"unknown route {route!r}")


@lru_cache(maxsize=32)
def _sweep(q, X, cutoff):
    out = l_star_sweep(get_context(q), AfeParams(X, cutoff))
    out.flags.writeable = False
    return out


def coset_l_values(C, X, cutoff=40.0):
    """L(chi, 1/2) on the coset, with the exact value at chi_0."""
    vals = np.array(_sweep(C.ctx.q, float(X), float(cutoff))[C.indices])
    if C.contains_principal:
        vals[0] = l_principal_exact(C.ctx)
    return vals


def m2(C, r, params, cutoff=40.0):
    """sum_{chi in C} L(chi, 1/2) |R(chi)|^2 (direct route)."""
    _check_length(r, C.ctx.q)
    weights = np.abs(resonate_coset(r, C)) ** 2
    return complex(np.sum(coset_l_values(C, params.X, cutoff) * weights))


def main_term(C, r):
    """#H sum_{n n1 <= N} r(n1) conj(r(n n1)) / sqrt(n)."""
    rd = r.dense()
    N = r.N
    acc = 0.0
    for n in range(1, N + 1):
        m = N // n
        acc += np.real(np.dot(rd[1:m + 1], np.conj(rd[n:n * m + 1:n]))) / math.sqrt(n)
    return float(C.size * acc)


def principal_small_h1(C, r, X):
    """h = 1 principal contribution with V replaced by 1 on arguments below 1:

        #H sum_{n < X sqrt(q/pi)} n^{-1/2} sum_{n n1 = n2 (mod q)} r(n1) conj(r(n2))

    Equals :func:`main_term` when X N < sqrt(pi q) and N <= X sqrt(q/pi).
    """
    q = C.ctx.q
    n_top = math.ceil(X * math.sqrt(q / math.pi)) - 1
    n = np.arange(1, n_top + 1, dtype=np.int64)
    total = kernels.congruence_pair_sum(n, 1.0 / np.sqrt(n), r.dense(), q)
    return float(C.size * total.real)


def pt_dt_decompose(C, n1, n2, params=None, cutoff=40.0):
    """Principal and dual terms of sum_{chi in C} chi(n1) conj(chi(n2)) L*(chi, 1/2).

    The coset is split by parity; each part is a coset of a subgroup H'
    (H' = H for even index, H intersected with the even characters for odd
    index, with kernel ker H union -ker H). Orthogonality turns the principal
    sum into a congruence h n n1 = n2 over ker H' and the dual sum into
    additive characters e(h * n n2 / (n1 q)).
    """
    ctx = C.ctx
    q, phi = ctx.q, ctx.phi
    for v in (n1, n2):
        if int(v) % q == 0:
            raise UnitRequiredError(f"{v} is not a unit modulo {q}")
    X = params.X if params is not None else 1.0
    afe = AfeParams(X, cutoff)
    a1, a2 = afe.steps(q)
    m1_len, m2_len = afe.lengths(q)
    inv_n1 = ctx.mod_inv(n1)
    additive = kernels.roots_of_unity(q)
    pt = 0j
    dt = 0j
    for kappa, sub in C.parity_split():
        size = sub.size
        hs = np.array(kernel(sub.subgroup).residues, dtype=np.int64)
        chi_h = ctx.roots[(sub.c * ctx.dlog_table[hs]) % phi]
        # principal: n = n2 / (h n1) mod q, all lifts up to the cut
        w1 = kernel_weights(kappa, a1, m1_len)
        for h, ch in zip(hs, chi_h):
            n0 = (int(n2) * pow(int(h) * int(n1), -1, q)) % q
            lifts = np.arange(n0, m1_len + 1, q)
            pt += size * np.conj(ch) * np.sum(w1[lifts - 1])
        # dual
        w2 = kernel_weights(kappa, a2, m2_len)
        n = np.arange(1, m2_len + 1, dtype=np.int64)
        unit = n % q != 0
        abar = (n[unit] * int(n2) % q) * inv_n1 % q
        inner = additive[np.outer(abar, hs) % q] @ chi_h
        dt += size / (1j ** kappa * math.sqrt(q)) * np.sum(w2[unit] * inner)
    return complex(pt), complex(dt)


def m2_kernel(C, r, params, cutoff=40.0):
    """M2 assembled from :func:`pt_dt_decompose` over support pairs, plus the
    exact principal-character correction when chi_0 is in the coset."""
    ctx = C.ctx
    _check_length(r, ctx.q)
    total = 0j
    for i, n1 in enumerate(r.support):
        for j, n2 in enumerate(r.support):
            pt, dt = pt_dt_decompose(C, int(n1), int(n2), params, cutoff)
            total += r.values[i] * np.conj(r.values[j]) * (pt + dt)
    if C.contains_principal:
        l_star0 = _sweep(ctx.q, float(params.X), float(cutoff))[0]
        total += (l_principal_exact(ctx) - l_star0) * abs(np.sum(r.values)) ** 2
    return complex(total)


# ---------------------------------------------------------------------------
# small solutions of h n n1 = n2 (mod q)


@dataclass(frozen=True)
class Lemma5Result:
    q: int
    K: int
    N: int
    delta: float
    n_max: int
    holds: bool
    witness: tuple = None
    inequality: bool = True


def lemma5_check(q, K, N, delta, extended=True, budget=LEMMA5_BUDGET):
    """Exhaustive scan for h n n1 = n2 (mod q) with h != 1 in the order-K
    unit subgroup (with its negatives when ``extended``), n <= q^delta and
    n1, n2 <= N."""
    ctx = get_context(q)
    K, N = int(K), int(N)
    if K < 1 or ctx.phi % K:
        raise ConfigurationError(f"K={K} must divide q-1={ctx.phi}")
    ker = kernel(Subgroup(ctx, K))
    hs = [h for h in (ker.extended if extended else ker.residues) if h != 1]
    n_max = int(math.floor(q ** delta * (1 + 1e-12)))
    size = len(hs) * n_max * N * N
    if size > budget:
        raise BudgetError(f"small-solution scan of {size:.3g} tuples exceeds budget {budget:.3g}", size)
    ok = lemma5_inequality(N, K, max(n_max, 1), ctx.q)
    if not hs or n_max < 1 or N < 1:
        return Lemma5Result(ctx.q, K, N, float(delta), n_max, True, None, ok)
    w = kernels.congruence_witness(np.array(hs, dtype=np.int64), n_max, N, ctx.q)
    if w[0] < 0:
        return Lemma5Result(ctx.q, K, N, float(delta), n_max, True, None, ok)
    return Lemma5Result(ctx.q, K, N, float(delta), n_max, False, tuple(int(x) for x in w), ok)


# ---------------------------------------------------------------------------
# experiment records


@dataclass(frozen=True)
class MomentReport:
    q: int
    g: int
    K: int
    c: int
    parity_profile: str
    N: int
    X: float
    delta: float
    M1: float
    M2: complex
    MT: float
    error_terms: ErrorBudget
    lower_bound: float
    max_abs_L: float
    argmax_character_index: int
    theorem_exponent: float
    measured_log_max: float
    resonator: str = "standard"
    degenerate_resonator: bool = False
    M1_kernel: float = field(default=float("nan"), compare=False)

    def row(self):
        e = self.error_terms.as_tuple()
        return {
            "q": self.q, "g": self.g, "K": self.K, "c": self.c,
            "parity_profile": self.parity_profile,
            "N": self.N, "X": self.X, "delta": self.delta,
            "M1": self.M1, "ReM2": self.M2.real, "MT": self.MT,
            "err1": e[0], "err2": e[1], "err3": e[2], "err4": e[3], "err5": e[4],
            "lower_bound": self.lower_bound, "max_abs_L": self.max_abs_L,
            "argmax_character_index": self.argmax_character_index,
            "theorem_exponent": self.theorem_exponent,
            "measured_log_max": self.measured_log_max,
        }


def make_resonator(mode, N):
    """"standard", "optimal" (brute-force maximizer, N <= 256) or "delta"."""
    if isinstance(mode, Resonator):
        return mode
    if mode == "standard":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return build_resonator(ResonatorSpec(N))
    if mode == "optimal":
        if N > BRUTEFORCE_MAX_N:
            raise ConfigurationError(f"optimal resonator needs N <= {BRUTEFORCE_MAX_N}")
        return optimize_bruteforce(N)[1]
    if mode == "delta":
        return Resonator.delta(N)
    raise ConfigurationError(f"unknown resonator mode {mode!r}")


def _check_budget(q, budget):
    if q > budget:
        phi = q - 1
        estimate = phi * math.log2(phi) + 80 * math.sqrt(q / math.pi) * q ** (1 / 6)
        raise BudgetError(f"q={q} exceeds the scan budget {budget}; about {estimate:.3g} "
                          f"operations and {16 * q / 2**20:.3g} MiB per table would be needed", estimate)


def _assemble(params, C, r, l_vals, r_vals, m1_kernel_value):
    ctx = C.ctx
    w = np.abs(r_vals) ** 2
    M1 = float(np.sum(w))
    M2 = complex(np.sum(l_vals * w))
    abs_l = np.abs(l_vals)
    i = int(np.argmax(abs_l))
    max_l = float(abs_l[i])
    lower = M2.real / M1
    if not lower <= max_l + AVERAGE_TOL:
        raise InvariantViolation(
            f"Re(M2)/M1 = {lower!r} exceeds max|L| = {max_l!r} (q={ctx.q}, K={C.d}, c={C.c})")
    if m1_kernel_value is not None and abs(m1_kernel_value - M1) > ROUTE_RTOL * max(M1, 1e-300):
        raise InvariantViolation(f"M1 routes disagree: direct {M1!r} vs kernel {m1_kernel_value!r}")
    profile = "trivial" if C.c == 0 else C.parity_profile
    return MomentReport(
        q=ctx.q, g=ctx.g, K=C.d, c=C.c, parity_profile=C.parity_profile,
        N=params.N, X=params.X, delta=params.delta,
        M1=M1, M2=M2, MT=main_term(C, r),
        error_terms=error_budget(params, r.norm_sq),
        lower_bound=lower, max_abs_L=max_l,
        argmax_character_index=int(C.indices[i]),
        theorem_exponent=theorem_bound(ctx.q, C.d, profile),
        measured_log_max=math.log(max_l),
        resonator=r.label, degenerate_resonator=r.degenerate,
        M1_kernel=float("nan") if m1_kernel_value is None else m1_kernel_value,
    )


def coset_scan(params, resonator="standard", budget=DEFAULT_BUDGET, cutoff=40.0):
    """Full experiment record for one coset: moments, main term, error budget,
    the exhaustive maximum of |L| and the predicted exponent."""
    _check_budget(params.q, budget)
    ctx = get_context(params.q)
    C = Coset(Subgroup(ctx, params.K), params.c)
    r = make_resonator(resonator, params.N)
    _check_length(r, ctx.q)
    l_vals = coset_l_values(C, params.X, cutoff)
    r_vals = resonate_coset(r, C)
    return _assemble(params, C, r, l_vals, r_vals, m1(C, r, route="kernel"))


def scan_prime(q, max_index=None, resonator="standard", budget=DEFAULT_BUDGET, cutoff=40.0):
    """Reports for every divisor K <= max_index of q-1 and every coset.

    Resonator values are computed once per resonator for the whole group by
    FFT and sliced per coset, so this is the fast path for large sweeps.
    """
    _check_budget(q, budget)
    ctx = get_context(q)
    reports = []
    r_cache = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for K in divisors(ctx.phi):
            if max_index is not None and K > max_index:
                continue
            H = Subgroup(ctx, K)
            # N, X, delta depend only on whether the coset is the subgroup
            trivial = ExperimentParams.defaults(ctx.q, K, 0)
            other = ExperimentParams.defaults(ctx.q, K, 1) if K > 1 else None
            for c in range(K):
                params = trivial if c == 0 else replace(other, c=c)
                key = params.N
                if key not in r_cache:
                    r = make_resonator(resonator, params.N)
                    r_cache[key] = (r, resonate_all(r, ctx))
                r, r_all = r_cache[key]
                C = Coset(H, c)
                reports.append(_assemble(params, C, r, coset_l_values(C, params.X, cutoff),
                                         r_all[C.indices], None))
    return reports
