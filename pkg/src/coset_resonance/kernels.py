"""Hot inner loops.

Every kernel exists twice: a loop form (compiled with numba when
available) and a vectorized numpy form. The public name is bound to the
loop form when numba is active and to the numpy form otherwise, see
:mod:`coset_resonance._accel`. Both forms are importable directly so the
test-suite and ``benchmarks/bench_kernels.py`` can compare them.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

_EPS = 2.220446049250313e-16
_FPMIN = 1e-300
_MAX_ITER = 2000
_CHUNK = 1 << 20


def roots_of_unity(m):
    """``exp(2*pi*i*t/m)`` for ``t = 0..m-1`` (exact-angle lookup table)."""
    t = np.arange(m, dtype=np.float64) * (2.0 * np.pi / m)
    out = np.empty(m, dtype=np.complex128)
    out.real = np.cos(t)
    out.imag = np.sin(t)
    return out


# ---------------------------------------------------------------------------
# powers of a primitive root


@njit(cache=True)
def _power_table_loop(g, q):
    out = np.empty(q - 1, dtype=np.int64)
    x = 1
    for e in range(q - 1):
        out[e] = x
        x = (x * g) % q
    return out


def _power_table_numpy(g, q):
    n = q - 1
    out = np.empty(n, dtype=np.int64)
    out[0] = 1
    filled = 1
    step = g % q  # g**filled
    while filled < n:
        take = min(filled, n - filled)
        out[filled:filled + take] = (out[:take] * step) % q
        filled += take
        step = pow(g, filled, q)
    return out


# ---------------------------------------------------------------------------
# character linear forms  sum_j w_j * e(k * l_j / phi)


@njit(cache=True)
def _linear_forms_loop(ks, ells, weights, roots):
    phi = roots.shape[0]
    out = np.zeros(ks.shape[0], dtype=np.complex128)
    for i in range(ks.shape[0]):
        k = ks[i] % phi
        acc = 0.0 + 0.0j
        for j in range(ells.shape[0]):
            acc += weights[j] * roots[(k * ells[j]) % phi]
        out[i] = acc
    return out


def _linear_forms_numpy(ks, ells, weights, roots):
    phi = roots.shape[0]
    ks = np.asarray(ks, dtype=np.int64) % phi
    ells = np.asarray(ells, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.complex128)
    out = np.zeros(ks.shape[0], dtype=np.complex128)
    if ells.size == 0:
        return out
    rows = max(1, _CHUNK // ells.size)
    for start in range(0, ks.size, rows):
        block = ks[start:start + rows]
        idx = np.outer(block, ells) % phi
        out[start:start + rows] = roots[idx] @ weights
    return out


# ---------------------------------------------------------------------------
# congruence-weighted pair sums
#   sum_i w_i sum_{n1 <= N} r[n1] * conj(r[(m_i * n1) mod q])   (target <= N)


@njit(cache=True)
def _congruence_pair_sum_loop(multipliers, mweights, r, q):
    n_max = r.shape[0] - 1
    total = 0.0 + 0.0j
    for i in range(multipliers.shape[0]):
        m = multipliers[i] % q
        acc = 0.0 + 0.0j
        for n1 in range(1, n_max + 1):
            if r[n1] == 0:
                continue
            n2 = (m * n1) % q
            if 1 <= n2 <= n_max:
                acc += r[n1] * np.conj(r[n2])
        total += mweights[i] * acc
    return total


def _congruence_pair_sum_numpy(multipliers, mweights, r, q):
    n_max = r.shape[0] - 1
    multipliers = np.asarray(multipliers, dtype=np.int64) % q
    mweights = np.asarray(mweights, dtype=np.complex128)
    n1 = np.arange(1, n_max + 1, dtype=np.int64)
    total = 0.0 + 0.0j
    rows = max(1, _CHUNK // max(n_max, 1))
    for start in range(0, multipliers.size, rows):
        block = multipliers[start:start + rows]
        n2 = np.outer(block, n1) % q
        hit = (n2 >= 1) & (n2 <= n_max)
        vals = np.where(hit, r[n1][None, :] * np.conj(r[np.where(hit, n2, 0)]), 0.0)
        total += np.sum(vals.sum(axis=1) * mweights[start:start + rows])
    return total


# ---------------------------------------------------------------------------
# small-solution scan for  h * n * n1 = n2 (mod q)


@njit(cache=True)
def _congruence_witness_loop(hs, n_max, N, q):
    out = np.full(4, -1, dtype=np.int64)
    for i in range(hs.shape[0]):
        h = hs[i] % q
        for n in range(1, n_max + 1):
            hn = (h * n) % q
            for n1 in range(1, N + 1):
                n2 = (hn * n1) % q
                if 1 <= n2 <= N:
                    out[0] = hs[i]
                    out[1] = n
                    out[2] = n1
                    out[3] = n2
                    return out
    return out


def _congruence_witness_numpy(hs, n_max, N, q):
    n1 = np.arange(1, N + 1, dtype=np.int64)
    rows = max(1, _CHUNK // max(N, 1))
    for h in np.asarray(hs, dtype=np.int64):
        for start in range(1, n_max + 1, rows):
            n = np.arange(start, min(start + rows, n_max + 1), dtype=np.int64)
            n2 = np.outer((h % q) * n % q, n1) % q
            hit = np.argwhere((n2 >= 1) & (n2 <= N))
            if hit.size:
                a, b = hit[0]  # argwhere is row-major: smallest n, then n1
                return np.array([h, n[a], n1[b], n2[a, b]], dtype=np.int64)
    return np.full(4, -1, dtype=np.int64)


# ---------------------------------------------------------------------------
# upper incomplete gamma on arrays (series below s+1, continued fraction above)


@njit(cache=True)
def _upper_gamma_loop(s, x, gamma_s):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        if xi == 0.0:
            out[i] = gamma_s
        elif xi < s + 1.0:
            ap = s
            term = 1.0 / s
            acc = term
            for _ in range(_MAX_ITER):
                ap += 1.0
                term *= xi / ap
                acc += term
                if abs(term) < abs(acc) * _EPS:
                    break
            out[i] = gamma_s - acc * math.exp(-xi + s * math.log(xi))
        else:
            b = xi + 1.0 - s
            c = 1.0 / _FPMIN
            d = 1.0 / b
            h = d
            for j in range(1, _MAX_ITER):
                an = -j * (j - s)
                b += 2.0
                d = an * d + b
                if abs(d) < _FPMIN:
                    d = _FPMIN
                c = b + an / c
                if abs(c) < _FPMIN:
                    c = _FPMIN
                d = 1.0 / d
                delta = d * c
                h *= delta
                if abs(delta - 1.0) < _EPS:
                    break
            out[i] = math.exp(-xi + s * math.log(xi)) * h
    return out


def _upper_gamma_numpy(s, x, gamma_s):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    zero = x == 0.0
    low = (x < s + 1.0) & ~zero
    high = ~(low | zero)
    out[zero] = gamma_s

    if low.any():
        xl = x[low]
        term = np.full_like(xl, 1.0 / s)
        acc = term.copy()
        ap = s
        active = np.ones(xl.shape, dtype=bool)
        for _ in range(_MAX_ITER):
            ap += 1.0
            term = np.where(active, term * xl / ap, 0.0)
            acc += term
            active &= np.abs(term) >= np.abs(acc) * _EPS
            if not active.any():
                break
        out[low] = gamma_s - acc * np.exp(-xl + s * np.log(xl))

    if high.any():
        xh = x[high]
        b = xh + 1.0 - s
        c = np.full_like(xh, 1.0 / _FPMIN)
        d = 1.0 / b
        h = d.copy()
        active = np.ones(xh.shape, dtype=bool)
        for j in range(1, _MAX_ITER):
            an = -j * (j - s)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
            c = b + an / c
            c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
            d = 1.0 / d
            delta = np.where(active, d * c, 1.0)
            h *= delta
            active &= np.abs(delta - 1.0) >= _EPS
            if not active.any():
                break
        out[high] = np.exp(-xh + s * np.log(xh)) * h
    return out


if USE_NUMBA:
    power_table = _power_table_loop
    linear_forms = _linear_forms_loop
    congruence_pair_sum = _congruence_pair_sum_loop
    congruence_witness = _congruence_witness_loop
    upper_gamma = _upper_gamma_loop
else:
    power_table = _power_table_numpy
    linear_forms = _linear_forms_numpy
    congruence_pair_sum = _congruence_pair_sum_numpy
    congruence_witness = _congruence_witness_numpy
    upper_gamma = _upper_gamma_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
