import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coset_resonance import kernels
from coset_resonance._accel import HAS_NUMBA
from coset_resonance.modarith import get_context, primes_between


@pytest.mark.parametrize("q", [3, 5, 101, 7919])
def test_power_table(q):
    g = get_context(q).g
    assert np.array_equal(kernels._power_table_loop(g, q), kernels._power_table_numpy(g, q))


@given(st.sampled_from(primes_between(3, 3000)), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_linear_forms_agree(q, seed):
    rng = np.random.default_rng(seed)
    ctx = get_context(q)
    ks = rng.integers(0, q - 1, size=7)
    ells = rng.integers(0, q - 1, size=13)
    w = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    a = kernels._linear_forms_loop(ks, ells, w, ctx.roots)
    b = kernels._linear_forms_numpy(ks, ells, w, ctx.roots)
    assert np.max(np.abs(a - b)) < 1e-12


@given(st.sampled_from(primes_between(50, 3000)), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_congruence_kernels_agree(q, seed):
    rng = np.random.default_rng(seed)
    mults = np.unique(rng.integers(1, q, size=5))
    mw = rng.standard_normal(mults.size) + 0j
    r = np.zeros(31, dtype=np.complex128)
    r[1:] = rng.standard_normal(30)
    a = kernels._congruence_pair_sum_loop(mults, mw, r, q)
    b = kernels._congruence_pair_sum_numpy(mults, mw, r, q)
    assert abs(a - b) < 1e-10 * max(1.0, abs(a))
    wa = kernels._congruence_witness_loop(mults[mults != 1], 6, 12, q)
    wb = kernels._congruence_witness_numpy(mults[mults != 1], 6, 12, q)
    assert list(wa) == list(wb)


def test_upper_gamma_agree():
    x = np.concatenate([[0.0], np.geomspace(1e-10, 500, 3000)])
    for s in (0.25, 0.75):
        a = kernels._upper_gamma_loop(s, x, math.gamma(s))
        b = kernels._upper_gamma_numpy(s, x, math.gamma(s))
        assert np.max(np.abs(a - b)) < 1e-14


def test_backend_binding():
    assert kernels.BACKEND == ("numba" if HAS_NUMBA else "numpy")


def test_numpy_fallback_under_env_flag():
    env = dict(os.environ, COSET_RESONANCE_DISABLE_NUMBA="1")
    code = ("from coset_resonance import kernels, _accel;"
            "from coset_resonance.lcentral import l_star_sweep;"
            "v = l_star_sweep(101);"
            "print(kernels.BACKEND, _accel.USE_NUMBA, repr(complex(v[3])))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, flag, value = out.stdout.split()
    assert backend == "numpy" and flag == "False"
    from coset_resonance.lcentral import l_star_sweep
    assert abs(complex(value) - l_star_sweep(101)[3]) < 1e-13
