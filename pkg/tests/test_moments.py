import math
from types import SimpleNamespace
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coset_resonance import kernels
from coset_resonance.chargroup import Coset, Subgroup, kernel
from coset_resonance.errors import BudgetError, ConfigurationError, UnitRequiredError
from coset_resonance.lcentral import AfeParams, l_star_sweep
from coset_resonance.modarith import divisors, get_context, primes_between
from coset_resonance.moments import (
    ExperimentParams,
    L_scale,
    coset_l_values,
    coset_scan,
    error_budget,
    iroot,
    lemma5_check,
    lemma5_inequality,
    m1,
    m2,
    m2_kernel,
    main_term,
    make_resonator,
    principal_small_h1,
    pt_dt_decompose,
    scan_prime,
    theorem_bound,
)
from coset_resonance.resonator import Resonator


def coset(q, K, c):
    return Coset(Subgroup(get_context(q), K), c)


def random_r(rng, N):
    return Resonator.from_dense(rng.standard_normal(N) + 1j * rng.standard_normal(N))


def test_iroot_and_inequality():
    assert iroot(1000, 3) == 10 and iroot(999, 3) == 9 and iroot(10 ** 30 + 1, 3) == 10 ** 10
    # N^(2K-1) * (1 + n + ... + n^(2K-1)) < q, evaluated exactly
    assert lemma5_inequality(2, 2, 2, 121) and not lemma5_inequality(2, 2, 2, 120)
    assert lemma5_inequality(1, 3, 1, 7) and not lemma5_inequality(1, 3, 1, 6)


def test_m1_full_group_is_phi_norm():
    rng = np.random.default_rng(0)
    r = random_r(rng, 30)
    C = coset(101, 1, 0)
    for route in ("direct", "kernel"):
        assert abs(m1(C, r, route) - 100 * r.norm_sq) < 1e-9 * 100 * r.norm_sq
    with pytest.raises(ValueError):
        m1(C, r, "other")
    with pytest.raises(ConfigurationError):
        m1(C, Resonator.delta(101))


def test_m1_routes_example_q101():
    rng = np.random.default_rng(1)
    r = random_r(rng, 2)
    for c in range(4):
        C = coset(101, 4, c)
        assert abs(m1(C, r, "direct") - m1(C, r, "kernel")) < 1e-10


@st.composite
def moment_case(draw):
    q = draw(st.sampled_from(primes_between(3, 2000)))
    K = draw(st.sampled_from(divisors(q - 1)))
    c = draw(st.integers(0, K - 1))
    N = draw(st.integers(1, min(q - 1, 60)))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return coset(q, K, c), random_r(np.random.default_rng(seed), N)


@given(moment_case())
@settings(max_examples=100, deadline=None)
def test_m1_route_equality(case):
    C, r = case
    d, k = m1(C, r, "direct"), m1(C, r, "kernel")
    assert abs(d - k) <= 1e-8 * d


def test_no_nontrivial_congruences_below_threshold():
    for q in primes_between(100, 1500):
        for K in (2, 3, 4):
            if (q - 1) % K:
                continue
            N = iroot(q, 2 * (2 * K - 1))
            hs = np.array([h for h in kernel(Subgroup(get_context(q), K)).residues if h != 1])
            r = np.zeros(N + 1, dtype=np.complex128)
            r[1:] = 1.0
            assert kernels.congruence_pair_sum(hs, np.ones(hs.size, complex), r, q) == 0


def test_m1_rearrangement_bound():
    rng = np.random.default_rng(5)
    for q in (101, 211, 1009):
        for K in divisors(q - 1)[:4]:
            r = Resonator.from_dense(rng.random(8))
            assert m1(coset(q, K, 0), r) <= (q - 1) * r.norm_sq * (1 + 1e-12)


def test_m2_delta_full_group_is_first_moment():
    q = 101
    C = coset(q, 1, 0)
    params = ExperimentParams.defaults(q, 1, 0)
    vals = coset_l_values(C, params.X)
    assert abs(m2(C, Resonator.delta(1), params) - np.sum(vals)) < 1e-12


def test_m2_reversed_resummation():
    q = 101
    C = coset(q, 2, 0)
    params = ExperimentParams.defaults(q, 2, 0)
    r = make_resonator("standard", 4)
    forward = m2(C, r, params)
    w = np.abs([sum(v * Coset(C.subgroup, 0).ctx.roots[(k * get_context(q).dlog(n)) % 100]
                    for n, v in zip(r.support, r.values)) for k in C.indices]) ** 2
    vals = coset_l_values(C, params.X)
    backward = sum(vals[i] * w[i] for i in reversed(range(len(w))))
    assert abs(forward - backward) < 1e-9


def test_average_inequality_random():
    rng = np.random.default_rng(9)
    for q in (101, 307, 1009):
        for K in divisors(q - 1)[:5]:
            for c in range(min(K, 3)):
                C = coset(q, K, c)
                r = random_r(rng, 10)
                M1 = m1(C, r)
                M2 = m2(C, r, ExperimentParams.defaults(q, K, c))
                vals = coset_l_values(C, 1.0)
                assert M2.real / M1 <= np.max(np.abs(vals)) + 1e-6


def _pt_dt_oracle(C, n1, n2, X):
    ctx = C.ctx
    star = l_star_sweep(ctx, AfeParams(X))[C.indices]
    a = ctx.roots[(C.indices * ctx.dlog(n1)) % ctx.phi]
    b = np.conj(ctx.roots[(C.indices * ctx.dlog(n2)) % ctx.phi])
    return np.sum(a * b * star)


def test_pt_dt_full_group_at_one():
    C = coset(101, 1, 0)
    pt, dt = pt_dt_decompose(C, 1, 1)
    assert abs(pt + dt - np.sum(l_star_sweep(101))) < 1e-7


@pytest.mark.parametrize("K, c", [(5, 2), (5, 0), (25, 7), (2, 0), (4, 2), (4, 3), (10, 1)])
def test_pt_dt_identity(K, c):
    rng = np.random.default_rng(K * 31 + c)
    C = coset(101, K, c)
    for _ in range(4):
        n1, n2 = (int(x) for x in rng.integers(1, 30, size=2))
        for X in (1.0, 1.7):
            params = SimpleNamespace(X=X)
            pt, dt = pt_dt_decompose(C, n1, n2, params)
            assert abs(pt + dt - _pt_dt_oracle(C, n1, n2, X)) < 1e-7


def test_pt_dt_rejects_non_units():
    with pytest.raises(UnitRequiredError):
        pt_dt_decompose(coset(101, 2, 0), 101, 1)


def test_m2_kernel_matches_direct():
    rng = np.random.default_rng(2)
    for q, K, c in [(101, 2, 0), (101, 5, 3), (211, 3, 0), (211, 6, 5)]:
        C = coset(q, K, c)
        params = ExperimentParams.defaults(q, K, c)
        r = Resonator.from_dense(rng.random(6))
        assert abs(m2_kernel(C, r, params) - m2(C, r, params)) < 1e-8 * max(1, abs(m2(C, r, params)))


def test_main_term_equals_small_h1_part():
    rng = np.random.default_rng(4)
    for q in (1009, 4001):
        for K in (1, 2, 4):
            for X in (0.7, 1.0, 2.0):
                N_cap = min(int(math.sqrt(math.pi * q) / X - 1e-9), int(X * math.sqrt(q / math.pi)))
                for N in sorted({1, 2, N_cap}):
                    C = coset(q, K, 0)
                    r = Resonator.from_dense(rng.random(N))
                    assert N * X < math.sqrt(math.pi * q)
                    mt, h1 = main_term(C, r), principal_small_h1(C, r, X)
                    assert abs(mt - h1) <= 1e-8 * abs(mt)


def test_lemma5_examples():
    assert lemma5_check(101, 2, 2, 0.25).holds
    res = lemma5_check(101, 1, 50, 1.0, extended=False)  # kernel {1}
    assert res.holds and res.witness is None
    # the extended kernel adds h = -1, which does have small solutions
    assert not lemma5_check(101, 1, 50, 1.0).holds
    found = None
    for q in primes_between(5, 500):
        if (q - 1) % 2 == 0:
            N = math.isqrt(q) + 1
            res = lemma5_check(q, 2, N, 0.25)
            if not res.holds:
                found = res
                break
    assert found is not None
    h, n, n1, n2 = found.witness
    assert h != 1 and (h * n * n1 - n2) % found.q == 0 and n1 <= found.N and n2 <= found.N
    with pytest.raises(BudgetError):
        lemma5_check(999983, 2, 10 ** 4, 0.5)


def test_lemma5_thresholds_hold():
    for q in primes_between(3, 1500):
        for K in (2, 3):
            if (q - 1) % K == 0:
                e = 1 / (2 * (2 * K - 1))
                assert lemma5_check(q, K, iroot(q, 2 * (2 * K - 1)), e).holds


def test_error_budget():
    q = 10 ** 6 + 3
    p = SimpleNamespace(q=q, K=1, N=q ** (1 / 3), X=q ** (1 / 6))
    b = error_budget(p, 1.0)
    assert abs(b.relative()[0] - 1) < 1e-12
    defaults = ExperimentParams.defaults(q, 1, 0)
    budget = error_budget(defaults, 1.0)
    assert len(budget.as_tuple()) == 5 and isinstance(budget.bounded, bool)
    lo = error_budget(SimpleNamespace(q=q, K=1, N=50, X=1.0), 1.0).relative()
    hi = error_budget(SimpleNamespace(q=q, K=1, N=50, X=100.0), 1.0).relative()
    assert hi[1] > lo[1] and hi[4] > lo[4]
    assert hi[0] < lo[0] and hi[2] < lo[2] and hi[3] < lo[3]


def test_theorem_bound():
    q = 10 ** 6 + 3
    L = L_scale(q)
    assert abs(theorem_bound(q, 1, "trivial") - L / math.sqrt(3)) < 1e-15
    assert abs(theorem_bound(q, 1, "all-odd") - L / math.sqrt(3)) < 1e-15
    assert abs(theorem_bound(q, 3, "mixed") - L / (math.sqrt(3) * math.sqrt(5))) < 1e-15
    assert abs(theorem_bound(q, 2, "all-even") - L / math.sqrt(3)) < 1e-15
    assert abs(theorem_bound(q, 4, "trivial") - (L / math.sqrt(3) - math.log(4))) < 1e-15


def test_param_defaults():
    q = 1009
    p = ExperimentParams.defaults(q, 1, 0)
    assert p.N == 10 and abs(p.X - q ** (1 / 6)) < 1e-12 and p.xn_condition
    c = ExperimentParams.defaults(q, 3, 1)
    assert c.X == 1.0 and abs(c.delta - (2 / 3) / 5) < 1e-15
    assert c.lemma5_ok and lemma5_inequality(c.N, 3, c.n_max, q)
    assert c.N <= iroot(q, 15)
    with pytest.warns(RuntimeWarning):
        big = ExperimentParams.defaults(q, 8, 1)
    assert big.k_too_large
    with pytest.raises(ConfigurationError):
        ExperimentParams.defaults(q, 3, 1, N=30)
    with pytest.raises(ConfigurationError):
        ExperimentParams.defaults(q, 5, 1)
    loose = ExperimentParams.defaults(q, 3, 1, N=30, strict=False)
    assert not loose.lemma5_ok


def test_coset_scan_examples():
    q = 101
    rep = coset_scan(ExperimentParams.defaults(q, 1, 0), resonator="delta")
    vals = coset_l_values(coset(q, 1, 0), rep.X)
    assert abs(rep.lower_bound - np.mean(vals.real)) < 1e-12
    rep2 = coset_scan(ExperimentParams.defaults(1009, 2, 0))
    assert rep2.lower_bound <= rep2.max_abs_L
    assert rep2.row() == coset_scan(ExperimentParams.defaults(1009, 2, 0)).row()
    assert abs(rep2.M1_kernel - rep2.M1) < 1e-8 * rep2.M1
    opt = coset_scan(ExperimentParams.defaults(1009, 2, 0), resonator="optimal")
    assert opt.resonator == "optimal" and opt.lower_bound <= opt.max_abs_L
    with pytest.raises(BudgetError) as err:
        coset_scan(ExperimentParams.defaults(1000003, 1, 0))
    assert err.value.estimate > 0


def test_scan_prime_matches_coset_scan():
    q = 211
    rows = scan_prime(q, max_index=10)
    assert [(r.K, r.c) for r in rows] == [(K, c) for K in divisors(q - 1) if K <= 10 for c in range(K)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for rep in rows[:: max(1, len(rows) // 8)]:
            ref = coset_scan(ExperimentParams.defaults(q, rep.K, rep.c))
            for key, v in ref.row().items():
                w = rep.row()[key]
                assert w == v or abs(w - v) <= 1e-9 * max(1.0, abs(v)), key
