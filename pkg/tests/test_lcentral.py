import mpmath
import numpy as np
import pytest

from coset_resonance.chargroup import Character
from coset_resonance.errors import DomainError, PrimitivityRequiredError
from coset_resonance.lcentral import (
    AfeParams,
    afe_consistency_residual,
    completed_l,
    epsilon_factor,
    l_principal_exact,
    l_star,
    l_star_sweep,
    l_value,
)
from coset_resonance.modarith import get_context
from coset_resonance.special import zeta_half


def chi(q, k):
    return Character(get_context(q), k)


def hurwitz_oracle(c):
    """L(chi, 1/2) = q^{-1/2} sum_a chi(a) zeta(1/2, a/q)."""
    q = c.ctx.q
    mpmath.mp.dps = 30
    total = sum(mpmath.mpc(c(a)) * mpmath.zeta(0.5, mpmath.mpf(a) / q) for a in range(1, q))
    return complex(total / mpmath.sqrt(q))


def test_params_validation():
    with pytest.raises(DomainError):
        AfeParams(X=0)
    with pytest.raises(DomainError):
        AfeParams(X=1.0, cutoff=10)


def test_quadratic_mod5():
    c = chi(5, 2)
    v1 = l_star(c, AfeParams(1.0))
    v2 = l_star(c, AfeParams(2.0))
    assert abs(v1.value - v2.value) < 1e-8
    assert abs(v1.value - hurwitz_oracle(c)) < 1e-8
    assert v1.tail_bound < 1e-8 and v1.parity == 0
    # doubled cutoff agrees too
    assert abs(l_star(c, AfeParams(1.0, 80.0)).value - v1.value) < 1e-12


@pytest.mark.parametrize("q, k", [(7, 1), (13, 5), (101, 37), (101, 50)])
def test_against_hurwitz(q, k):
    c = chi(q, k)
    assert abs(l_star(c).value - hurwitz_oracle(c)) < 1e-8


def test_principal():
    q = 5
    assert abs(l_principal_exact(get_context(q)) - zeta_half() * (1 - 5 ** -0.5)) < 1e-15
    assert abs(l_principal_exact(10 ** 12 + 39) - zeta_half()) < 1e-5
    assert l_value(chi(5, 0)) == complex(l_principal_exact(5))
    # L* at chi_0 is a different number, bounded by C X^(1/2) q^(1/4)
    for q in (101, 1009):
        for X in (0.5, 1.0, 2.0):
            star = l_star(chi(q, 0), AfeParams(X)).value
            assert abs(star) <= 3.0 * X ** 0.5 * q ** 0.25


def test_epsilon_factor():
    for k in range(1, 100):
        c = chi(101, k)
        assert abs(abs(epsilon_factor(c)) - 1) < 1e-6
        tau = get_context(101).gauss_sums
        assert abs(tau[k] * tau[-k % 100] - (-1) ** k * 101) < 1e-9
        # the i^kappa factors absorb chi(-1): the root numbers multiply to 1
        assert abs(epsilon_factor(c) * epsilon_factor(c.conj()) - 1) < 1e-6
    assert abs(epsilon_factor(chi(5, 2)) - 1) < 1e-12
    with pytest.raises(PrimitivityRequiredError):
        epsilon_factor(chi(5, 0))


def test_x_independence_mod101():
    worst = max(afe_consistency_residual(chi(101, k), 1.0, 2.0) for k in range(1, 100))
    assert worst < 1e-7
    assert afe_consistency_residual(chi(101, 3), 1.5, 1.5) == 0
    with pytest.raises(PrimitivityRequiredError):
        afe_consistency_residual(chi(101, 0), 1, 2)


def test_x_independence_mod1009_random():
    rng = np.random.default_rng(7)
    for k in rng.integers(1, 1008, size=50):
        assert afe_consistency_residual(chi(1009, int(k)), 0.5, 2.0) < 1e-7


def test_sweep_matches_direct_and_symmetries():
    q = 211
    ctx = get_context(q)
    sweep = l_star_sweep(ctx, AfeParams(1.3))
    direct = np.array([l_star(chi(q, k), AfeParams(1.3)).value for k in range(q - 1)])
    assert np.max(np.abs(sweep - direct)) < 1e-12
    # conjugation symmetry and the functional equation closure
    assert np.max(np.abs(sweep[1:] - np.conj(sweep[1:][::-1]))) < 1e-9
    for k in range(1, q - 1):
        c = chi(q, k)
        lhs = completed_l(c, sweep[k])
        rhs = epsilon_factor(c) * completed_l(c.conj(), sweep[(-k) % (q - 1)])
        assert abs(lhs - rhs) <= 1e-7 * max(1.0, abs(lhs))
    sub = l_star_sweep(ctx, AfeParams(1.3), ks=[5, 2, 5])
    assert np.array_equal(sub, sweep[[5, 2, 5]])
