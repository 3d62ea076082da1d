import pytest
from hypothesis import given, settings, strategies as st

from coset_resonance.errors import ModulusError, UnitRequiredError
from coset_resonance.modarith import (
    PrimeContext,
    divisors,
    dlog,
    find_primitive_root,
    get_context,
    is_prime,
    mod_inv,
    primes_between,
)

SMALL_PRIMES = primes_between(3, 400)


@pytest.mark.parametrize("q, g", [(3, 2), (7, 3), (101, 2)])
def test_primitive_root(q, g):
    assert find_primitive_root(q) == g


@pytest.mark.parametrize("bad", [1, 2, 4, 9, 100, -7])
def test_rejects_bad_modulus(bad):
    with pytest.raises(ModulusError):
        find_primitive_root(bad)
    with pytest.raises(ModulusError):
        PrimeContext(bad)


def test_rejects_float_and_bool_modulus():
    with pytest.raises(ModulusError):
        PrimeContext(7.5)
    with pytest.raises(ModulusError):
        PrimeContext(True)


@pytest.mark.parametrize("a, e", [(1, 0), (2, 2), (6, 3)])
def test_dlog_mod7(a, e):
    assert dlog(get_context(7), a) == e


@pytest.mark.parametrize("q, a, inv", [(7, 1, 1), (7, 3, 5), (5, 2, 3)])
def test_mod_inv(q, a, inv):
    assert mod_inv(get_context(q), a) == inv


def test_non_units_rejected():
    ctx = get_context(7)
    for f in (ctx.dlog, ctx.mod_inv):
        with pytest.raises(UnitRequiredError):
            f(14)


@pytest.mark.parametrize("q", [3, 5, 101, 1009, 7919, 9973])
def test_tables_are_inverse_bijections(q):
    ctx = get_context(q)
    assert sorted(ctx.power.tolist()) == list(range(1, q))
    assert (ctx.dlog_table[ctx.power] == range(q - 1)).all()
    assert ctx.dlog(1) == 0 and ctx.dlog(ctx.g) == 1 and ctx.dlog(q - 1) == (q - 1) // 2


def test_tables_read_only():
    ctx = get_context(11)
    with pytest.raises(ValueError):
        ctx.dlog_table[1] = 5


def test_primality_and_divisors():
    assert [p for p in range(50) if is_prime(p)] == primes_between(0, 50)
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


@given(st.sampled_from(SMALL_PRIMES), st.data())
@settings(max_examples=200, deadline=None)
def test_dlog_is_a_homomorphism(q, data):
    ctx = get_context(q)
    a = data.draw(st.integers(1, q - 1))
    b = data.draw(st.integers(1, q - 1))
    assert ctx.dlog(a * b % q) == (ctx.dlog(a) + ctx.dlog(b)) % (q - 1)
    assert ctx.mod_inv(ctx.mod_inv(a)) == a
    assert a * ctx.mod_inv(a) % q == 1
    assert pow(ctx.g, ctx.dlog(a), q) == a


def test_context_pickles_to_cached_instance():
    import pickle
    ctx = get_context(13)
    assert pickle.loads(pickle.dumps(ctx)) is ctx
