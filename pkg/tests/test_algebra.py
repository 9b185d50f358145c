import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffincidence.algebra import (
    DivisorStats,
    additive_character,
    divisor_stats,
    fe_add,
    fe_inv,
    fe_mul,
    fe_neg,
    fe_pow,
    fe_sub,
    field_make,
    parse_prime_power,
    ring_make,
    trace,
)
from ffincidence.errors import InvalidInput

CONTEXTS = [(3, 1), (5, 1), (3, 2), (5, 2), (3, 3), (7, 2)]


def _has_root(f, p):
    return any(sum(c * x**i for i, c in enumerate(f)) % p == 0 for x in range(p))


def smallest_irreducible_by_roots(p, k):
    """Degree <= 3 oracle: irreducible iff no root in Z_p."""
    for digits in itertools.product(range(p), repeat=k):
        f = list(reversed(digits)) + [1]
        if not _has_root(f, p):
            return tuple(f)


def test_field_make_examples():
    assert field_make(3, 1).modulus == (0, 1)
    assert field_make(3, 2).modulus == (1, 0, 1)
    with pytest.raises(InvalidInput):
        field_make(2, 1)


@pytest.mark.parametrize("p,k", [(9, 1), (15, 2), (3, 0), (1, 1)])
def test_field_make_rejects(p, k):
    with pytest.raises(InvalidInput):
        field_make(p, k)


@pytest.mark.parametrize("p,k", [(3, 2), (5, 2), (7, 2), (3, 3), (5, 3)])
def test_modulus_is_smallest_rootless(p, k):
    assert field_make(p, k).modulus == smallest_irreducible_by_roots(p, k)


def test_modulus_deterministic_degree_four():
    F = field_make(3, 4)
    assert F.modulus == field_make(3, 4).modulus
    # x^((q-1)) = 1 for every nonzero element iff the quotient is a field
    assert all(fe_pow(F, x, F.q - 1) == 1 for x in range(1, F.q))


def test_fe_pow_examples():
    F3 = field_make(3)
    assert fe_pow(F3, 2, 3) == 2
    assert fe_pow(F3, 2, 2) == 1
    F9 = field_make(3, 2)
    t = F9.elem((0, 1))
    assert fe_pow(F9, t, 2) == F9.elem((2,))


def test_trace_examples():
    F9 = field_make(3, 2)
    assert trace(F9, 1) == 2
    assert trace(F9, F9.elem((0, 1))) == 0
    for ctx in (field_make(5), F9, field_make(3, 3)):
        assert trace(ctx, 0) == 0


def test_character_examples():
    F3 = field_make(3)
    assert additive_character(F3, 0, 2) == 1
    assert additive_character(F3, 1, 1) == pytest.approx(cmath.exp(2j * cmath.pi / 3))
    assert abs(sum(additive_character(F3, 1, x) for x in range(3))) < 1e-12


def test_divisor_stats_examples():
    assert divisor_stats(15) == DivisorStats(tau=4, gamma=3)
    assert (divisor_stats(9).tau, divisor_stats(9).gamma) == (3, 3)
    assert (divisor_stats(7).tau, divisor_stats(7).gamma) == (2, 7)
    with pytest.raises(InvalidInput):
        divisor_stats(12)


@given(st.integers(min_value=1, max_value=2001).filter(lambda n: n % 2 == 1 and n >= 3))
def test_divisor_stats_brute_force(q):
    divs = [f for f in range(1, q + 1) if q % f == 0]
    stats = divisor_stats(q)
    assert stats.tau == len(divs)
    assert stats.gamma == divs[1]
    assert q % stats.gamma == 0


def test_ring_make():
    assert ring_make(15).q == 15
    for bad in (2, 4, 1):
        with pytest.raises(InvalidInput):
            ring_make(bad)


@pytest.mark.parametrize("text,q", [("3^2", 9), ("9", 9), ("5**3", 125), ("7", 7)])
def test_parse_prime_power(text, q):
    assert parse_prime_power(text).q == q


@pytest.mark.parametrize("text", ["4", "15", "x", "2^3"])
def test_parse_prime_power_rejects(text):
    with pytest.raises(InvalidInput):
        parse_prime_power(text)


def _triples(ctx):
    return st.tuples(*(st.integers(0, ctx.q - 1),) * 3)


@pytest.mark.parametrize("p,k", CONTEXTS)
def test_field_axioms(p, k):
    ctx = field_make(p, k)

    @settings(max_examples=1000, deadline=None)
    @given(_triples(ctx))
    def check(abc):
        a, b, c = abc
        assert fe_add(ctx, fe_add(ctx, a, b), c) == fe_add(ctx, a, fe_add(ctx, b, c))
        assert fe_mul(ctx, fe_mul(ctx, a, b), c) == fe_mul(ctx, a, fe_mul(ctx, b, c))
        assert fe_mul(ctx, a, fe_add(ctx, b, c)) == fe_add(
            ctx, fe_mul(ctx, a, b), fe_mul(ctx, a, c)
        )
        assert fe_add(ctx, a, fe_neg(ctx, a)) == 0
        assert fe_sub(ctx, fe_add(ctx, a, b), b) == a
        if a:
            assert fe_mul(ctx, a, fe_inv(ctx, a)) == 1

    check()


@pytest.mark.parametrize("p,k", CONTEXTS)
def test_frobenius_fixes_trace(p, k):
    ctx = field_make(p, k)
    for x in range(1, ctx.q):
        assert trace(ctx, fe_pow(ctx, x, p)) == trace(ctx, x)


@pytest.mark.parametrize("p,k", CONTEXTS)
def test_trace_is_additive_and_onto(p, k):
    ctx = field_make(p, k)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, ctx.q, size=(200, 2)):
        assert trace(ctx, fe_add(ctx, a, b)) == (trace(ctx, a) + trace(ctx, b)) % p
    assert set(ctx.trace_table.tolist()) == set(range(p))


@pytest.mark.parametrize("p,k", CONTEXTS)
def test_character_multiplicative(p, k):
    ctx = field_make(p, k)
    rng = np.random.default_rng(1)
    for m, x, y in rng.integers(0, ctx.q, size=(300, 3)):
        lhs = additive_character(ctx, m, fe_add(ctx, x, y))
        rhs = additive_character(ctx, m, x) * additive_character(ctx, m, y)
        assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("p,k", CONTEXTS)
def test_character_orthogonality(p, k):
    ctx = field_make(p, k)
    for m in range(ctx.q):
        total = sum(additive_character(ctx, m, x) for x in range(ctx.q))
        assert abs(total - (ctx.q if m == 0 else 0)) <= 1e-9 * ctx.q


@pytest.mark.parametrize("p,k", CONTEXTS)
def test_tables_match_scalar_ops(p, k):
    ctx = field_make(p, k)
    rng = np.random.default_rng(2)
    for a, b in rng.integers(0, ctx.q, size=(200, 2)):
        assert ctx.add_table[a, b] == fe_add(ctx, a, b)
        assert ctx.sub_table[a, b] == fe_sub(ctx, a, b)
        assert ctx.mul_table[a, b] == fe_mul(ctx, a, b)
    assert ctx.pow_table(3)[[0, 1]].tolist() == [0, 1]


def test_coeff_roundtrip():
    F = field_make(5, 3)
    for x in range(F.q):
        assert F.elem(F.coeffs(x)) == x
    with pytest.raises(InvalidInput):
        F.elem((5, 0, 0))
