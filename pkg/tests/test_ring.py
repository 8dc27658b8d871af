"""Polynomial arithmetic, difference quotients, text grammar."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgmf.ring import (ContextMismatch, RingContext, UnknownVariable,
                       divided_difference, divided_difference_ordered,
                       embed, format_poly, parse_poly, partial_derivative,
                       rename, substitute)


def doubled(n):
    names = [f"x{i}" for i in range(1, n + 1)]
    primes = [f"x{i}'" for i in range(1, n + 1)]
    ctx = RingContext(names + primes)
    pairs = list(zip(names, primes))
    return ctx, names, primes, pairs


def poly_strategy(ctx, names=None, max_deg=3, max_terms=5):
    """Random sparse polynomials supported on the given variables."""
    names = list(ctx.names) if names is None else names
    idx = [ctx.index(n) for n in names]

    def build(pairs):
        terms = {}
        for exps, num, den in pairs:
            full = [0] * len(ctx.names)
            for k, e in zip(idx, exps):
                full[k] = e
            c = Fraction(num, den)
            if c:
                key = tuple(full)
                terms[key] = terms.get(key, Fraction(0)) + c
        return ctx.poly({k: v for k, v in terms.items() if v})

    entry = st.tuples(
        st.tuples(*[st.integers(0, max_deg) for _ in names]),
        st.integers(-9, 9), st.integers(1, 4))
    return st.lists(entry, max_size=max_terms).map(build)


# -- ring axioms -------------------------------------------------------------

CTX3 = RingContext(["x", "y", "z"])


@given(poly_strategy(CTX3), poly_strategy(CTX3), poly_strategy(CTX3))
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p + CTX3.zero() == p
    assert p * CTX3.one() == p


@given(poly_strategy(CTX3))
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), CTX3) == p


# -- difference quotients ----------------------------------------------------

def _prime_through(p, pairs, k):
    """Replace the first k unprimed variables by their primes."""
    return substitute(p, {u: pr for u, pr in pairs[:k]})


@pytest.mark.parametrize("n", [1, 2, 3])
@settings(max_examples=100)
@given(data=st.data())
def test_leibniz_rule(n, data):
    ctx, names, primes, pairs = doubled(n)
    f = data.draw(poly_strategy(ctx, names))
    g = data.draw(poly_strategy(ctx, names))
    for i in range(1, n + 1):
        lhs = divided_difference(f * g, i, pairs)
        rhs = (divided_difference(f, i, pairs) * _prime_through(g, pairs, i)
               + _prime_through(f, pairs, i - 1)
               * divided_difference(g, i, pairs))
        assert lhs == rhs


@pytest.mark.parametrize("n", [1, 2, 3])
@settings(max_examples=100)
@given(data=st.data())
def test_telescoping(n, data):
    ctx, names, primes, pairs = doubled(n)
    f = data.draw(poly_strategy(ctx, names))
    total = ctx.zero()
    for i in range(1, n + 1):
        u, pr = pairs[i - 1]
        total = total + (ctx.gen(u) - ctx.gen(pr)) * divided_difference(
            f, i, pairs)
    assert total == f - _prime_through(f, pairs, n)


@pytest.mark.parametrize("n", [1, 2, 3])
@settings(max_examples=60)
@given(data=st.data())
def test_collapse_to_partial_derivative(n, data):
    ctx, names, primes, pairs = doubled(n)
    f = data.draw(poly_strategy(ctx, names))
    collapse = {pr: u for u, pr in pairs}
    for i in range(1, n + 1):
        got = substitute(divided_difference(f, i, pairs), collapse)
        assert got == partial_derivative(f, names[i - 1])


@settings(max_examples=100)
@given(data=st.data())
def test_ordered_identity_permutation_agrees(data):
    ctx, names, primes, pairs = doubled(3)
    f = data.draw(poly_strategy(ctx, names))
    for i in range(1, 4):
        assert (divided_difference_ordered(f, i, (1, 2, 3), pairs)
                == divided_difference(f, i, pairs))


def test_ordered_swapped_example():
    ctx, names, primes, pairs = doubled(2)
    f = ctx.gen("x1") * ctx.gen("x2")
    # with the order (2 1), x2 is substituted before x1
    assert divided_difference_ordered(f, 1, (2, 1), pairs) == ctx.gen("x2'")
    assert divided_difference_ordered(f, 2, (2, 1), pairs) == ctx.gen("x1")


def test_ordered_constant_vanishes():
    ctx, names, primes, pairs = doubled(2)
    c = ctx.const(Fraction(7, 3))
    for i in (1, 2):
        assert divided_difference_ordered(c, i, (2, 1), pairs).is_zero()


def test_ordered_rejects_non_permutation():
    ctx, names, primes, pairs = doubled(2)
    with pytest.raises(ValueError):
        divided_difference_ordered(ctx.gen("x1"), 1, (1, 1), pairs)


# -- contexts, renaming, errors ----------------------------------------------

def test_embed_and_context_errors():
    small = RingContext(["x"])
    big = RingContext(["x", "y"])
    p = small.gen("x") ** 2
    q = embed(p, big)
    assert q.ctx == big and q == big.gen("x") ** 2
    with pytest.raises((ContextMismatch, UnknownVariable, KeyError)):
        embed(big.gen("y"), small)
    with pytest.raises(ContextMismatch):
        small.gen("x") + big.gen("y")


def test_rename_injectivity_enforced():
    ctx = RingContext(["x", "y"])
    p = ctx.gen("x") + ctx.gen("y")
    assert rename(p, {"x": "y", "y": "x"}) == p
    with pytest.raises(ValueError):
        rename(p, {"x": "y"})
    # merging substitution is the non-injective counterpart
    assert substitute(p, {"x": "y"}) == 2 * ctx.gen("y")


def test_grammar_rational_coefficients():
    ctx = RingContext(["x"])
    assert parse_poly("3/2*x - 1/2*x", ctx) == ctx.gen("x")
    assert parse_poly("x^3-2*x+1", ctx) == parse_poly(
        " x^3 - 2*x + 1 ", ctx)
