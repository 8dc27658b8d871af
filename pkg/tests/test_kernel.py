"""The compiled and pure-Python term kernels agree exactly."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lgmf import KERNEL_BACKEND
from lgmf import _kernel_py as pure

cy = pytest.importorskip("lgmf._kernel_cy")


def terms_strategy(width=3, max_deg=4, max_terms=6):
    exp = st.tuples(*[st.integers(0, max_deg) for _ in range(width)])
    coeff = st.builds(Fraction, st.integers(-20, 20).filter(bool),
                      st.integers(1, 7))
    return st.dictionaries(exp, coeff, max_size=max_terms)


def test_backend_identifiers():
    assert pure.BACKEND == "python"
    assert cy.BACKEND == "cython"
    assert KERNEL_BACKEND in ("python", "cython")


@given(terms_strategy(), terms_strategy())
def test_add_agrees(a, b):
    assert pure.terms_add(a, b) == cy.terms_add(a, b)


@given(terms_strategy(), terms_strategy())
def test_mul_agrees(a, b):
    assert pure.terms_mul(a, b) == cy.terms_mul(a, b)


@given(terms_strategy(), st.builds(Fraction, st.integers(-9, 9),
                                   st.integers(1, 5)))
def test_scale_agrees(a, c):
    assert pure.terms_scale(a, c) == cy.terms_scale(a, c)


@given(terms_strategy(), st.tuples(*[st.integers(0, 3)] * 3),
       st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)))
def test_mul_term_agrees(a, exp, c):
    assert pure.terms_mul_term(a, exp, c) == cy.terms_mul_term(a, exp, c)


@given(terms_strategy(), terms_strategy())
def test_no_zero_coefficients_stored(a, b):
    for backend in (pure, cy):
        for out in (backend.terms_add(a, b), backend.terms_mul(a, b)):
            assert all(out.values())
