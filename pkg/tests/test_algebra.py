from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from tcsproofs.algebra import (
    ONE,
    ZERO,
    Monomial,
    Polynomial,
    bits_of,
    expand_one_minus,
    index_of,
    literal,
    mono_eval,
    mono_mul,
    poly_eval,
    total_coefficient_size,
)


def test_monomial_normalizes_literals():
    m = Monomial((3, 1, 3), (2,))
    assert m.positives == (1, 3)
    assert m.negatives == (2,)
    assert m.degree == 3
    assert str(m) == "x1 !x2 x3"


def test_contradictory_literals_collapse_to_zero():
    assert Monomial((1,), (1,)) == ZERO
    assert mono_mul(literal(4), literal(4, False)).zero
    assert mono_mul(ZERO, ONE).zero


def test_negative_variable_rejected():
    with pytest.raises(ValueError):
        Monomial((-1,))


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("x3 !x7 x12", Monomial((3, 12), (7,))),
        ("1", ONE),
        ("", ONE),
        ("0", ZERO),
    ],
)
def test_parse(text, expected):
    assert Monomial.parse(text) == expected


@pytest.mark.parametrize("text", ["y3", "x", "!!x1", "x1 -x2"])
def test_parse_malformed(text):
    with pytest.raises(ValueError):
        Monomial.parse(text)


def test_mono_eval_and_mask_agree():
    m = Monomial((0, 2), (1,))
    index = np.arange(8)
    mask = m.mask(index)
    for k in range(8):
        assert mask[k] == bool(mono_eval(m, bits_of(k, 3)))
    assert list(np.flatnonzero(mask)) == [5]


def test_mono_eval_short_assignment():
    with pytest.raises(ValueError):
        mono_eval(Monomial((4,)), (1, 1, 1))


def test_divides_and_quotient():
    a = Monomial((1,), (2,))
    b = Monomial((1, 3), (2,))
    assert a.divides(b)
    assert not b.divides(a)
    assert a.divides(ZERO)
    assert b.quotient(a) == Monomial((3,))


@pytest.mark.parametrize(
    "m", [Monomial((0, 1)), Monomial((2,), (0, 1)), Monomial((), (0,)), ONE]
)
def test_expand_one_minus(m):
    terms = expand_one_minus(m)
    for x in itertools.product((0, 1), repeat=3):
        assert sum(mono_eval(t, x) for t in terms) == 1 - mono_eval(m, x)
    # the terms are disjoint indicators
    assert all(mono_mul(s, t).zero for s, t in itertools.combinations(terms, 2))


def test_expand_one_minus_zero():
    with pytest.raises(ValueError):
        expand_one_minus(ZERO)


def test_polynomial_merges_and_drops_zeros():
    x0 = literal(0)
    p = Polynomial.from_terms([(x0, 2), (x0, -2), (ONE, Fraction(1, 2)), (ZERO, 5)])
    assert p.terms == {ONE: Fraction(1, 2)}
    assert not (p - p)


def test_polynomial_arithmetic():
    x0, x1 = literal(0), literal(1)
    p = Polynomial.from_terms([(x0, 1), (x1, -3)])
    q = p * p
    for x in itertools.product((0, 1), repeat=2):
        assert q(x) == p(x) ** 2
    assert total_coefficient_size(p) == 4
    assert (p * 2)((1, 1)) == -4
    assert (p * literal(0, False))((1, 1)) == 0


def test_evaluate_matches_pointwise():
    p = Polynomial.from_terms(
        [(Monomial((0,), (2,)), Fraction(1, 3)), (Monomial((1,)), -2), (ONE, 1)]
    )
    values = p.evaluate(np.arange(8))
    for k in range(8):
        assert values[k] == poly_eval(p, bits_of(k, 3))


def test_polynomial_list_format():
    p = Polynomial.from_terms([(Monomial((0,), (2,)), Fraction(-1, 3)), (ONE, 1)])
    items = p.to_list()
    assert {"monomial": "x0 !x2", "coeff": "-1/3"} in items
    assert Polynomial.from_list(items) == p


def test_cube_index():
    assert bits_of(5, 3) == (1, 0, 1)
    assert index_of((1, 0, 1)) == 5
    assert index_of(bits_of(1234, 12)) == 1234
