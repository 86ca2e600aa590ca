from __future__ import annotations

from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectree.alg import (RATIONAL, AlgReal, FieldError, FieldSpec, field_from_radicands, parse,
                          sqrt_of, squarefree_decompose)

getcontext().prec = 60

R2, R3, R5 = sqrt_of(2), sqrt_of(3), sqrt_of(5)


def as_decimal(x: AlgReal) -> Decimal:
    """Independent evaluation with 60-digit square roots."""
    d1, d2 = x.field.d1, x.field.d2
    basis = [Decimal(1), Decimal(d1).sqrt(), Decimal(d2).sqrt(), Decimal(d1 * d2).sqrt()]
    return sum((Decimal(c.numerator) / Decimal(c.denominator) * b for c, b in zip(x.coords, basis)),
               Decimal(0))


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def elements(draw, field=FieldSpec(2, 3)):
    c = [draw(fractions) for _ in range(field.degree)] + [Fraction(0)] * (4 - field.degree)
    return AlgReal(field, c)


quadratic = st.sampled_from([2, 3, 5, 6, 7, 10]).map(lambda d: FieldSpec(d, 1))


def test_squarefree_decompose():
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(72) == (6, 2)
    assert squarefree_decompose(49) == (7, 1)
    with pytest.raises(ValueError):
        squarefree_decompose(0)


def test_field_spec_validation():
    with pytest.raises(FieldError):
        FieldSpec(4, 1)
    with pytest.raises(FieldError):
        FieldSpec(1, 3)
    with pytest.raises(FieldError):
        FieldSpec(3, 3)
    assert FieldSpec(2, 3).degree == 4
    assert FieldSpec(2, 3).radicands == {2, 3, 6}


def test_field_from_radicands():
    assert field_from_radicands([]) == RATIONAL
    assert field_from_radicands([8]) == FieldSpec(2, 1)
    assert field_from_radicands([2, 3, 6]) == FieldSpec(2, 3)
    assert field_from_radicands([2, 18]) == FieldSpec(2, 1)
    with pytest.raises(FieldError):
        field_from_radicands([2, 3, 5])


def test_sqrt_of_reduces():
    assert sqrt_of(9) == 3
    assert sqrt_of(8) == 2 * R2
    assert sqrt_of(12).field == FieldSpec(3, 1)
    assert (sqrt_of(8) * sqrt_of(2)) == 4


def test_inverses():
    assert R2.invert() == R2 / 2
    assert (1 + R2).invert() == R2 - 1
    assert (R2 - 1).invert() == 1 + R2
    x = R2 + R3
    assert x * x.invert() == 1
    assert x.invert() == R3 - R2
    with pytest.raises(ZeroDivisionError):
        AlgReal.rational(0).invert()


def test_mixed_fields_embed():
    # sqrt(6) lives in Q(sqrt2, sqrt3) as the product basis element
    assert R2 * R3 == sqrt_of(6)
    s = R2 + R3 + sqrt_of(6)
    assert s.field == FieldSpec(2, 3)
    assert (s - sqrt_of(6)).embed_down(FieldSpec(2, 3)) == R2 + R3


def test_canonical_key_ignores_field():
    a = (R2 + R3) - R3
    assert a == R2
    assert hash(a) == hash(R2)
    assert len({a, R2, 2 * R2 / 2}) == 1


def test_signs():
    assert (R2 - Fraction(141421, 100000)).sign() == 1
    assert (R2 - Fraction(141422, 100000)).sign() == -1
    assert (R2 + R3 - Fraction(315, 100)).sign() == -1  # 3.1462...
    with pytest.raises(FieldError):
        R2 + R3 + sqrt_of(10)
    assert (R5 - 2).sign() == 1
    assert AlgReal.rational(0).sign() == 0
    assert R2 < R3 < 2 < R5


def test_sign_of_nearly_cancelling_value():
    # (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6 ~ 9.898979485566356; the gap below is ~2e-16
    x = 5 + 2 * sqrt_of(6) - Fraction(9898979485566356, 10**15)
    assert x.sign() == 1


def test_approx_width_and_containment():
    lo, hi = (R2 + R3).approx(Fraction(1, 10**20))
    assert hi - lo <= Fraction(1, 10**20)
    v = as_decimal(R2 + R3)
    assert Decimal(lo.numerator) / lo.denominator <= v <= Decimal(hi.numerator) / hi.denominator


def test_str_and_parse():
    assert str(AlgReal.rational(Fraction(3, 2))) == "3/2"
    x = parse("(sqrt(5)+1)/2")
    assert x * x == x + 1
    assert str(x) == "1/2 + 1/2*sqrt(5)"
    assert parse("sqrt(8)") == 2 * R2
    assert parse("-3/4") == Fraction(-3, 4)
    assert parse(str(R2 + R3 + sqrt_of(6))) == R2 + R3 + sqrt_of(6)
    for bad in ["sqrt(2.5)", "x", "2**3", "sqrt(-1)", "sqrt(0)", "import os"]:
        with pytest.raises(ValueError):
            parse(bad)


def test_json_round_trip():
    for x in [AlgReal.rational(0), R2 / 3, 1 + R2 + R3 - sqrt_of(6) / 7]:
        assert AlgReal.from_json(x.to_json()) == x
    assert AlgReal.from_json("sqrt(2)") == R2
    assert AlgReal.from_json(3) == 3


def test_immutable():
    with pytest.raises(AttributeError):
        R2.coords = (0, 0, 0, 0)


@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0
    assert a * b == b * a


@given(elements())
def test_inverse_is_inverse(a):
    if a.is_zero():
        return
    assert a * a.invert() == 1
    assert (a.invert()).invert() == a


@settings(max_examples=200)
@given(elements())
def test_sign_matches_high_precision(a):
    v = as_decimal(a)
    expected = (v > 0) - (v < 0) if abs(v) > Decimal("1e-40") else None
    if a.is_zero():
        assert a.sign() == 0
    elif expected is not None:
        assert a.sign() == expected


@given(quadratic.flatmap(elements))
def test_quadratic_parse_round_trip(a):
    assert parse(str(a)) == a
    assert AlgReal.from_json(a.to_json()) == a


@given(elements(), elements())
def test_order_is_consistent_with_subtraction(a, b):
    assert (a < b) == ((b - a).sign() > 0)
    assert (a == b) == (a - b).is_zero()
