import math

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from invbraid.numfield import (
    INF,
    ONE,
    ZERO,
    FieldElement,
    LinearPoly,
    UnsupportedCoxeterEntry,
    evaluate,
    make_cos,
    sign,
)

R2, R3, R5 = FieldElement.sqrt(2), FieldElement.sqrt(3), FieldElement.sqrt(5)
F = lambda p, q=1: FieldElement(mpq(p, q))

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12).map(lambda f: mpq(f.numerator, f.denominator))
elements = st.lists(small_q, min_size=8, max_size=8).map(FieldElement.from_coords)
nonzero = elements.filter(bool)


def _mp(x: FieldElement):
    roots = [1, 2, 3, 5, 6, 10, 15, 30]
    with mpmath.workdps(80):
        return mpmath.fsum(mpmath.mpf(int(c.numerator)) / int(c.denominator) * mpmath.sqrt(r)
                           for c, r in zip(x.coords(), roots))


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_cos_matches_mpmath(m):
    with mpmath.workdps(60):
        want = -mpmath.cos(mpmath.pi / m)
        assert abs(_mp(make_cos(m)) - want) < mpmath.mpf(10) ** -50


def test_cos_special_values():
    assert make_cos(2) == ZERO
    assert make_cos(3) == F(-1, 2)
    assert make_cos(4) == -R2 / 2
    assert make_cos(INF) == F(-1)
    assert make_cos(1) == ONE


def test_cos_outside_field():
    with pytest.raises(UnsupportedCoxeterEntry, match="does not contain"):
        make_cos(7)


def test_sign_examples():
    assert sign(ZERO) == 0
    assert sign(FieldElement.sqrt(6) - 2) == 1
    assert sign(F(7, 5) - R2) == -1
    # a near cancellation that floats cannot settle
    close = (R2 + R3) ** 2 - 5 - 2 * FieldElement.sqrt(6)
    assert close == ZERO and sign(close) == 0


def test_evaluate_examples():
    x1, x2, x3 = LinearPoly.var(1), LinearPoly.var(2), LinearPoly.var(3)
    assert evaluate(x1 + LinearPoly(F(2)), {1: F(-2)}) == ZERO
    p = LinearPoly(F(1, 2)) + x1 * F(1, 2) - x2 + x3 * F(1, 2)
    assert evaluate(p, {1: F(2, 3), 2: F(4, 3), 3: ONE}) == ZERO
    assert evaluate(x1 * R2, {1: R2}) == F(2)


def test_evaluate_names_missing_variable():
    with pytest.raises(KeyError, match="x2"):
        evaluate(LinearPoly.var(1) + LinearPoly.var(2), {1: ONE})


def test_serialisation_roundtrip():
    x = F(3, 4) - R2 * F(2, 7) + R3 * R5
    assert x.to_json()[0] == "3/4"
    assert FieldElement.from_json(x.to_json()) == x


def test_linear_poly_canonical():
    x = LinearPoly.var(1)
    assert x - x == LinearPoly()
    assert (x * F(2) - x).variables() == (1,)
    assert (x + LinearPoly.var(2)) == (LinearPoly.var(2) + x)


@settings(max_examples=300, deadline=None)
@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=200, deadline=None)
@given(nonzero, elements)
def test_inverse(a, b):
    assert a * a.inverse() == ONE
    assert (a * b) * a.inverse() == b


@settings(max_examples=300, deadline=None)
@given(elements, elements)
def test_sign_multiplicative_and_matches_mpmath(a, b):
    assert sign(a * b) == sign(a) * sign(b)
    v = _mp(a)
    assert sign(a) == (0 if v == 0 else (1 if v > 0 else -1))


@settings(max_examples=200, deadline=None)
@given(elements)
def test_float_and_canonical_form(a):
    assert math.isclose(float(a), float(_mp(a)), rel_tol=1e-9, abs_tol=1e-9)
    again = FieldElement.from_coords(a.coords())
    assert again == a and hash(again) == hash(a) and again.coords() == a.coords()
    for c in a.coords():
        assert c.denominator > 0
