import math
from fractions import Fraction as F

import pytest
from hypothesis import given

from colombeau.errors import DomainError
from colombeau.fermat import (
    fr_decompose,
    fr_extend,
    fr_is_first_order,
    fr_leq,
    fr_normalize,
    fr_ring_op,
)
from colombeau.literals import parse_fermat
from strategies import fermat_reals, first_order


def T(text):
    return parse_fermat(text)


def test_normalize_drops_little_oh_terms():
    x = fr_normalize([(0, 2), (1.3, 1), (0.7, 4)])
    assert [(float(e), c) for e, c in x.terms] == [(0.0, 2), (0.7, 4)]


def test_normalize_cancellation_and_exponent_one_kept():
    assert fr_normalize([(F(1, 2), 3), (F(1, 2), -3)]).is_zero
    assert fr_normalize([(F(1, 2), 1), (1, 1)]) == T("t^(1/2) + t")


def test_ring_examples():
    assert fr_ring_op("mul", T("t^(3/5)"), T("t^(3/5)")).is_zero
    assert fr_ring_op("mul", T("1 + t^(1/2)"), T("1 + t^(1/2)")) == T("1 + 2*t^(1/2) + t")
    assert fr_ring_op("add", T("2 + t"), T("-2")) == T("t")


def test_order_examples():
    assert fr_leq(T("t"), T("t^(1/2)"))
    assert fr_leq(T("0"), T("t^(1/2) - t"))
    assert not fr_leq(T("t^(1/2)"), T("0"))


def test_first_order_examples():
    assert fr_is_first_order(T("t^(3/5)"))
    assert not fr_is_first_order(T("t^(1/2)"))
    assert fr_is_first_order(T("t^(7/10) + t"))


def test_extend_examples():
    assert fr_extend("exp(x)", T("t^(3/5)")) == T("1 + t^(3/5)")
    y = fr_extend("sin(x)", fr_normalize([(0, math.pi / 2), (F(1, 2), 1)]))
    assert y == T("1 - (1/2)*t")
    assert fr_extend("x^2", T("3 + t^(7/10)")) == T("9 + 6*t^(7/10)")


def test_extend_outside_domain():
    with pytest.raises(DomainError):
        fr_extend("log(x)", T("-1 + t"))


def test_decompose_examples():
    assert fr_decompose(T("2 + 3*t^(1/2)")) == (2, T("3*t^(1/2)"))
    st, d = fr_decompose(T("t"))
    assert st == 0 and d == T("t")
    st, d = fr_decompose(T("0"))
    assert st == 0 and d.is_zero


@given(fermat_reals(), fermat_reals(), fermat_reals())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(fermat_reals(), fermat_reals())
def test_total_order(a, b):
    assert fr_leq(a, b) or fr_leq(b, a)
    if fr_leq(a, b) and fr_leq(b, a):
        assert a == b


@given(first_order(), first_order())
def test_first_order_nilpotent(h, k):
    assert fr_is_first_order(h)
    assert (h * h).is_zero
    assert ((h + k) * (h + k)) == 2 * h * k


@given(fermat_reals(), first_order())
def test_tangent_identity(x, h):
    # f(x + h) = f(x) + h f'(x) for first-order h, with f' extended at x
    assert fr_extend("x^3 - 2*x", x + h) == fr_extend("x^3 - 2*x", x) + h * fr_extend("3*x^2 - 2", x)
    st, _ = fr_decompose(x)
    assert fr_extend("sin(x)", st + h) == fr_extend("sin(x)", st) + h * math.cos(st)


@given(fermat_reals())
def test_decompose_sum(x):
    st, d = fr_decompose(x)
    assert d + st == x
    assert d.standard_part == 0


@given(fermat_reals())
def test_fermat_round_trip(x):
    assert parse_fermat(str(x)) == x
