import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from colombeau.errors import DomainError
from colombeau.fermat_reyes import (
    incremental_ratio,
    incremental_ratio_numeric,
    near_std_thickening,
    openness_check,
    thickening_contains,
    verify_fr,
)
from colombeau.genfun import GenFunExpr, gf_eval_gen
from colombeau.gennum import GenNum
from colombeau.literals import parse_gennum, parse_openset
from strategies import ORACLE_REGIME, infinitesimals

G = parse_gennum
U01 = parse_openset("(0,1)")


def test_thickening_examples():
    assert thickening_contains(U01, 0.2, 0.5)
    assert not thickening_contains(U01, 0.2, 0.9)
    assert thickening_contains(U01, 0.8, -0.5)


def test_near_std_thickening_examples():
    t = near_std_thickening(U01, G("1/4 + eps"), G("1/2 - eps^2"))
    assert t.contained and t.a == pytest.approx(0.125)
    assert near_std_thickening(U01, G("1/3 + eps^(1/2)"), G("eps")).contained
    assert not near_std_thickening(U01, G("1/2"), G("3/5")).contained


def test_ratio_examples():
    assert incremental_ratio("x^2", G("3 + eps"), G("eps")) == G("6 + 3*eps")
    r = incremental_ratio("sin(x)", G("0"), G("eps"), U="(-10,10)")
    ref = [(0, 1), (2, -1 / 6), (4, 1 / 120), (6, -1 / 5040)]
    for (e, c), (e2, c2) in zip(r.branches[0].terms, ref):
        assert e == e2 and float(c) == pytest.approx(c2, rel=1e-12)
    r = incremental_ratio("exp(x)", G("1 + eps"), G("0"))
    assert r.agrees_with(gf_eval_gen("exp(x)", G("1 + eps")))
    assert float(r.branches[0].coefficient(2)) == pytest.approx(math.e / 2, rel=1e-12)


def test_numeric_examples():
    assert incremental_ratio_numeric("sin(x)", 0.5, 0, 0.1) == pytest.approx(0.9983341665, abs=1e-10)
    assert incremental_ratio_numeric("x^2", 0.5, 3, 1) == pytest.approx(7, abs=1e-12)
    assert incremental_ratio_numeric("x/eps", 0.01, 0.3, -2.0) == pytest.approx(100, rel=1e-12)


def test_verify_examples():
    rep = verify_fr("x^2", G("3 + eps"), G("eps"))
    assert rep.passed and rep.rows[0]["value"] == 0
    rep = verify_fr("sin(x)", G("1/2"), G("eps^(1/2)"))
    assert rep.passed
    assert {r["check"] for r in rep.rows if r["passed"]} >= {"residual", "division path"}
    log = GenFunExpr.parse("log(x)", "(0,inf)")
    assert verify_fr(log, G("1 + eps"), G("2")).passed
    with pytest.raises(DomainError):
        verify_fr(log, G("1 + eps"), G("-2"))


@settings(max_examples=25)
@given(
    st.sampled_from(["x^3 - x", "sin(x)", "exp(x)", "cos(x)*x"]),
    st.fractions(-1, 1, max_denominator=6),
    infinitesimals(max_branches=1, **ORACLE_REGIME),
    infinitesimals(max_branches=2, **ORACLE_REGIME),
)
def test_fr_identity(f, c, dx, h):
    rep = verify_fr(f, dx + c, h)
    assert rep.passed, rep.to_plain()


@settings(max_examples=20)
@given(st.fractions(F(1, 10), F(9, 10), max_denominator=10), st.fractions(-1, 1, max_denominator=10), st.integers(0, 10**6))
def test_openness(x0, h0, seed):
    X, H = G(f"{x0} + eps"), G(f"{h0} + eps^2")
    t = near_std_thickening(U01, X, H)
    assume(t.contained)
    r = random.Random(seed)
    perturbations = []
    for _ in range(100):
        p = GenNum.const(F(r.uniform(-0.999, 0.999) * t.a / 2).limit_denominator(10**6)) + GenNum.eps(F(1, 2), r.randint(-3, 3))
        q = GenNum.const(F(r.uniform(-0.999, 0.999) * t.a / 2).limit_denominator(10**6)) + GenNum.eps(1, r.randint(-3, 3))
        perturbations.append((p, q))
    assert openness_check(U01, X, H, t.a, perturbations)


@given(st.sampled_from(["x^2", "sin(x)", "exp(x)"]), st.fractions(-2, 2, max_denominator=4), infinitesimals(max_branches=1))
def test_tangent_with_nilpotent_h(f, x0, d):
    # h = eps^a with 2a >= Q: h^2 vanishes at the working order, so f(x+h) = f(x) + h f'(x)
    h = GenNum.eps(20, 1)
    X = d + x0
    lhs = gf_eval_gen(f, X + h)
    rhs = gf_eval_gen(f, X) + h * gf_eval_gen(GenFunExpr.parse(f).derivative(), X)
    assert lhs.agrees_with(rhs, tol=1e-12)
