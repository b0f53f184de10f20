import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from colombeau import batch
from colombeau import expr as E
from colombeau.errors import DomainError, NotNearStandard
from colombeau.genfun import (
    Exhausted,
    GenFunExpr,
    Witness,
    eval_series,
    gf_continuity_bound,
    gf_derivative,
    gf_eval_gen,
    gf_eval_real,
    gf_oracle_error,
    gf_probe_nonzero,
    gf_seminorm,
    gf_valuation_estimate,
)
from colombeau.gennum import GenNum
from colombeau.literals import parse_gennum
from colombeau.series import EpsSeries
from colombeau.topology import SequenceSpec
from strategies import ORACLE_REGIME, near_standard

G = parse_gennum


def test_eval_real_examples():
    assert gf_eval_real("x/eps", 0.01, 0.5) == pytest.approx(50)
    assert gf_eval_real("sin(x)", 0.3, math.pi / 2) == pytest.approx(1)
    assert gf_eval_real("exp(-1/eps)*x", 0.1, 1) == pytest.approx(4.5399929762484854e-05, rel=1e-12)


def test_eval_gen_examples():
    assert gf_eval_gen("x^2", G("3 + eps")) == G("9 + 6*eps + eps^2")
    for k in (1, 2, 7):
        assert gf_eval_gen("x/eps", F(1, k)) == GenNum.eps(-1, F(1, k))
    s = gf_eval_gen("sin(x)", G("eps"))
    assert s.tail == 40
    assert s.branches[0].terms[:3] == ((1, 1), (3, F(-1, 6)), (5, F(1, 120)))


def test_eval_gen_domain():
    with pytest.raises(DomainError):
        gf_eval_gen(GenFunExpr.parse("log(x)", "(0,inf)"), G("-1 + eps"))
    with pytest.raises(NotNearStandard):
        gf_eval_gen("x", G("eps^(-1)"))


def test_derivative_examples():
    assert str(gf_derivative("x^2")) == "2*x"
    assert str(gf_derivative("sin(x)", 2)) == "-sin(x)"
    d = gf_derivative("x/eps")
    assert gf_eval_real(d, 0.25, 3.0) == pytest.approx(4.0)


def test_valuation_estimate_examples():
    assert gf_valuation_estimate("x/eps", (0, 1)).value == -1
    assert gf_valuation_estimate("x^2", (0, 1)).value == 0
    assert gf_valuation_estimate("eps*sin(x/eps)", (0, 1)).value == 1


def test_seminorm_examples():
    assert gf_seminorm("x/eps", (0, 1)) == pytest.approx(math.e)
    assert gf_seminorm("0", (0, 1)) == 0
    assert gf_seminorm("x^2", (0, 1), alpha=1) == pytest.approx(1)


def test_continuity_examples():
    rep = gf_continuity_bound("x/eps", G("0"), SequenceSpec.from_template("eps^k", "0", 6))
    assert rep.passed
    assert [r["lhs"] for r in rep.rows] == pytest.approx([math.exp(1 - k) for k in range(1, 7)])
    assert [r["lhs"] for r in rep.rows] == pytest.approx([r["rhs"] for r in rep.rows])
    rep = gf_continuity_bound("x^2", G("0"), SequenceSpec(lambda k: GenNum.const(F(1, k)), G("0"), 5))
    assert rep.passed
    rep = gf_continuity_bound("5", G("0"), SequenceSpec.from_template("eps^k", "0", 4))
    assert set(rep.column("lhs")) == {0.0}


def test_probe_examples():
    w = gf_probe_nonzero("x/eps")
    assert isinstance(w, Witness) and w.x == G("eps^(1/2)") and w.value == G("eps^(-1/2)")
    assert isinstance(gf_probe_nonzero("0"), Exhausted)
    assert isinstance(gf_probe_nonzero("exp(-1/eps)*x"), Exhausted)


FUNCS = ["sin(x)*exp(x)", "1/(1+x^2)", "cos(x)^3 - x", "log(2+x)", "sqrt(4+x)", "exp(x/2)/(3-x)"]


@given(st.sampled_from(FUNCS), near_standard(lo=-1, hi=1, max_branches=2, **ORACLE_REGIME))
def test_oracle_agreement(f, X):
    assert gf_oracle_error(f, X) <= 1e-8


@given(st.sampled_from(FUNCS), near_standard(lo=-1, hi=1, max_branches=1))
def test_derivative_consistent_with_series(f, X):
    # first-order coefficient of f(st + eps) is f'(st)
    st_ = X.branches[0].coefficient(0)
    u = gf_eval_gen(f, GenNum.const(st_) + GenNum.eps(1))
    d = float(E.eval_real(E.diff(E.parse_expr(f), "x"), x=float(st_)))
    assert float(u.branches[0].coefficient(1)) == pytest.approx(d, rel=1e-10, abs=1e-12)


@given(
    st.sampled_from(FUNCS),
    st.fractions(-1, 1, max_denominator=6),
    st.fractions(-1, 1, max_denominator=6),
    st.sampled_from([F(1, 2), F(1), F(3, 2)]),
)
def test_batch_matches_exact_kernel(f, x0, h0, a):
    e = E.parse_expr(f)
    xs = EpsSeries.make([(0, x0), (a, F(1, 3))])
    hs = EpsSeries.make([(0, h0 / 4), (1, F(-1, 2))])
    nodes = np.array([0.0, 0.25, 0.8])
    order = F(12)
    d = batch.lattice_of([xs, hs])
    got = batch.to_dicts(batch.evaluate(e, batch.line_batch(xs, hs, nodes, d, order), order), order)
    for s, row in zip(nodes, got):
        ref = eval_series(e, xs + hs * EpsSeries.const(F(s)), order)
        for ex, c in ref.terms:
            assert row.get(ex, 0.0) == pytest.approx(float(c), rel=1e-9, abs=1e-11)


def test_round_trip_expr():
    for text in FUNCS + ["eps*sin(x/eps)", "x^(1/2) - eps^(-3)"]:
        e = E.parse_expr(text)
        assert E.to_str(E.parse_expr(E.to_str(e))) == E.to_str(e)


@given(st.sampled_from(FUNCS), st.sampled_from(FUNCS), near_standard(lo=-1, hi=1, max_branches=2))
def test_linearity(f, g, X):
    u, v = E.parse_expr(f), E.parse_expr(g)
    assert gf_eval_gen(GenFunExpr(E.add(u, v)), X) == gf_eval_gen(f, X) + gf_eval_gen(g, X)
    prod = gf_eval_gen(GenFunExpr(E.mul(u, v)), X)
    assert prod.agrees_with(gf_eval_gen(f, X) * gf_eval_gen(g, X), tol=1e-12)


def test_sharp_limit_predicate():
    from colombeau.genfun import gf_sharp_limit_holds

    pts = [GenNum.eps(k, 1) for k in range(1, 8)] + [GenNum.const(F(1, 2))]
    # x^2 at 0 with eta = eps^2: delta = eps works, delta = 1 (admits y = 1/2) does not
    assert gf_sharp_limit_holds("x^2", 0, 0, GenNum.eps(2), GenNum.eps(1), pts)
    assert not gf_sharp_limit_holds("x^2", 0, 0, GenNum.eps(2), GenNum.const(1), pts)
    # x/eps needs delta = eps * eta
    assert not gf_sharp_limit_holds("x/eps", 0, 0, GenNum.eps(1), GenNum.eps(1), pts)
    assert gf_sharp_limit_holds("x/eps", 0, 0, GenNum.eps(1), GenNum.eps(2), pts)
