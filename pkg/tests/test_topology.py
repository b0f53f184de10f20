import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from colombeau.errors import DomainError
from colombeau.gennum import GenNum, gn_sharp_dist
from colombeau.literals import parse_gennum
from colombeau.topology import (
    BallSpec,
    SequenceSpec,
    ball_contains,
    ball_convert,
    classify_sequence,
    indicator_infinitesimal,
    real_trace_of_gabs_ball,
    sphere_openness_witness,
)
from strategies import gennums, invertibles

G = parse_gennum


def test_ball_contains_examples():
    assert ball_contains(BallSpec("gabs", G("0"), G("eps^2")), G("eps^3"))
    assert ball_contains(BallSpec("sharp", G("0"), 0.5), G("eps"))
    assert ball_contains(BallSpec("gabs", G("1"), G("2 + eps")), G("3"))


def test_ball_convert_examples():
    c = ball_convert("sharp_to_gabs", 0.5)
    assert c.q_real == pytest.approx(-math.log(0.25) + 1, abs=1e-12)
    assert abs(float(c.q) - 2.386294) < 1e-3
    c = ball_convert("gabs_to_sharp", G("eps^3"))
    assert c.r == pytest.approx(0.018315638888734, abs=1e-12)
    assert ball_convert("sharp_to_gabs", 2).q == 1


def test_sphere_examples():
    center = G("1 + eps^(1/2)")
    w = sphere_openness_witness(center, math.exp(-2), center + G("eps^2"))
    assert w.q == 3
    assert w.check(w.y + G("(1/2)*eps^3"))
    assert w.check(w.y)
    w = sphere_openness_witness(center, math.exp(-1), center + G("eps"))
    assert w.check(w.y + G("eps^5"))


def test_sphere_rejects_point_off_sphere():
    with pytest.raises(DomainError):
        sphere_openness_witness(G("0"), math.exp(-2), G("eps"))


def test_indicator_examples():
    assert indicator_infinitesimal(G("eps^(1/2)")) == 1
    assert indicator_infinitesimal(G("3 + eps")) == 0
    assert indicator_infinitesimal(G("0")) == 1


def test_classify_examples():
    rep = classify_sequence(SequenceSpec(lambda k: GenNum.const(F(1, k)), GenNum.const(0), 10, "1/k"))
    assert rep.column("d_omega") == [1 / k for k in range(1, 11)]
    assert set(rep.column("d_s")) == {1.0}
    rep = classify_sequence(SequenceSpec.from_template("eps^k", "0", 8))
    assert rep.column("d_s") == [math.exp(-k) for k in range(1, 9)]
    rep = classify_sequence(SequenceSpec.from_template("7", "7", 5))
    assert all(set(rep.column(c)) == {0.0} for c in ("d_s", "d_F", "d_omega"))


def test_real_trace_examples():
    t = real_trace_of_gabs_ball(1, G("3/10"))
    assert (t.lo, t.hi, t.closed) == (F(7, 10), F(13, 10), False)
    assert real_trace_of_gabs_ball(1, G("eps")).is_point
    t = real_trace_of_gabs_ball(1, G("2 + eps"))
    assert (t.lo, t.hi, t.closed) == (-1, 3, True)


@given(st.floats(0.01, 5.0), gennums(max_branches=2))
def test_sharp_to_gabs_certificate(r, center):
    c = ball_convert("sharp_to_gabs", r)
    z = center + GenNum.eps(c.q + F(1, 3), F(-1, 2))
    assert c.check(center, z)


@given(invertibles(), gennums(max_branches=2))
def test_gabs_to_sharp_certificate(rho, center):
    rho = abs(rho)
    c = ball_convert("gabs_to_sharp", rho)
    z = center + GenNum.eps(c.q + 2, 5)
    assert ball_contains(c.outer(center), z)


@given(st.integers(1, 6), st.fractions(-3, 3, max_denominator=4), st.integers(0, 5))
def test_sphere_openness(m, c, extra):
    center = G("2 + eps")
    y = center + GenNum.eps(m, 1)
    w = sphere_openness_witness(center, math.exp(-m), y)
    # strictly below eps^q: a higher order, or order q with |c| < 1
    for z in (y + GenNum.eps(w.q + extra + F(1, 2), c or 1), y + GenNum.eps(w.q, c / 4)):
        assert w.check(z)
        assert gn_sharp_dist(center, z) == math.exp(-m)
