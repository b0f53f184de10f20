"""Hypothesis strategies for exact generalized numbers and Fermat reals."""

from fractions import Fraction

from hypothesis import strategies as st

from colombeau.fermat import fr_normalize
from colombeau.gennum import GenNum
from colombeau.sampling import EXPONENTS
from colombeau.series import EpsSeries

exponents = st.sampled_from(EXPONENTS)
positive_exponents = st.sampled_from([e for e in EXPONENTS if e > 0])
coefficients = st.fractions(min_value=-6, max_value=6, max_denominator=8)
nonzero_coefficients = coefficients.filter(lambda c: c != 0)


@st.composite
def series(draw, exps=exponents, min_terms=0, max_terms=4):
    pairs = draw(st.lists(st.tuples(exps, coefficients), min_size=min_terms, max_size=max_terms))
    return EpsSeries.make(pairs)


@st.composite
def nonzero_series(draw, exps=exponents, max_terms=4):
    lead = draw(st.tuples(exps, nonzero_coefficients))
    rest = draw(st.lists(st.tuples(exps, coefficients), max_size=max_terms - 1))
    s = EpsSeries.make([lead] + [p for p in rest if p[0] != lead[0]])
    return s if not s.is_zero else EpsSeries.const(1)


@st.composite
def gennums(draw, max_branches=3, **kw):
    k = draw(st.integers(1, max_branches))
    return GenNum.from_branches([draw(series(**kw)) for _ in range(k)])


def single(**kw):
    return series(**kw).map(GenNum.from_series)


@st.composite
def invertibles(draw, max_branches=2):
    k = draw(st.integers(1, max_branches))
    return GenNum.from_branches([draw(nonzero_series()) for _ in range(k)])


@st.composite
def infinitesimals(draw, max_branches=2, exps=positive_exponents, coeffs=coefficients):
    k = draw(st.integers(1, max_branches))
    branches = []
    for _ in range(k):
        pairs = draw(st.lists(st.tuples(exps, coeffs), max_size=3))
        branches.append(EpsSeries.make(pairs))
    return GenNum.from_branches(branches)


@st.composite
def near_standard(draw, lo=-3, hi=3, max_branches=2, **kw):
    c = draw(st.fractions(min_value=lo, max_value=hi, max_denominator=8))
    return draw(infinitesimals(max_branches, **kw)) + c


# fixed-eps oracles only make sense where the truncated series still converges at
# eps = 2^-10: small coefficients, leading exponents of at least 1/2
ORACLE_REGIME = dict(
    exps=st.sampled_from([e for e in EXPONENTS if e >= Fraction(1, 2)]),
    coeffs=st.fractions(min_value=-1, max_value=1, max_denominator=8),
)


fermat_exponents = st.builds(Fraction, st.integers(1, 8), st.just(8))


@st.composite
def fermat_reals(draw, max_terms=3):
    c = draw(coefficients)
    pairs = draw(st.lists(st.tuples(fermat_exponents, coefficients), max_size=max_terms))
    return fr_normalize([(Fraction(0), c)] + pairs)


@st.composite
def first_order(draw, max_terms=3):
    pairs = draw(st.lists(st.tuples(st.builds(Fraction, st.integers(9, 16), st.just(16)), coefficients), max_size=max_terms))
    return fr_normalize(pairs)
