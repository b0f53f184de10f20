"""Seeded random generators for generalized numbers and Fermat reals.

Every generator takes an explicit :class:`random.Random`; nothing touches the
global generator, so suites are reproducible from their seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .fermat import LittleOhPoly, fr_normalize
from .gennum import GenNum
from .series import EpsSeries

EXPONENTS = tuple(sorted({Fraction(p, q) for q in (1, 2, 3, 4) for p in range(-2 * q, 4 * q + 1)}))


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def rational(r: random.Random, lo: int = -5, hi: int = 5, den: int = 8) -> Fraction:
    """Uniform over ``[lo, hi]`` on the grid ``1/d`` for a random ``d ≤ den``."""
    d = r.randint(1, den)
    return Fraction(r.randint(lo * d, hi * d), d)


def nonzero_rational(r: random.Random, **kw) -> Fraction:
    while True:
        v = rational(r, **kw)
        if v:
            return v


@lru_cache(maxsize=None)
def _exponents_in(lo, hi) -> tuple:
    return tuple(e for e in EXPONENTS if lo <= e <= hi)


def exponent(r: random.Random, lo=-2, hi=4) -> Fraction:
    return r.choice(_exponents_in(lo, hi))


def series(r: random.Random, max_terms: int = 4, lo=-2, hi=4, floats: bool = False, zero_ok=True) -> EpsSeries:
    n = r.randint(0 if zero_ok else 1, max_terms)
    pairs = []
    for _ in range(n):
        c = r.uniform(-5, 5) if floats else nonzero_rational(r)
        pairs.append((exponent(r, lo, hi), c))
    s = EpsSeries.make(pairs)
    if not zero_ok and s.is_zero:
        return series(r, max_terms, lo, hi, floats, zero_ok)
    return s


def gennum(r: random.Random, max_branches: int = 3, **kw) -> GenNum:
    k = r.randint(1, max_branches)
    return GenNum.from_branches([series(r, **kw) for _ in range(k)])


def single(r: random.Random, **kw) -> GenNum:
    return GenNum.from_series(series(r, **kw))


def infinitesimal(r: random.Random, max_terms: int = 3, lo=Fraction(1, 4), hi=4, zero_ok=True) -> EpsSeries:
    n = r.randint(0 if zero_ok else 1, max_terms)
    pairs = [(exponent(r, lo, hi), nonzero_rational(r)) for _ in range(n)]
    s = EpsSeries.make(pairs)
    if not zero_ok and s.is_zero:
        return infinitesimal(r, max_terms, lo, hi, zero_ok)
    return s


def near_standard(r: random.Random, st=None, max_branches: int = 2, **kw) -> GenNum:
    st = rational(r) if st is None else st
    k = r.randint(1, max_branches)
    return GenNum.from_branches([infinitesimal(r, **kw) + st for _ in range(k)])


def distinct_reals(r: random.Random):
    a = rational(r, -100, 100, 16)
    while True:
        b = rational(r, -100, 100, 16)
        if b != a:
            return a, b


def fermat_real(r: random.Random, st=None, max_terms: int = 3) -> LittleOhPoly:
    st = rational(r) if st is None else st
    exps = [e for e in EXPONENTS if 0 < e <= 1]
    return fr_normalize([(0, st)] + [(r.choice(exps), nonzero_rational(r)) for _ in range(r.randint(0, max_terms))])


def first_order(r: random.Random, max_terms: int = 3) -> LittleOhPoly:
    """A random ``h`` with ``h² = 0``: every exponent above 1/2."""
    exps = [e for e in EXPONENTS if Fraction(1, 2) < e <= 1]
    return fr_normalize([(r.choice(exps), nonzero_rational(r)) for _ in range(r.randint(0, max_terms))])
