"""A computable subring of the Colombeau generalized numbers.

A :class:`GenNum` is a finite family of ε-power series ("branches").  Branch
``i`` of a ``k``-branch number describes the net on the subsequence
``ε_j = 2^{-j}`` with ``j ≡ i (mod k)``, joined by a smooth interpolation in
between.  One branch is the ordinary case; several branches give zero divisors
(``⟨1 ∥ 0⟩·⟨0 ∥ 1⟩ = 0``) and incomparable pairs (``⟨1 ∥ -1⟩`` vs ``⟨-1 ∥ 1⟩``).

Binary operations refine both operands to ``lcm`` of their branch counts and
act branchwise.  Results are reduced to their minimal period, so ``⟨a ∥ a⟩``
and ``a`` are the same value.

Vectors of generalized numbers are plain sequences of :class:`GenNum`; the
metric helpers accept either form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from . import series as _s
from .config import DEFAULT, Config
from .errors import NotInvertible, NotNearStandard, Undecided, UnknownSign
from .series import INF, EpsSeries

CANCEL_TOL = _s.CANCEL_TOL


def _reduce_period(branches: tuple) -> tuple:
    k = len(branches)
    for p in range(1, k):
        if k % p:
            continue
        if all(branches[i].close_to(branches[i % p]) for i in range(p, k)):
            return branches[:p]
    return branches


@dataclass(frozen=True, eq=False)
class GenNum:
    """Branched generalized number; build through the classmethods."""

    branches: tuple

    def __post_init__(self):
        if not self.branches:
            raise ValueError("a generalized number needs at least one branch")

    @classmethod
    def from_branches(cls, branches: Sequence[EpsSeries]) -> "GenNum":
        return cls(_reduce_period(tuple(branches)))

    @classmethod
    def from_series(cls, s: EpsSeries) -> "GenNum":
        return cls((s,))

    @classmethod
    def const(cls, c) -> "GenNum":
        return cls((EpsSeries.const(c),))

    @classmethod
    def eps(cls, e=1, c=1) -> "GenNum":
        """``c·ε^e``."""
        return cls((EpsSeries.monomial(c, e),))

    @classmethod
    def from_terms(cls, pairs, tail=INF) -> "GenNum":
        return cls((EpsSeries.make(pairs, tail),))

    @classmethod
    def parse(cls, text: str) -> "GenNum":
        from .literals import parse_gennum

        return parse_gennum(text)

    @classmethod
    def coerce(cls, x) -> "GenNum":
        if isinstance(x, GenNum):
            return x
        if isinstance(x, EpsSeries):
            return cls.from_series(x)
        return cls.const(x)

    # -- inspection -------------------------------------------------------

    @property
    def k(self) -> int:
        """Number of branches."""
        return len(self.branches)

    @property
    def is_zero(self) -> bool:
        return all(b.is_zero for b in self.branches)

    @property
    def is_exact(self) -> bool:
        return all(b.is_exact for b in self.branches)

    @property
    def tail(self):
        return min(b.tail for b in self.branches)

    def branch_at(self, j: int) -> EpsSeries:
        """Series in force at sample index ``j`` (``ε_j = 2^{-j}``)."""
        return self.branches[j % self.k]

    def value_at(self, j: int) -> float:
        """Representative value at ``ε_j = 2^{-j}``."""
        return self.branch_at(j).evaluate(2.0**-j)

    def refine(self, k: int) -> tuple:
        if k % self.k:
            raise ValueError(f"{k} is not a multiple of {self.k}")
        return tuple(self.branches[i % self.k] for i in range(k))

    def max_abs_coeff(self) -> float:
        return max(b.max_abs_coeff() for b in self.branches)

    def truncate(self, order) -> "GenNum":
        return GenNum.from_branches(b.truncate(order) for b in self.branches)

    def map(self, fn) -> "GenNum":
        return GenNum.from_branches(fn(b) for b in self.branches)

    def equals(self, other, tol: float = CANCEL_TOL) -> bool:
        """Structural equality: same tails and coefficients equal within ``tol``."""
        other = GenNum.coerce(other)
        k = math.lcm(self.k, other.k)
        return all(a.close_to(b, tol) for a, b in zip(self.refine(k), other.refine(k)))

    def agrees_with(self, other, tol: float = CANCEL_TOL) -> bool:
        """Known coefficients agree on every branch below the common tail."""
        other = GenNum.coerce(other)
        k = math.lcm(self.k, other.k)
        return all(a.agrees_with(b, tol) for a, b in zip(self.refine(k), other.refine(k)))

    def __eq__(self, other):
        if isinstance(other, (GenNum, EpsSeries, int, Fraction, float)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None

    # -- ring operations ----------------------------------------------------

    def _binary(self, other, op) -> "GenNum":
        other = GenNum.coerce(other)
        if self.k == 1 and other.k == 1:
            return GenNum((op(self.branches[0], other.branches[0]),))
        k = math.lcm(self.k, other.k)
        return GenNum.from_branches(op(a, b) for a, b in zip(self.refine(k), other.refine(k)))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return GenNum.coerce(other) - self

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return GenNum(tuple(-b for b in self.branches))

    def __truediv__(self, other):
        return self * gn_invert(GenNum.coerce(other))

    def __rtruediv__(self, other):
        return GenNum.coerce(other) * gn_invert(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("use series.apply_pow for non-integer powers")
        if n < 0:
            return gn_invert(self) ** (-n)
        return self.map(lambda b: _s.power_int(b, n))

    def __abs__(self):
        return gn_abs(self)

    def __str__(self) -> str:
        from .literals import format_gennum

        return format_gennum(self)

    def __repr__(self) -> str:
        return f"GenNum({str(self)!r})"


Number = Union[GenNum, int, Fraction, float]
Point = Union[GenNum, Sequence[GenNum]]


def _is_vector(x) -> bool:
    return isinstance(x, (list, tuple))


# -- ring -----------------------------------------------------------------------


def gn_ring_op(op: str, x: Number, y: Number) -> GenNum:
    """``add``/``sub``/``mul`` of two numbers, branchwise after refinement."""
    x, y = GenNum.coerce(x), GenNum.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown ring operation {op!r}")


# -- valuation and the sharp metric ------------------------------------------------


def _branch_valuation(b: EpsSeries):
    """``(lower, upper)`` bounds on the valuation of one branch."""
    if b.terms:
        return b.terms[0][0], b.terms[0][0]
    if b.tail == INF:
        return INF, INF
    return b.tail, INF


def valuation_bound(x: Point) -> tuple:
    """``(lower, upper)`` bounds on ``v(x)``; equal when the valuation is known.

    Along the full net the valuation is the minimum over branches.  For a
    vector it is the minimum over components, which equals the valuation of
    its Euclidean norm.
    """
    if _is_vector(x):
        bounds = [valuation_bound(c) for c in x]
        return min(b[0] for b in bounds), min(b[1] for b in bounds)
    x = GenNum.coerce(x)
    per = [_branch_valuation(b) for b in x.branches]
    return min(p[0] for p in per), min(p[1] for p in per)


def gn_valuation(x: Point):
    """``v(x) = sup{b : |x_ε| = O(ε^b)}``; ``inf`` iff ``x = 0``.

    When a branch has no known terms the result is only a lower bound; use
    :func:`valuation_bound` to see both ends.
    """
    return valuation_bound(x)[0]


def valuation_is_exact(x: Point) -> bool:
    lo, hi = valuation_bound(x)
    return lo == hi


@dataclass(frozen=True)
class DistInterval:
    """A distance known only to lie in ``[lo, hi]``."""

    lo: float
    hi: float

    def __add__(self, other: float) -> "DistInterval":
        return DistInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __str__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _exp_neg(v) -> float:
    return 0.0 if v == INF else math.exp(-float(v))


def gn_abs_e(x: Point):
    """``|x|_e = exp(-v(x))``."""
    lo, hi = valuation_bound(x)
    if lo == hi:
        return _exp_neg(lo)
    return DistInterval(_exp_neg(hi), _exp_neg(lo))


def _sub_points(x: Point, y: Point):
    if _is_vector(x) or _is_vector(y):
        if not (_is_vector(x) and _is_vector(y)) or len(x) != len(y):
            raise ValueError("points of different dimension")
        return [GenNum.coerce(a) - GenNum.coerce(b) for a, b in zip(x, y)]
    return GenNum.coerce(x) - GenNum.coerce(y)


def gn_sharp_dist(x: Point, y: Point):
    """Sharp distance ``d_s(x, y) = exp(-v(x - y))``.

    Returns a float, or a :class:`DistInterval` when the valuation of the
    difference is hidden behind a tail.
    """
    return gn_abs_e(_sub_points(x, y))


# -- order ----------------------------------------------------------------------


class Relation(Enum):
    LE = "LE"
    GE = "GE"
    EQ = "EQ"
    INCOMPARABLE = "INCOMPARABLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class CompareVerdict:
    relation: Relation
    order: object = None  # tail that blocked an UNKNOWN verdict

    def __str__(self):
        if self.relation is Relation.UNKNOWN:
            return f"UNKNOWN({self.order})"
        return self.relation.value


LE = CompareVerdict(Relation.LE)
GE = CompareVerdict(Relation.GE)
EQ = CompareVerdict(Relation.EQ)
INCOMPARABLE = CompareVerdict(Relation.INCOMPARABLE)


def _branch_signs(x: GenNum) -> tuple[list, list]:
    signs, hidden = [], []
    for b in x.branches:
        try:
            signs.append(b.sign())
        except UnknownSign as exc:
            hidden.append(exc.order)
    return signs, hidden


def gn_order_compare(x: Number, y: Number) -> CompareVerdict:
    """Compare ``x`` and ``y`` by the eventual sign of ``y - x`` on every branch."""
    signs, hidden = _branch_signs(GenNum.coerce(y) - GenNum.coerce(x))
    pos, neg = 1 in signs, -1 in signs
    if pos and neg:
        return INCOMPARABLE
    if hidden:
        return CompareVerdict(Relation.UNKNOWN, min(hidden))
    if pos:
        return LE
    if neg:
        return GE
    return EQ


def _decided(v: CompareVerdict) -> CompareVerdict:
    if v.relation is Relation.UNKNOWN:
        raise Undecided("order hidden behind the tail", v.order)
    return v


def le(x: Number, y: Number) -> bool:
    """``x ≤ y``; raises :class:`Undecided` when a tail hides the answer."""
    return _decided(gn_order_compare(x, y)).relation in (Relation.LE, Relation.EQ)


def ge(x: Number, y: Number) -> bool:
    return le(y, x)


def lt(x: Number, y: Number) -> bool:
    """Strict ``x < y``: ``y - x`` is positive and invertible on every branch."""
    signs, hidden = _branch_signs(GenNum.coerce(y) - GenNum.coerce(x))
    if any(s <= 0 for s in signs):
        return False
    if hidden:
        raise Undecided("strict order hidden behind the tail", min(hidden))
    return True


def gt(x: Number, y: Number) -> bool:
    return lt(y, x)


def is_positive(x: Number) -> bool:
    return lt(0, x)


# -- absolute value, min, max ----------------------------------------------------


def _abs_branch(b: EpsSeries) -> EpsSeries:
    return -b if b.sign() < 0 else b


def gn_abs(x: Number) -> GenNum:
    """Generalized absolute value: flip every branch with a negative leading term."""
    return GenNum.coerce(x).map(_abs_branch)


def _select(x: GenNum, y: GenNum, want_min: bool) -> GenNum:
    k = math.lcm(x.k, y.k)
    out = []
    for a, b in zip(x.refine(k), y.refine(k)):
        s = (b - a).sign()  # raises UnknownSign
        if want_min:
            out.append(a if s >= 0 else b)
        else:
            out.append(b if s >= 0 else a)
    return GenNum.from_branches(out)


def gn_abs_min_max(kind: str, x: Number, y: Number = None) -> GenNum:
    x = GenNum.coerce(x)
    if kind == "abs":
        if y is not None:
            raise ValueError("abs takes one argument")
        return gn_abs(x)
    if y is None:
        raise ValueError(f"{kind} takes two arguments")
    y = GenNum.coerce(y)
    if kind == "min":
        return _select(x, y, True)
    if kind == "max":
        return _select(x, y, False)
    raise ValueError(f"unknown kind {kind!r}")


def gn_min(x: Number, y: Number) -> GenNum:
    return gn_abs_min_max("min", x, y)


def gn_max(x: Number, y: Number) -> GenNum:
    return gn_abs_min_max("max", x, y)


# -- invertibility ---------------------------------------------------------------


def is_invertible(x: Number) -> bool:
    """Strictly nonzero: every branch has a known leading term.

    Raises :class:`Undecided` when no branch is exactly zero but some branch
    has no known terms.
    """
    x = GenNum.coerce(x)
    if any(b.is_zero for b in x.branches):
        return False
    hidden = [b.tail for b in x.branches if not b.terms]
    if hidden:
        raise Undecided("leading term hidden behind the tail", min(hidden))
    return True


def gn_invert(x: Number, cfg: Config = DEFAULT) -> GenNum:
    """Branchwise inverse; exact for monomials, truncated at the working order otherwise."""
    x = GenNum.coerce(x)
    for b in x.branches:
        if b.is_zero:
            raise NotInvertible(f"{x} has a zero branch (zero divisor)")
        if not b.terms:
            raise NotInvertible(f"{x} has a branch whose leading term is unknown")
    return x.map(lambda b: _s.invert(b, cfg.order))


# -- near-standard points ---------------------------------------------------------


def _standard_part_branch(b: EpsSeries):
    if b.terms and b.terms[0][0] < 0:
        raise NotNearStandard(f"negative exponent {b.terms[0][0]}: no limit as eps -> 0")
    if b.tail <= 0:
        raise Undecided("standard part hidden behind the tail", b.tail)
    return b.terms[0][1] if b.terms and b.terms[0][0] == 0 else Fraction(0)


def standard_part(x: Number):
    """``st x``: the common limit of every branch."""
    x = GenNum.coerce(x)
    parts = [_standard_part_branch(b) for b in x.branches]
    first = parts[0]
    if any(not _s.coeff_close(first, p) for p in parts[1:]):
        raise NotNearStandard(f"branches of {x} have different limits")
    return first


def is_near_standard(x: Point) -> bool:
    try:
        if _is_vector(x):
            for c in x:
                standard_part(c)
        else:
            standard_part(x)
    except NotNearStandard:
        return False
    return True


def gn_near_standard_decompose(x: Point):
    """``(st x, δ(x))`` with ``x = st x + δ(x)`` and ``δ(x) ≈ 0``.

    For a vector, ``st x`` is a tuple of reals and ``δ(x)`` a tuple of
    :class:`GenNum`.
    """
    if _is_vector(x):
        pairs = [gn_near_standard_decompose(c) for c in x]
        return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)
    x = GenNum.coerce(x)
    st = standard_part(x)
    return st, x.map(lambda b: b - st)


def gn_metric(kind: str, x: Point, y: Point):
    """Fermat pseudometric ``|st x - st y|`` or ω-metric ``|st x - st y| + d_s(δx, δy)``."""
    if kind not in ("fermat", "omega"):
        raise ValueError(f"unknown metric {kind!r}")
    stx, dx = gn_near_standard_decompose(x)
    sty, dy = gn_near_standard_decompose(y)
    if _is_vector(x):
        dist = math.sqrt(math.fsum((float(a) - float(b)) ** 2 for a, b in zip(stx, sty)))
    else:
        dist = abs(float(stx - sty))
    if kind == "fermat":
        return dist
    return dist + gn_sharp_dist(dx, dy)


def gn_in_monad(x: Number, center: Number = 0) -> bool:
    """``x ≈ center``: every branch of the difference is infinitesimal."""
    if _is_vector(x):
        centers = center if _is_vector(center) else [center] * len(x)
        return all(gn_in_monad(a, c) for a, c in zip(x, centers))
    diff = GenNum.coerce(x) - GenNum.coerce(center)
    hidden = []
    for b in diff.branches:
        if b.terms:
            if b.terms[0][0] <= 0:
                return False
        elif b.tail <= 0:
            hidden.append(b.tail)
    if hidden:
        raise Undecided("standard part of the difference hidden behind the tail", min(hidden))
    return True


def is_infinitesimal(x: Number) -> bool:
    return gn_in_monad(x, 0)


# -- intervals ---------------------------------------------------------------------


def gn_interval_contains(kind: str, a: Number, b: Number, x: Number) -> bool:
    """Is ``x`` in the interval with endpoints ``a``, ``b``?

    ``order``: ``a ≤ x ≤ b``.  ``invertible_endpoints``: additionally ``a - x``
    and ``b - x`` are invertible.  Raises :class:`Undecided` when a tail hides
    the answer.
    """
    a, b, x = GenNum.coerce(a), GenNum.coerce(b), GenNum.coerce(x)
    inside = le(a, x) and le(x, b)
    if kind == "order":
        return inside
    if kind == "invertible_endpoints":
        return inside and is_invertible(a - x) and is_invertible(b - x)
    raise ValueError(f"unknown interval kind {kind!r}")


# -- norm ----------------------------------------------------------------------------


def gn_norm(x: Point, cfg: Config = DEFAULT) -> GenNum:
    """``‖x‖_g = (Σ x_i²)^{1/2}``, square root taken branchwise about the leading term."""
    comps = [GenNum.coerce(c) for c in (x if _is_vector(x) else [x])]
    total = GenNum.const(0)
    for c in comps:
        total = total + c * c
    return total.map(lambda b: _s.apply_pow(b, Fraction(1, 2), cfg.order))
