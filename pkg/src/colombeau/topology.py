"""Balls, ball conversions, sphere openness, the infinitesimal indicator and
distance tables for the sharp, Fermat and ω topologies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import ColombeauError, DomainError, NotInvertible, Undecided
from .gennum import (
    DistInterval,
    GenNum,
    gn_abs,
    gn_in_monad,
    gn_metric,
    gn_sharp_dist,
    is_invertible,
    is_positive,
    lt,
    standard_part,
    valuation_bound,
)
from .report import VerdictReport
from .series import INF

BALL_KINDS = ("sharp", "gabs", "fermat", "omega")


def _less(d, r: float) -> bool:
    """``d < r`` for a distance that may be an interval."""
    if isinstance(d, DistInterval):
        if d.hi < r:
            return True
        if d.lo >= r:
            return False
        raise Undecided(f"distance in {d} straddles {r}")
    return d < r


@dataclass(frozen=True)
class BallSpec:
    """Ball of the given kind; ``radius`` is a real, or a positive invertible GenNum for ``gabs``."""

    kind: str
    center: GenNum
    radius: object

    def __post_init__(self):
        if self.kind not in BALL_KINDS:
            raise ValueError(f"unknown ball kind {self.kind!r}")
        object.__setattr__(self, "center", GenNum.coerce(self.center))
        if self.kind == "gabs":
            rho = GenNum.coerce(self.radius)
            if not is_invertible(rho):
                raise NotInvertible(f"radius {rho} is not invertible")
            if not is_positive(rho):
                raise DomainError(f"radius {rho} is not positive")
            object.__setattr__(self, "radius", rho)
        elif not float(self.radius) > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")


def ball_contains(ball: BallSpec, x) -> bool:
    """Membership of ``x``; raises :class:`Undecided` when a tail hides the answer."""
    x = GenNum.coerce(x)
    if ball.kind == "sharp":
        return _less(gn_sharp_dist(x, ball.center), float(ball.radius))
    if ball.kind == "gabs":
        return lt(gn_abs(x - ball.center), ball.radius)
    return _less(gn_metric(ball.kind, x, ball.center), float(ball.radius))


# -- ball conversions -------------------------------------------------------------


@dataclass(frozen=True)
class BallCertificate:
    """``inner ⊆ outer`` for every center: a gabs radius ``ε^q`` against a sharp radius ``r``."""

    direction: str
    q: Fraction
    r: float
    rho: GenNum
    q_real: float = math.nan  # q before rational rounding

    @property
    def claim(self) -> str:
        if self.direction == "sharp_to_gabs":
            return f"B^g_(eps^{self.q})(x) is inside B^s_{self.r}(x)"
        return f"B^s_{self.r}(x) is inside B^g_({self.rho})(x)"

    def inner(self, center) -> BallSpec:
        if self.direction == "sharp_to_gabs":
            return BallSpec("gabs", center, self.rho)
        return BallSpec("sharp", center, self.r)

    def outer(self, center) -> BallSpec:
        if self.direction == "sharp_to_gabs":
            return BallSpec("sharp", center, self.r)
        return BallSpec("gabs", center, self.rho)

    def check(self, center, z) -> bool:
        """Membership implication for one point: in the inner ball ⇒ in the outer ball."""
        return not ball_contains(self.inner(center), z) or ball_contains(self.outer(center), z)


def ball_convert(direction: str, radius) -> BallCertificate:
    """Certificate for one inclusion between gabs and sharp balls.

    ``sharp_to_gabs``: for a real ``r`` take ``q = -log(r/2) + 1`` (stored as
    the nearest rational with denominator ≤ 1000) and ``ρ = ε^q``.
    ``gabs_to_sharp``: for an invertible ``ρ`` take ``q`` = largest leading
    exponent over branches and ``r = e^{-(q+1)}``.
    """
    if direction == "sharp_to_gabs":
        r = float(radius)
        if not r > 0:
            raise DomainError(f"radius must be positive, got {r}")
        q_real = -math.log(r / 2) + 1
        q = Fraction(q_real).limit_denominator(1000)  # the margin 1 absorbs the rounding
        return BallCertificate(direction, q, r, GenNum.eps(q), q_real)
    if direction == "gabs_to_sharp":
        rho = GenNum.coerce(radius)
        if not is_invertible(rho):
            raise NotInvertible(f"radius {rho} is not invertible")
        q = max(b.terms[0][0] for b in rho.branches)
        return BallCertificate(direction, q, math.exp(-(float(q) + 1)), rho, float(q))
    raise ValueError(f"unknown direction {direction!r}")


# -- spheres -------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereWitness:
    """``B^g_{ε^q}(y)`` lies on the sphere ``S_r(center)``."""

    center: GenNum
    y: GenNum
    r: float
    v: Fraction  # exact valuation of y - center, r = e^{-v}
    q: Fraction

    def radius(self) -> GenNum:
        return GenNum.eps(self.q)

    def check(self, z) -> bool:
        """For ``z`` in the witness ball, ``d_s(center, z) = r`` exactly (compared on valuations)."""
        z = GenNum.coerce(z)
        if not lt(gn_abs(z - self.y), self.radius()):
            raise DomainError("z is not in the witness ball")
        lo, hi = valuation_bound(z - self.center)
        if lo != hi:
            raise Undecided("valuation hidden behind the tail", lo)
        return lo == self.v


def sphere_openness_witness(center, r: float, y) -> SphereWitness:
    """Witness ``q = -log r + 1`` for a point ``y`` on the sphere ``d_s(y, center) = r``."""
    center, y = GenNum.coerce(center), GenNum.coerce(y)
    lo, hi = valuation_bound(y - center)
    if lo != hi:
        raise Undecided("valuation hidden behind the tail", lo)
    if lo == INF or not math.isclose(math.exp(-float(lo)), r, rel_tol=1e-12):
        raise DomainError(f"d_s(y, center) = {math.exp(-float(lo)) if lo != INF else 0.0} differs from r = {r}")
    if not 0 < r < 1:
        raise DomainError(f"sphere radius must lie in (0, 1), got {r}")
    return SphereWitness(center, y, r, lo, lo + 1)


# -- infinitesimal indicator -----------------------------------------------------


def indicator_infinitesimal(x) -> int:
    """``i(x) = 1`` iff ``x ≈ 0``."""
    return 1 if gn_in_monad(x, 0) else 0


# -- sequences -------------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceSpec:
    """Sequence ``k ↦ x_k`` for ``k = 1..k_max`` with a candidate limit."""

    generator: Callable[[int], GenNum]
    limit: GenNum
    k_max: int
    label: str = ""

    @classmethod
    def from_template(cls, template: str, limit="0", k_max: int = 10) -> "SequenceSpec":
        """``template`` is a GenNum literal with ``k`` standing for the index, e.g. ``eps^k``."""
        import re

        from .literals import parse_gennum

        def gen(k: int) -> GenNum:
            return parse_gennum(re.sub(r"\bk\b", str(k), template))

        lim = limit if isinstance(limit, GenNum) else parse_gennum(str(limit))
        return cls(gen, lim, k_max, template)

    def terms(self):
        for k in range(1, self.k_max + 1):
            yield k, GenNum.coerce(self.generator(k))


def _trend(values: list) -> str:
    nums = [v for v in values if isinstance(v, (int, float))]
    if len(nums) < 2:
        return "n/a"
    diffs = [b - a for a, b in zip(nums, nums[1:])]
    if all(abs(d) <= 1e-15 for d in diffs):
        return "constant"
    if all(d <= 1e-15 for d in diffs):
        return "non-increasing"
    if all(d >= -1e-15 for d in diffs):
        return "non-decreasing"
    return "mixed"


def classify_sequence(seq: SequenceSpec) -> VerdictReport:
    """Distances from each term to the candidate limit in the three topologies."""
    report = VerdictReport(f"sequence {seq.label}".strip(), ("k", "d_s", "d_F", "d_omega", "error"))
    for k in range(1, seq.k_max + 1):
        row = {"k": k}
        try:
            xk = GenNum.coerce(seq.generator(k))
            row["d_s"] = gn_sharp_dist(xk, seq.limit)
            try:
                row["d_F"] = gn_metric("fermat", xk, seq.limit)
                row["d_omega"] = gn_metric("omega", xk, seq.limit)
            except DomainError as exc:
                row["error"] = f"{type(exc).__name__}: {exc}"
        except ColombeauError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        report.rows.append(row)
    for col in ("d_s", "d_F", "d_omega"):
        vals = report.column(col)
        report.summary[f"{col}_trend"] = _trend(vals)
        last = vals[-1] if vals else None
        report.summary[f"{col}_last"] = last
    return report


# -- real trace of a gabs ball -----------------------------------------------------------


@dataclass(frozen=True)
class RealTrace:
    """``B^g_ρ(c) ∩ ℝ``: an interval ``lo..hi`` (``closed`` includes both ends) or the point ``{c}``."""

    lo: object
    hi: object
    closed: bool

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, s) -> bool:
        if self.closed:
            return self.lo <= s <= self.hi
        return self.lo < s < self.hi

    def __str__(self):
        if self.is_point:
            return f"{{{self.lo}}}"
        left, right = ("[", "]") if self.closed else ("(", ")")
        return f"{left}{self.lo}, {self.hi}{right}"


def real_trace_of_gabs_ball(center, rho) -> RealTrace:
    """Real points ``s`` with ``|s - center| < ρ``."""
    center = Fraction(center) if not isinstance(center, float) else Fraction(repr(center))
    rho = BallSpec("gabs", GenNum.const(center), rho).radius
    if any(b.terms[0][0] < 0 for b in rho.branches):
        if all(b.terms[0][0] < 0 for b in rho.branches):
            return RealTrace(-INF, INF, False)
        raise DomainError(f"radius {rho} is infinite on some branches only")
    c = standard_part(rho)
    if c == 0:
        return RealTrace(center, center, True)
    # boundary points |s - center| = c are inside iff c < ρ
    return RealTrace(center - c, center + c, lt(c, rho))


__all__ = [
    "BallSpec",
    "BallCertificate",
    "RealTrace",
    "SequenceSpec",
    "SphereWitness",
    "ball_contains",
    "ball_convert",
    "classify_sequence",
    "indicator_infinitesimal",
    "real_trace_of_gabs_ball",
    "sphere_openness_witness",
]
