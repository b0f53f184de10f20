"""Generalized functions given as expression nets ``u_ε(x)``.

Point evaluation at a near-standard generalized number runs the expression
tree bottom-up on ε-series (Taylor mode), one branch at a time, truncating at
the working order after every node.  Numeric evaluation of the representative
at a fixed ``ε`` serves as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expr as E
from . import series as S
from .config import DEFAULT, Config
from .errors import ColombeauError, DomainError, Undecided
from .gennum import GenNum, gn_abs, le, standard_part, valuation_bound
from .opensets import OpenSet1D
from .report import VerdictReport
from .series import INF, EpsSeries
from .topology import SequenceSpec


@dataclass(frozen=True)
class GenFunExpr:
    """Expression in ``x`` and ``eps`` together with its open domain."""

    expr: E.Expr
    domain: OpenSet1D = field(default_factory=OpenSet1D.real_line)

    @classmethod
    def parse(cls, text: str, domain=None) -> "GenFunExpr":
        if isinstance(domain, str):
            domain = OpenSet1D.parse(domain)
        return cls(E.parse_expr(text), domain or OpenSet1D.real_line())

    @classmethod
    def coerce(cls, u) -> "GenFunExpr":
        if isinstance(u, GenFunExpr):
            return u
        if isinstance(u, str):
            return cls.parse(u)
        return cls(E.lift(u))

    def derivative(self, order: int = 1) -> "GenFunExpr":
        return gf_derivative(self, order)

    def __call__(self, x, cfg: Config = DEFAULT) -> GenNum:
        return gf_eval_gen(self, x, cfg)

    def __str__(self) -> str:
        return E.to_str(self.expr)


# -- evaluation ---------------------------------------------------------------------------


def gf_eval_real(u, eps0: float, x0) -> float:
    """Representative value ``u_{eps0}(x0)``."""
    u = GenFunExpr.coerce(u)
    if not isinstance(x0, np.ndarray) and not u.domain.contains(x0):
        raise DomainError(f"x = {x0} is outside {u.domain}")
    return E.eval_real(u.expr, x=x0, eps=eps0)


def _series_eval(e: E.Expr, xs: EpsSeries, order, memo: dict) -> EpsSeries:
    key = id(e)
    if key in memo:
        return memo[key][1]
    if isinstance(e, E.Const):
        out = EpsSeries.const(e.value)
    elif isinstance(e, E.Var):
        if e.name == "x":
            out = xs
        elif e.name == "eps":
            out = EpsSeries.monomial(1, 1)
        else:
            raise DomainError(f"unbound variable {e.name!r}")
    elif isinstance(e, E.Neg):
        out = -_series_eval(e.arg, xs, order, memo)
    elif isinstance(e, (E.Add, E.Sub, E.Mul, E.Div)):
        a = _series_eval(e.left, xs, order, memo)
        b = _series_eval(e.right, xs, order, memo)
        if isinstance(e, E.Add):
            out = a + b
        elif isinstance(e, E.Sub):
            out = a - b
        elif isinstance(e, E.Mul):
            out = a * b
        else:
            if b.is_zero:
                raise DomainError("division by zero")
            out = a * S.invert(b, order)
    elif isinstance(e, E.Pow):
        b = _series_eval(e.base, xs, order, memo)
        p = e.exponent
        if p.denominator == 1 and p >= 0:
            out = S.power_int(b, int(p), order)
        else:
            out = S.apply_pow(b, p, order)
    elif isinstance(e, E.Func):
        a = _series_eval(e.arg, xs, order, memo)
        if e.name == "sqrt":
            out = S.apply_pow(a, Fraction(1, 2), order)
        else:
            out = S.apply_smooth(e.name, a, order)
    else:
        raise TypeError(e)
    out = out.truncate(order)
    memo[key] = (e, out)  # keep e alive so its id stays unique
    return out


def eval_series(e: E.Expr, xs: EpsSeries, order) -> EpsSeries:
    """Taylor-mode value of the tree at the series ``xs`` (no domain check)."""
    return _series_eval(e, xs, Fraction(order), {})


def gf_eval_gen(u, X, cfg: Config = DEFAULT) -> GenNum:
    """``u(X) = [u_ε(X_ε)]`` for near-standard ``X`` with ``st X`` in the domain."""
    u = GenFunExpr.coerce(u)
    X = GenNum.coerce(X)
    st = standard_part(X)  # NotNearStandard / Undecided
    if not u.domain.contains(st):
        raise DomainError(f"st X = {st} is outside {u.domain}")
    return GenNum.from_branches(eval_series(u.expr, b, cfg.order) for b in X.branches)


def gf_derivative(u, order: int = 1) -> GenFunExpr:
    u = GenFunExpr.coerce(u)
    if order < 1:
        raise ValueError("derivative order must be at least 1")
    return GenFunExpr(E.diff(u.expr, "x", order), u.domain)


ORACLE_JS = tuple(range(10, 21))


def oracle_error(result: GenNum, reference, js=ORACLE_JS) -> float:
    """Largest ``|result(2^-j) - reference(j)| / max(1, |reference(j)|)`` over ``js``.

    ``reference`` maps the sample index ``j`` to the representative value.
    """
    worst = 0.0
    for j in js:
        got = result.value_at(j)
        ref = float(reference(j))
        worst = max(worst, abs(got - ref) / max(1.0, abs(ref)))
    return worst


def gf_oracle_error(u, X, result: GenNum = None, js=ORACLE_JS, cfg: Config = DEFAULT) -> float:
    """Relative disagreement between :func:`gf_eval_gen` and :func:`gf_eval_real`."""
    u = GenFunExpr.coerce(u)
    X = GenNum.coerce(X)
    if result is None:
        result = gf_eval_gen(u, X, cfg)
    return oracle_error(result, lambda j: E.eval_real(u.expr, x=X.value_at(j), eps=2.0**-j), js)


# -- valuation and seminorms ------------------------------------------------------------

EPS_JS = tuple(range(4, 41))
GRID_POINTS = 257


@dataclass(frozen=True)
class ValuationEstimate:
    """Log-log fit of ``sup_K |∂^α u_ε|`` against ``ε``."""

    value: object  # Fraction when rounded, float otherwise, INF when negligible
    slope: float
    log_scale: float  # intercept: sup ≈ e^{log_scale} ε^{slope}
    rounded: bool
    sups: tuple = ()

    @property
    def scale(self) -> float:
        return math.exp(self.log_scale) if math.isfinite(self.log_scale) else 0.0


def _sups(e: E.Expr, lo, hi, js, cfg: Config) -> list:
    grid = np.linspace(float(lo), float(hi), max(GRID_POINTS, 2))
    out = []
    for j in js:
        with np.errstate(all="ignore"):
            vals = np.broadcast_to(np.asarray(E.eval_real(e, x=grid, eps=2.0**-j), dtype=float), grid.shape)
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"non-finite values on [{lo}, {hi}] at eps = 2^-{j}")
        out.append(float(np.max(np.abs(vals))))
    return out


def gf_valuation_estimate(u, K, alpha: int = 0, cfg: Config = DEFAULT) -> ValuationEstimate:
    """Estimate ``v_α(u)`` on the compact interval ``K = (lo, hi)``.

    The slope is rounded to the nearest rational with denominator ≤ 12 when
    within 0.05.  Sups below the negligibility threshold are excluded from
    the fit; if the finest sample is among them the net is reported as
    negligible (``v = inf``).
    """
    u = GenFunExpr.coerce(u)
    lo, hi = K
    if not (u.domain.contains(lo) and u.domain.contains(hi) and u.domain.contains_segment(lo, hi)):
        raise DomainError(f"K = [{lo}, {hi}] is not inside {u.domain}")
    e = u.expr if alpha == 0 else E.diff(u.expr, "x", alpha)
    sups = _sups(e, lo, hi, EPS_JS, cfg)
    pts = [(j, s) for j, s in zip(EPS_JS, sups) if s >= cfg.negligible]
    if len(pts) < 3 or sups[-1] < cfg.negligible:
        return ValuationEstimate(INF, INF, -INF, False, tuple(sups))
    xs = np.array([-j * math.log(2) for j, _ in pts])
    ys = np.array([math.log(s) for _, s in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    slope, intercept = float(slope), float(intercept)
    near = Fraction(slope).limit_denominator(12)
    if abs(float(near) - slope) <= 0.05:
        return ValuationEstimate(near, slope, intercept, True, tuple(sups))
    return ValuationEstimate(slope, slope, intercept, False, tuple(sups))


def gf_seminorm(u, K, alpha: int = 0, cfg: Config = DEFAULT) -> float:
    """Ultra-pseudo-seminorm ``e^{-v_α(u)}`` on ``K``."""
    v = gf_valuation_estimate(u, K, alpha, cfg).value
    return 0.0 if v == INF else math.exp(-float(v))


FIT_MARGIN = 0.05


def seminorm_ball_contains(u, K, alpha: int, rho, cfg: Config = DEFAULT) -> bool:
    """``p_α^g(u) < ρ``: compares ``v_α(u)`` with the leading exponents of ``ρ``.

    Raises :class:`Undecided` when the estimate lies within the fit margin of
    the largest leading exponent of ``ρ``.
    """
    from .gennum import is_invertible, is_positive

    rho = GenNum.coerce(rho)
    if not (is_invertible(rho) and is_positive(rho)):
        raise DomainError(f"radius {rho} must be positive and invertible")
    v = gf_valuation_estimate(u, K, alpha, cfg).value
    a = max(b.terms[0][0] for b in rho.branches)
    if v == INF or v > a + FIT_MARGIN:
        return True
    if v < a - FIT_MARGIN:
        return False
    raise Undecided(f"valuation estimate {v} within {FIT_MARGIN} of {a}", a)


# -- sharp continuity --------------------------------------------------------------------


def _neighbourhood(u: GenFunExpr, st) -> tuple:
    """Compact ``[st - h, st + h]`` inside the domain, ``h ≤ 1``."""
    st = float(st)
    h = 1.0
    for _ in range(60):
        if u.domain.contains_segment(st - h, st + h):
            return st - h, st + h
        h /= 2
    raise DomainError(f"{st} has no compact neighbourhood in {u.domain}")


def gf_continuity_bound(u, x, seq: SequenceSpec, cfg: Config = DEFAULT) -> VerdictReport:
    """Check ``|u(x_k) - u(x)|_e ≤ e^N |x_k - x|_e`` and the gabs Lipschitz form per row.

    ``N = ceil(-v)`` for the estimated valuation ``v`` of ``u'`` near ``st x``
    (0 when ``v ≥ 0``).  The Lipschitz constant is ``K = 2·S·ε^{-N}`` with
    ``S`` the fitted scale of ``sup |u'_ε|``.
    """
    u = GenFunExpr.coerce(u)
    x = GenNum.coerce(x)
    K = _neighbourhood(u, standard_part(x))
    est = gf_valuation_estimate(u, K, 1, cfg)
    v = est.value
    N = 0 if v == INF or v >= 0 else math.ceil(-v)
    S = max(est.scale, 1.0)
    lip = GenNum.eps(-N, Fraction(S).limit_denominator(10**6) * 2)
    ux = gf_eval_gen(u, x, cfg)
    report = VerdictReport(
        f"sharp continuity of {u}",
        ("k", "v_du", "v_dx", "lhs", "rhs", "holds", "lipschitz", "error"),
        summary={"N": N, "v_estimate": v, "lipschitz_K": str(lip)},
    )
    ok = True
    for k in range(1, seq.k_max + 1):
        row = {"k": k}
        try:
            xk = GenNum.coerce(seq.generator(k))
            du = gf_eval_gen(u, xk, cfg) - ux
            dx = xk - x
            vdu, vdu_hi = valuation_bound(du)
            vdx, vdx_hi = valuation_bound(dx)
            row.update(v_du=vdu, v_dx=vdx)
            row["lhs"] = 0.0 if vdu == INF else math.exp(-float(vdu))
            row["rhs"] = 0.0 if vdx == INF else math.exp(N - float(vdx))
            # v(du) is a lower bound, v(dx) must be exact for the check to bite
            if vdx != vdx_hi:
                raise Undecided("valuation of x_k - x hidden behind the tail", vdx)
            row["holds"] = vdu >= vdx - N
            row["lipschitz"] = le(gn_abs(du), lip * gn_abs(dx))
            ok = ok and row["holds"] and row["lipschitz"]
        except ColombeauError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
        report.rows.append(row)
    report.passed = ok
    return report


def gf_sharp_limit_holds(u, x, l, eta, delta, points, cfg: Config = DEFAULT) -> bool:
    """The sharp-limit predicate at one ``(η, δ)`` pair, checked on sample points.

    True when every ``y`` in ``points`` with ``⌈y - x⌉ < δ`` also has
    ``⌈u(y) - l⌉ < η``.  Raises :class:`Undecided` when a tail hides an order.
    """
    from .gennum import gn_abs, lt

    u = GenFunExpr.coerce(u)
    x, l = GenNum.coerce(x), GenNum.coerce(l)
    for y in points:
        y = GenNum.coerce(y)
        if lt(gn_abs(y - x), delta) and not lt(gn_abs(gf_eval_gen(u, y, cfg) - l), eta):
            return False
    return True


# -- invertible-point probe -----------------------------------------------------------------


@dataclass(frozen=True)
class ProbeBudget:
    """Probe grid: standard parts, offset orders and offset coefficients, in search order."""

    radii: tuple = tuple(Fraction(v) for v in ("0", "1/2", "-1/2", "1", "-1", "2", "-2", "3", "-3"))
    orders: tuple = (Fraction(1, 2),) + tuple(Fraction(n) for n in range(1, 11))
    coeffs: tuple = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2))

    def points(self, domain: OpenSet1D):
        for r in self.radii:
            if not domain.contains(r):
                continue
            for q in self.orders:
                for c in self.coeffs:
                    yield GenNum.from_terms([(0, r), (q, c)])


@dataclass(frozen=True)
class Witness:
    x: GenNum
    value: GenNum
    probes: int

    found = True


@dataclass(frozen=True)
class Exhausted:
    probes: int

    found = False


def _significant(value: GenNum, cfg: Config) -> bool:
    return any(abs(float(c)) > cfg.witness_tol and e < cfg.order for b in value.branches for e, c in b.terms)


def gf_probe_nonzero(u, budget: ProbeBudget = ProbeBudget(), cfg: Config = DEFAULT):
    """First invertible near-standard probe where ``u`` is visibly nonzero.

    A :class:`Witness` certifies ``u ≠ 0``; :class:`Exhausted` certifies nothing.
    Probes where evaluation fails (domain, non-near-standard intermediates)
    are skipped.
    """
    u = GenFunExpr.coerce(u)
    n = 0
    for x in budget.points(u.domain):
        n += 1
        try:
            value = gf_eval_gen(u, x, cfg)
        except (DomainError, Undecided):
            continue
        if _significant(value, cfg):
            return Witness(x, value, n)
    return Exhausted(n)


__all__ = [
    "Exhausted",
    "GenFunExpr",
    "ProbeBudget",
    "ValuationEstimate",
    "Witness",
    "eval_series",
    "gf_continuity_bound",
    "gf_derivative",
    "gf_eval_gen",
    "gf_eval_real",
    "gf_oracle_error",
    "gf_probe_nonzero",
    "gf_seminorm",
    "gf_sharp_limit_holds",
    "gf_valuation_estimate",
    "oracle_error",
    "seminorm_ball_contains",
]
