"""Thickenings and the Fermat-Reyes incremental ratio.

For ``(x, h)`` in the near-standard thickening of ``U`` the ratio
``r(x, h) = ∫_0^1 f'(x + s h) ds`` satisfies ``f(x + h) = f(x) + h·r(x, h)``
and ``r(x, 0) = f'(x)``.  Polynomials get the exact divided-difference
formula; everything else integrates the series-valued integrand
``s ↦ f'(X + sH)`` coefficientwise by adaptive Gauss–Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import batch
from . import expr as E
from .config import DEFAULT, Config
from .errors import DomainError, NotInvertible, Undecided
from .genfun import GenFunExpr, eval_series, gf_eval_gen, oracle_error
from .gennum import GenNum, gn_invert, gn_near_standard_decompose, is_invertible
from .opensets import OpenSet1D
from .quadrature import integrate, integrate_array, integrate_scalar
from .report import VerdictReport
from .series import EpsSeries, power_int

__all__ = [
    "OpenSet1D",
    "ThickeningQuery",
    "Thickening",
    "thickening_contains",
    "near_std_thickening",
    "incremental_ratio",
    "incremental_ratio_numeric",
    "verify_fr",
]


@dataclass(frozen=True)
class ThickeningQuery:
    U: OpenSet1D
    x: object
    h: object

    def contains(self) -> bool:
        return thickening_contains(self.U, self.x, self.h)


def thickening_contains(U: OpenSet1D, x, h) -> bool:
    """Is the closed segment from ``x`` to ``x + h`` inside one interval of ``U``?"""
    return U.contains_segment(x, x + h)


@dataclass(frozen=True)
class Thickening:
    """Verdict of :func:`near_std_thickening`; ``a`` is half the distance to the complement."""

    contained: bool
    a: float = 0.0


def near_std_thickening(U, X, H) -> Thickening:
    """``(X, H) ∈ •thick U`` iff ``(st X, st H) ∈ thick U``.

    For vectors pass sequences of equal length for ``U`` (one open set per
    component), ``X`` and ``H``; the product set is then tested
    componentwise and ``a`` is the smallest per-component margin.
    """
    if isinstance(X, (list, tuple)):
        sets = U if isinstance(U, (list, tuple)) else [U] * len(X)
        if not len(sets) == len(X) == len(H):
            raise ValueError("U, X and H must have the same dimension")
        parts = [near_std_thickening(u, x, h) for u, x, h in zip(sets, X, H)]
        if not all(p.contained for p in parts):
            return Thickening(False)
        return Thickening(True, min(p.a for p in parts))
    stx, _ = gn_near_standard_decompose(X)
    sth, _ = gn_near_standard_decompose(H)
    if not thickening_contains(U, stx, sth):
        return Thickening(False)
    return Thickening(True, U.dist_to_complement(stx, stx + sth) / 2)


def _as_fun(f, U) -> GenFunExpr:
    f = GenFunExpr.coerce(f)
    if U is not None:
        f = GenFunExpr(f.expr, OpenSet1D.parse(U) if isinstance(U, str) else U)
    return f


def _pairs(X: GenNum, H: GenNum):
    k = math.lcm(X.k, H.k)
    return list(zip(X.refine(k), H.refine(k)))


def _poly_ratio(coeffs: dict, xb: EpsSeries, hb: EpsSeries, order) -> EpsSeries:
    """``Σ c_k Σ_{m<k} x^m (x+h)^{k-1-m}``, the exact divided difference."""
    xh = (xb + hb).truncate(order)
    top = max(coeffs)
    xp = [power_int(xb, m, order) for m in range(top)]
    yp = [power_int(xh, m, order) for m in range(top)]
    out = EpsSeries()
    for k, ck in coeffs.items():
        if k == 0:
            continue
        inner = EpsSeries()
        for m in range(k):
            inner = inner + (xp[m] * yp[k - 1 - m]).truncate(order)
        out = (out + (eval_series(ck, xb, order) * inner).truncate(order)).truncate(order)
    return out


class _OffGrid(Exception):
    """A node produced a term outside the exponent grid fixed by the probe."""


def _quad_ratio(df: E.Expr, xb: EpsSeries, hb: EpsSeries, cfg: Config) -> EpsSeries:
    """``∫_0^1 f'(xb + s·hb) ds`` coefficientwise.

    The coefficients live on a dense exponent grid fixed by one exact probe
    evaluation at ``s = 1/2``; the batched float kernel fills it for a whole
    panel at once, with the exact kernel as per-node fallback.
    """
    order = Fraction(cfg.order)
    probe = eval_series(df, xb + hb.scale(Fraction(1, 2)), order)
    tails = [probe.tail]
    d = batch.lattice_of([xb, hb, probe])
    lead = min(Fraction(probe.terms[0][0]) if probe.terms else Fraction(0), Fraction(0))
    top = min(probe.tail, order)
    width = max(0, math.ceil((top - lead) * d))

    def exact_rows(nodes) -> np.ndarray:
        out = np.zeros((len(nodes), width))
        for i, s in enumerate(nodes):
            val = eval_series(df, xb + hb.scale(float(s)), order)
            tails.append(val.tail)
            for e, c in val.terms:
                if e >= top:
                    break
                j = (e - lead) * d
                if j < 0 or j.denominator != 1:
                    raise _OffGrid(e)
                out[i, int(j)] = float(c)
        return out

    def rows(nodes) -> np.ndarray:
        try:
            b = batch.evaluate(df, batch.line_batch(xb, hb, nodes, d, order), order)
        except batch.Unsupported:
            return exact_rows(nodes)
        tails.append(b.tail)
        off = (b.lead - lead) * d
        if off.denominator != 1:
            raise _OffGrid(b.lead)
        off = int(off)
        data = b.data
        if off < 0:
            if np.any(data[:, :-off]):
                raise _OffGrid(b.lead)
            data, off = data[:, -off:], 0
        out = np.zeros((len(nodes), width))
        n = max(0, min(data.shape[1], width - off))
        out[:, off : off + n] = data[:, :n]
        return out

    try:
        vec = integrate_array(rows, 0.0, 1.0, tol=cfg.quad_tol, max_depth=cfg.quad_max_depth)
    except _OffGrid:
        return _quad_ratio_dict(df, xb, hb, cfg)
    pairs = [(lead + Fraction(i, d), float(c)) for i, c in enumerate(vec) if c]
    return EpsSeries.make(pairs, tail=min(tails))


def _quad_ratio_dict(df: E.Expr, xb: EpsSeries, hb: EpsSeries, cfg: Config) -> EpsSeries:
    """Exact-kernel fallback: one series evaluation per node, keyed by exponent."""
    order = Fraction(cfg.order)
    tails = []

    def exact(s: float) -> dict:
        val = eval_series(df, xb + hb.scale(s), order)
        tails.append(val.tail)
        return {e: float(c) for e, c in val.terms}

    coeffs = integrate(exact, 0.0, 1.0, tol=cfg.quad_tol, max_depth=cfg.quad_max_depth)
    return EpsSeries.make(coeffs.items(), tail=min(tails))


def incremental_ratio(f, X, H, U=None, cfg: Config = DEFAULT) -> GenNum:
    """``r(X, H)`` with ``f(X + H) = f(X) + H·r(X, H)``; ``U`` defaults to the domain of ``f``."""
    f = _as_fun(f, U)
    X, H = GenNum.coerce(X), GenNum.coerce(H)
    if not near_std_thickening(f.domain, X, H).contained:
        raise DomainError(f"(X, H) is not in the thickening of {f.domain}")
    coeffs = E.as_polynomial(f.expr, "x")
    if coeffs is not None:
        branches = [_poly_ratio(coeffs, xb, hb, cfg.order) for xb, hb in _pairs(X, H)]
    else:
        df = E.diff(f.expr, "x")
        branches = [_quad_ratio(df, xb, hb, cfg) for xb, hb in _pairs(X, H)]
    return GenNum.from_branches(branches)


def incremental_ratio_numeric(f, eps0: float, x0: float, h0: float, U=None, cfg: Config = DEFAULT) -> float:
    """``∫_0^1 f_ε'(x0 + s h0) ds`` at the fixed ``ε = eps0``."""
    f = _as_fun(f, U)
    if not thickening_contains(f.domain, x0, h0):
        raise DomainError(f"segment [{x0}, {x0 + h0}] is not inside {f.domain}")
    df = E.diff(f.expr, "x")
    return integrate_scalar(
        lambda s: float(E.eval_real(df, x=x0 + s * h0, eps=eps0)),
        0.0,
        1.0,
        tol=cfg.quad_tol,
        max_depth=cfg.quad_max_depth,
    )


# -- verification ---------------------------------------------------------------------------

RESIDUAL_TOL = 1e-10
ORACLE_TOL = 1e-8


def _magnitude(x: GenNum) -> GenNum:
    """Coefficientwise absolute values; products of magnitudes bound the summands of a product."""
    return x.map(lambda b: EpsSeries(tuple((e, abs(float(c))) for e, c in b.terms), b.tail))


def _coeff_gap(a: GenNum, b: GenNum, scale: GenNum | None = None) -> float:
    """Largest gap between known coefficients of ``a`` and ``b`` below their common tail.

    Each gap is divided by ``max(1, |a_e|, |b_e|, scale_e)``; ``scale`` carries
    the magnitude of the summands that produced the coefficient, so that
    rounding noise from cancellation is measured relative to its source.
    """
    parts = [a, b] + ([scale] if scale is not None else [])
    k = math.lcm(*(p.k for p in parts))
    worst = 0.0
    for i, (sa, sb) in enumerate(zip(a.refine(k), b.refine(k))):
        t = min(sa.tail, sb.tail)
        da, db = dict(sa.terms), dict(sb.terms)
        ds = dict(scale.refine(k)[i].terms) if scale is not None else {}
        for e in set(da) | set(db):
            if e >= t:
                continue
            x, y = float(da.get(e, 0)), float(db.get(e, 0))
            worst = max(worst, abs(x - y) / max(1.0, abs(x), abs(y), float(ds.get(e, 0))))
    return worst


def verify_fr(f, X, H, U=None, cfg: Config = DEFAULT, js=range(10, 21)) -> VerdictReport:
    """Check the Fermat-Reyes identity for one ``(f, X, H)``.

    Rows: the residual ``f(X+H) - f(X) - H·r`` (coefficient gaps scaled by
    the size of the summands behind each coefficient), ``r(X, 0) = f'(X)``, agreement
    with ``(f(X+H) - f(X))·H^{-1}`` when ``H`` is invertible, the fixed-ε
    residual with the quadrature ratio, and the fixed-ε oracle for ``r``.
    """
    f = _as_fun(f, U)
    X, H = GenNum.coerce(X), GenNum.coerce(H)
    report = VerdictReport(
        f"Fermat-Reyes identity for {f} at X = {X}, H = {H}",
        ("check", "value", "tolerance", "passed", "note"),
    )
    r = incremental_ratio(f, X, H, cfg=cfg)
    fxh = gf_eval_gen(f, X + H, cfg)
    fx = gf_eval_gen(f, X, cfg)
    poly = E.is_polynomial(f.expr, "x")

    def row(check, value, tol, note=""):
        report.rows.append({"check": check, "value": value, "tolerance": tol, "passed": value <= tol, "note": note})

    rhs = fx + H * r
    scale = _magnitude(fxh) + _magnitude(fx) + _magnitude(H) * _magnitude(r)
    row("residual", _coeff_gap(fxh, rhs, scale), RESIDUAL_TOL, f"tail {min(fxh.tail, rhs.tail)}")

    r0 = incremental_ratio(f, X, GenNum.const(0), cfg=cfg)
    dfx = gf_eval_gen(f.derivative(), X, cfg)
    if poly:
        row("r(X,0)=f'(X)", 0.0 if r0.equals(dfx) else _coeff_gap(r0, dfx) or math.inf, 0.0, "exact")
    else:
        row("r(X,0)=f'(X)", _coeff_gap(r0, dfx), RESIDUAL_TOL)

    try:
        invertible = is_invertible(H)
    except Undecided:
        invertible = False
    if invertible:
        try:
            hinv = gn_invert(H, cfg)
            quotient = (fxh - fx) * hinv
            scale = _magnitude(r) + (_magnitude(fxh) + _magnitude(fx)) * _magnitude(hinv)
            row("division path", _coeff_gap(r, quotient, scale), RESIDUAL_TOL, f"up to tail {min(r.tail, quotient.tail)}")
        except NotInvertible as exc:
            report.rows.append({"check": "division path", "passed": None, "note": str(exc)})
    else:
        report.rows.append({"check": "division path", "passed": None, "note": "H not invertible"})

    worst_res = 0.0
    rnum = {}
    for j in js:
        eps0 = 2.0**-j
        x0, h0 = X.value_at(j), H.value_at(j)
        rnum[j] = incremental_ratio_numeric(f, eps0, x0, h0, cfg=cfg)
        fa = float(E.eval_real(f.expr, x=x0 + h0, eps=eps0))
        fb = float(E.eval_real(f.expr, x=x0, eps=eps0))
        worst_res = max(worst_res, abs(fa - fb - h0 * rnum[j]))
    row("fixed-eps residual", worst_res, ORACLE_TOL)
    row("fixed-eps oracle for r", oracle_error(r, rnum.__getitem__, js), ORACLE_TOL, "relative")

    report.summary = {"r": str(r), "polynomial": poly}
    report.passed = all(rw["passed"] is not False for rw in report.rows)
    return report


def openness_check(U, X, H, a: float, perturbations: Sequence) -> bool:
    """Every ``(X + p, H + q)`` with ``d_F``-small ``p``, ``q`` stays in the thickening."""
    for p, q in perturbations:
        if not near_std_thickening(U, GenNum.coerce(X) + p, GenNum.coerce(H) + q).contained:
            return False
    return True
