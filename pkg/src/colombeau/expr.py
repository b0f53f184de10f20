"""Expression trees in ``x`` and ``eps``: parsing, printing, derivatives, evaluation.

Grammar (recursive descent, usual precedence, ``^`` binds tightest and is
right associative, exponents must fold to a rational constant)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' unary]
    atom   := number | name | func '(' expr ')' | '(' expr ')'

Smart constructors fold constants and drop neutral elements, which keeps
repeated symbolic differentiation from blowing up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ParseError
from .literals import TokenStream, number_value
from .series import Coeff, coeff_pow, elementary_at

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


class Expr:
    """Base class of expression nodes."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, lift(other))

    def __radd__(self, other):
        return add(lift(other), self)

    def __sub__(self, other):
        return sub(self, lift(other))

    def __rsub__(self, other):
        return sub(lift(other), self)

    def __mul__(self, other):
        return mul(self, lift(other))

    def __rmul__(self, other):
        return mul(lift(other), self)

    def __truediv__(self, other):
        return div(self, lift(other))

    def __rtruediv__(self, other):
        return div(lift(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, p):
        return power(self, p)

    def __str__(self):
        return to_str(self)


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Coeff

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, repr=False)
class Var(Expr):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, repr=False)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, repr=False)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, repr=False)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True, repr=False)
class Func(Expr):
    name: str
    arg: Expr


for _cls in (Add, Sub, Mul, Div, Neg, Pow, Func):
    _cls.__repr__ = lambda self: f"Expr({to_str(self)!r})"

X = Var("x")
EPS = Var("eps")
ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def lift(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Const(Fraction(v))
    if isinstance(v, float):
        return Const(v)
    raise TypeError(f"cannot use {v!r} in an expression")


def _is_const(e: Expr, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


# -- smart constructors ----------------------------------------------------------


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if a == b:
        return ZERO
    if isinstance(b, Neg):
        return add(a, b.arg)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a, -1):
        return neg(b)
    if _is_const(b, -1):
        return neg(a)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    if isinstance(b, Const):
        return mul(b, a)
    if isinstance(a, Const) and isinstance(b, Mul) and isinstance(b.left, Const):
        return mul(Const(a.value * b.left.value), b.right)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) and not _is_const(b, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    if isinstance(a, Neg):
        return neg(div(a.arg, b))
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(base: Expr, p) -> Expr:
    p = Fraction(p)
    if p == 0:
        return ONE
    if p == 1:
        return base
    if isinstance(base, Const):
        try:
            if base.value != 0 or p > 0:
                return Const(coeff_pow(base.value, p))
        except DomainError:
            pass
    if isinstance(base, Pow) and p.denominator == 1 and base.exponent.denominator == 1:
        return power(base.base, base.exponent * p)
    return Pow(base, p)


def func(name: str, arg: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if isinstance(arg, Const):
        v = arg.value
        trivial = {
            "exp": v == 0,
            "sin": v == 0,
            "cos": v == 0,
            "log": v == 1,
            "sqrt": v == 0 or v == 1,
        }[name]
        if trivial:
            return Const(elementary_at(name, Fraction(v))) if name != "sqrt" else Const(Fraction(v))
    return Func(name, arg)


def sin(a):
    return func("sin", lift(a))


def cos(a):
    return func("cos", lift(a))


def exp(a):
    return func("exp", lift(a))


def log(a):
    return func("log", lift(a))


def sqrt(a):
    return func("sqrt", lift(a))


# -- structure ---------------------------------------------------------------------


def children(e: Expr) -> tuple:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Neg):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Func):
        return (e.arg,)
    return ()


def depends_on(e: Expr, name: str) -> bool:
    if isinstance(e, Var):
        return e.name == name
    return any(depends_on(c, name) for c in children(e))


def variables(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    out = set()
    for c in children(e):
        out |= variables(c)
    return out


def substitute(e: Expr, name: str, value) -> Expr:
    """Replace variable ``name`` by an expression (rebuilt through the smart constructors)."""
    value = lift(value)
    return _rebuild(e, lambda v: value if v.name == name else v)


def _rebuild(e: Expr, on_var) -> Expr:
    if isinstance(e, Var):
        return on_var(e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return add(_rebuild(e.left, on_var), _rebuild(e.right, on_var))
    if isinstance(e, Sub):
        return sub(_rebuild(e.left, on_var), _rebuild(e.right, on_var))
    if isinstance(e, Mul):
        return mul(_rebuild(e.left, on_var), _rebuild(e.right, on_var))
    if isinstance(e, Div):
        return div(_rebuild(e.left, on_var), _rebuild(e.right, on_var))
    if isinstance(e, Neg):
        return neg(_rebuild(e.arg, on_var))
    if isinstance(e, Pow):
        return power(_rebuild(e.base, on_var), e.exponent)
    if isinstance(e, Func):
        return func(e.name, _rebuild(e.arg, on_var))
    raise TypeError(e)


# -- differentiation -----------------------------------------------------------------


def diff(e: Expr, var: str = "x", order: int = 1) -> Expr:
    """Symbolic derivative of order ``order`` with respect to ``var``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    for _ in range(order):
        e = _diff1(e, var)
    return e


def _diff1(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if not depends_on(e, var):
        return ZERO
    if isinstance(e, Add):
        return add(_diff1(e.left, var), _diff1(e.right, var))
    if isinstance(e, Sub):
        return sub(_diff1(e.left, var), _diff1(e.right, var))
    if isinstance(e, Mul):
        a, b = e.left, e.right
        return add(mul(_diff1(a, var), b), mul(a, _diff1(b, var)))
    if isinstance(e, Div):
        a, b = e.left, e.right
        if not depends_on(b, var):
            return div(_diff1(a, var), b)
        num = sub(mul(_diff1(a, var), b), mul(a, _diff1(b, var)))
        return div(num, power(b, 2))
    if isinstance(e, Neg):
        return neg(_diff1(e.arg, var))
    if isinstance(e, Pow):
        p = e.exponent
        return mul(mul(Const(p), power(e.base, p - 1)), _diff1(e.base, var))
    if isinstance(e, Func):
        a = e.arg
        da = _diff1(a, var)
        if e.name == "sin":
            return mul(func("cos", a), da)
        if e.name == "cos":
            return mul(neg(func("sin", a)), da)
        if e.name == "exp":
            return mul(e, da)
        if e.name == "log":
            return div(da, a)
        if e.name == "sqrt":
            return div(da, mul(Const(Fraction(2)), e))
    raise TypeError(e)


# -- polynomial view -------------------------------------------------------------------


def as_polynomial(e: Expr, var: str = "x"):
    """Coefficients ``{k: c_k}`` with ``e = Σ c_k var^k`` and ``c_k`` free of ``var``, or None."""
    if not depends_on(e, var):
        return {0: e}
    if isinstance(e, Var):
        return {1: ONE}
    if isinstance(e, (Add, Sub)):
        a, b = as_polynomial(e.left, var), as_polynomial(e.right, var)
        if a is None or b is None:
            return None
        op = add if isinstance(e, Add) else sub
        out = {k: a.get(k, ZERO) for k in set(a) | set(b)}
        for k in b:
            out[k] = op(out[k], b[k])
        return out
    if isinstance(e, Neg):
        a = as_polynomial(e.arg, var)
        return None if a is None else {k: neg(v) for k, v in a.items()}
    if isinstance(e, Mul):
        a, b = as_polynomial(e.left, var), as_polynomial(e.right, var)
        if a is None or b is None:
            return None
        return _poly_mul(a, b)
    if isinstance(e, Div):
        if depends_on(e.right, var):
            return None
        a = as_polynomial(e.left, var)
        return None if a is None else {k: div(v, e.right) for k, v in a.items()}
    if isinstance(e, Pow):
        p = e.exponent
        if p.denominator != 1 or p < 0:
            return None
        base = as_polynomial(e.base, var)
        if base is None:
            return None
        out = {0: ONE}
        for _ in range(int(p)):
            out = _poly_mul(out, base)
        return out
    return None


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, ca in a.items():
        for j, cb in b.items():
            out[i + j] = add(out.get(i + j, ZERO), mul(ca, cb))
    return out


def is_polynomial(e: Expr, var: str = "x") -> bool:
    return as_polynomial(e, var) is not None


# -- numeric evaluation --------------------------------------------------------------


def _scalar_fn(name: str, v):
    if name == "log" and v <= 0:
        raise DomainError(f"log of non-positive value {v}")
    if name == "sqrt":
        if v < 0:
            raise DomainError(f"sqrt of negative value {v}")
        return coeff_pow(v, Fraction(1, 2)) if isinstance(v, Fraction) else math.sqrt(v)
    try:
        return elementary_at(name, v)
    except OverflowError:
        raise DomainError(f"{name}({v}) overflows") from None


def _array_fn(name: str, v: np.ndarray) -> np.ndarray:
    if name == "log" and np.any(v <= 0):
        raise DomainError("log of non-positive value")
    if name == "sqrt" and np.any(v < 0):
        raise DomainError("sqrt of negative value")
    with np.errstate(over="ignore"):
        return getattr(np, name)(v)


def eval_real(e: Expr, x=None, eps=None):
    """Numeric value at ``x`` (scalar or numpy array) and ``eps``.

    Rational inputs stay exact through rational operations.
    """
    env = {"x": x, "eps": eps}
    if any(isinstance(v, np.ndarray) for v in env.values()):
        # array mode: constants as floats so numpy never sees object dtype
        env = {k: None if v is None else np.asarray(v, dtype=float) for k, v in env.items()}
        env["_float"] = True
    return _eval(e, env)


def eval_env(e: Expr, env: dict):
    return _eval(e, env)


def _eval(e: Expr, env: dict):
    if isinstance(e, Const):
        return float(e.value) if env.get("_float") else e.value
    if isinstance(e, Var):
        v = env.get(e.name)
        if v is None:
            raise DomainError(f"variable {e.name!r} has no value")
        return v
    if isinstance(e, Add):
        return _eval(e.left, env) + _eval(e.right, env)
    if isinstance(e, Sub):
        return _eval(e.left, env) - _eval(e.right, env)
    if isinstance(e, Mul):
        return _eval(e.left, env) * _eval(e.right, env)
    if isinstance(e, Div):
        den = _eval(e.right, env)
        if np.any(np.asarray(den) == 0):
            raise DomainError("division by zero")
        return _eval(e.left, env) / den
    if isinstance(e, Neg):
        return -_eval(e.arg, env)
    if isinstance(e, Pow):
        b = _eval(e.base, env)
        p = e.exponent
        if isinstance(b, np.ndarray):
            if p.denominator != 1 and np.any(b < 0):
                raise DomainError("non-integer power of a negative value")
            if p < 0 and np.any(b == 0):
                raise DomainError("negative power of zero")
            return b ** float(p)
        if p < 0 and b == 0:
            raise DomainError("negative power of zero")
        return coeff_pow(b, p) if isinstance(b, Fraction) else _float_pow(b, p)
    if isinstance(e, Func):
        v = _eval(e.arg, env)
        if isinstance(v, np.ndarray):
            return _array_fn(e.name, v)
        return _scalar_fn(e.name, v)
    raise TypeError(e)


def _float_pow(b: float, p: Fraction) -> float:
    if p.denominator == 1:
        return float(b) ** int(p)
    if b < 0:
        raise DomainError("non-integer power of a negative value")
    return float(b) ** float(p)


# -- printing -----------------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 5)  # atoms, calls and (parenthesized) constants


def _const_str(v) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator) if v >= 0 else f"({v.numerator})"
        return f"({v.numerator}/{v.denominator})"
    return repr(v) if v >= 0 else f"({v!r})"


def _paren(e: Expr, min_prec: int) -> str:
    s = to_str(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_str(e: Expr) -> str:
    if isinstance(e, Const):
        return _const_str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return f"{_paren(e.left, 1)} + {_paren(e.right, 1)}"
    if isinstance(e, Sub):
        return f"{_paren(e.left, 1)} - {_paren(e.right, 2)}"
    if isinstance(e, Mul):
        return f"{_paren(e.left, 2)}*{_paren(e.right, 3)}"
    if isinstance(e, Div):
        return f"{_paren(e.left, 2)}/{_paren(e.right, 3)}"
    if isinstance(e, Neg):
        return f"-{_paren(e.arg, 4)}"
    if isinstance(e, Pow):
        p = e.exponent
        ps = str(p.numerator) if p.denominator == 1 and p >= 0 else (
            f"({p.numerator})" if p.denominator == 1 else f"({p.numerator}/{p.denominator})"
        )
        return f"{_paren(e.base, 5)}^{ps}"
    if isinstance(e, Func):
        return f"{e.name}({to_str(e.arg)})"
    raise TypeError(e)


# -- parsing --------------------------------------------------------------------------------


def parse_expr(text: str, variables=("x", "eps")) -> Expr:
    """Parse an infix expression over the given variable names."""
    ts = TokenStream(text)
    e = _parse_sum(ts, variables)
    if ts.peek.kind != "end":
        ts.error("unexpected token")
    return e


def _parse_sum(ts, names):
    e = _parse_product(ts, names)
    while ts.at("+", "-"):
        op = ts.next().text
        rhs = _parse_product(ts, names)
        e = add(e, rhs) if op == "+" else sub(e, rhs)
    return e


def _parse_product(ts, names):
    e = _parse_unary(ts, names)
    while ts.at("*", "/"):
        op = ts.next().text
        rhs = _parse_unary(ts, names)
        e = mul(e, rhs) if op == "*" else div(e, rhs)
    return e


def _parse_unary(ts, names):
    if ts.accept("-"):
        return neg(_parse_unary(ts, names))
    if ts.accept("+"):
        return _parse_unary(ts, names)
    return _parse_power(ts, names)


def _parse_power(ts, names):
    base = _parse_atom(ts, names)
    if ts.at("^"):
        pos = ts.next().pos
        ex = _parse_unary(ts, names)
        if not isinstance(ex, Const):
            raise ParseError("exponent must be a rational constant", ts.text, pos + 1)
        v = ex.value
        p = v if isinstance(v, Fraction) else Fraction(repr(v))
        return power(base, p)
    return base


def _parse_atom(ts, names):
    tok = ts.peek
    if tok.kind == "num":
        ts.next()
        return Const(number_value(tok.text))
    if tok.kind == "name":
        ts.next()
        if tok.text in FUNCTIONS:
            ts.expect("(")
            arg = _parse_sum(ts, names)
            ts.expect(")")
            return func(tok.text, arg)
        if tok.text in names:
            return Var(tok.text)
        ts.i -= 1
        ts.error(f"unknown name {tok.text!r}")
    if ts.accept("("):
        e = _parse_sum(ts, names)
        ts.expect(")")
        return e
    ts.error("expected a number, variable, function or '('")
