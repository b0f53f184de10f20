"""Text forms of generalized numbers, Fermat reals and open sets.

Grammars (whitespace is free, ``−`` is accepted for ``-``)::

    gennum  := branch ('||' branch)*
    branch  := ['+'|'-'] term (('+'|'-') term)* ['+' 'O(' 'eps' ['^' exp] ')']
    term    := coeff ['*' 'eps' ['^' exp]] | 'eps' ['^' exp]
    coeff   := number | '(' ['-'] number ['/' number] ')'
    exp     := integer | '(' ['-'] number ['/' number] ')'
    fermat  := same as branch with variable 't' and no tail marker
    openset := interval ('u' interval)*
    interval:= '(' endpoint ',' endpoint ')'     endpoint: rational, decimal or [-]inf

Integers and ``p/q`` fractions are read as exact rationals, decimal literals
as floats; decimal exponents are read exactly (``t^(0.6)`` is ``t^(3/5)``).
The printers emit the same grammar, so ``parse(format(v))`` round-trips.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .series import INF, EpsSeries

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\|\||[-+*/^(),]))"
)


@dataclass
class Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    src = text.replace("−", "-")
    out, pos = [], 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, *texts: str) -> bool:
        return self.peek.text in texts and self.peek.kind != "end"

    def accept(self, *texts: str):
        if self.at(*texts):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.next()

    def error(self, message: str):
        raise ParseError(message, self.text, self.peek.pos)


def number_value(text: str):
    """Integer literal -> Fraction, decimal literal -> float."""
    if re.fullmatch(r"\d+", text):
        return Fraction(int(text))
    return float(text)


def _signed_number(ts: TokenStream, exact: bool):
    neg = bool(ts.accept("-"))
    if not neg:
        ts.accept("+")
    tok = ts.next()
    if tok.kind != "num":
        ts.i -= 1
        ts.error("expected a number")
    value = Fraction(tok.text) if exact else number_value(tok.text)
    return -value if neg else value


def _paren_ratio(ts: TokenStream, exact: bool):
    ts.expect("(")
    num = _signed_number(ts, exact)
    if ts.accept("/"):
        den = _signed_number(ts, exact)
        if den == 0:
            ts.error("zero denominator")
        num = num / den
    ts.expect(")")
    return num


def _exponent(ts: TokenStream) -> Fraction:
    if ts.at("("):
        return Fraction(_paren_ratio(ts, exact=True))
    return Fraction(_signed_number(ts, exact=True))


def _series_branch(ts: TokenStream, var: str, allow_tail: bool, stops=("||",)):
    pairs, tail = [], INF
    sign = -1 if ts.accept("-") else 1
    if sign == 1:
        ts.accept("+")
    while True:
        if ts.at("O") and allow_tail:
            if sign < 0:
                ts.error("the tail marker must be added, not subtracted")
            ts.next()
            ts.expect("(")
            if not ts.at(var):
                ts.error(f"expected {var!r}")
            ts.next()
            tail = _exponent(ts) if ts.accept("^") else Fraction(1)
            ts.expect(")")
            break
        coeff = Fraction(1)
        exp = Fraction(0)
        if ts.at(var):
            ts.next()
            exp = _exponent(ts) if ts.accept("^") else Fraction(1)
        else:
            if ts.at("("):
                coeff = _paren_ratio(ts, exact=False)
            elif ts.peek.kind == "num":
                coeff = number_value(ts.next().text)
                if ts.accept("/"):  # bare p/q, accepted for convenience
                    den = ts.next()
                    if den.kind != "num" or number_value(den.text) == 0:
                        ts.i -= 1
                        ts.error("expected a nonzero denominator")
                    coeff = coeff / number_value(den.text)
            else:
                ts.error("expected a term")
            if ts.accept("*"):
                if not ts.at(var):
                    ts.error(f"expected {var!r}")
                ts.next()
                exp = _exponent(ts) if ts.accept("^") else Fraction(1)
        pairs.append((exp, sign * coeff))
        if ts.at("+"):
            ts.next()
            sign = 1
        elif ts.at("-"):
            ts.next()
            sign = -1
        else:
            break
    if not (ts.peek.kind == "end" or ts.at(*stops)):
        ts.error("unexpected token")
    return pairs, tail


def parse_series(text: str, var: str = "eps") -> EpsSeries:
    ts = TokenStream(text)
    pairs, tail = _series_branch(ts, var, allow_tail=True)
    if ts.peek.kind != "end":
        ts.error("unexpected token")
    return EpsSeries.make(pairs, tail)


def parse_gennum(text: str):
    from .gennum import GenNum

    ts = TokenStream(text)
    branches = []
    while True:
        pairs, tail = _series_branch(ts, "eps", allow_tail=True)
        branches.append(EpsSeries.make(pairs, tail))
        if not ts.accept("||"):
            break
    if ts.peek.kind != "end":
        ts.error("unexpected token")
    return GenNum.from_branches(branches)


def parse_fermat(text: str):
    from .fermat import fr_normalize

    ts = TokenStream(text)
    pairs, _ = _series_branch(ts, "t", allow_tail=False, stops=())
    if ts.peek.kind != "end":
        ts.error("unexpected token")
    return fr_normalize(pairs)


def _endpoint(ts: TokenStream):
    neg = bool(ts.accept("-"))
    if not neg:
        ts.accept("+")
    if ts.at("inf"):
        ts.next()
        return -INF if neg else INF
    tok = ts.next()
    if tok.kind != "num":
        ts.i -= 1
        ts.error("expected an endpoint")
    value = Fraction(tok.text)
    if ts.accept("/"):
        den = ts.next()
        if den.kind != "num" or Fraction(den.text) == 0:
            ts.i -= 1
            ts.error("expected a nonzero denominator")
        value /= Fraction(den.text)
    return -value if neg else value


def parse_openset(text: str):
    from .opensets import OpenSet1D

    ts = TokenStream(text)
    intervals = []
    while True:
        ts.expect("(")
        lo = _endpoint(ts)
        ts.expect(",")
        hi = _endpoint(ts)
        ts.expect(")")
        intervals.append((lo, hi))
        if not ts.accept("u", "U"):
            break
    if ts.peek.kind != "end":
        ts.error("unexpected token")
    try:
        return OpenSet1D(intervals)
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from None


def parse_literal(kind: str, text: str):
    """Dispatch to the grammar of ``kind`` (gennum, fermat, expr, openset)."""
    if kind == "gennum":
        return parse_gennum(text)
    if kind == "fermat":
        return parse_fermat(text)
    if kind == "openset":
        return parse_openset(text)
    if kind == "expr":
        from .expr import parse_expr

        return parse_expr(text)
    raise ValueError(f"unknown literal kind {kind!r}")


# -- printing ------------------------------------------------------------------


def format_exponent(e) -> str:
    e = Fraction(e)
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})" if e.denominator != 1 else f"({e.numerator})"


def format_coeff(c) -> str:
    """Printable magnitude of a coefficient (sign handled by the caller)."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return f"({c.numerator}/{c.denominator})"
    return repr(float(c))


def _monomial(var: str, e) -> str:
    if e == 1:
        return var
    return f"{var}^{format_exponent(e)}"


def format_terms(terms, var: str) -> str:
    parts = []
    for e, c in terms:
        neg = c < 0
        mag = abs(c)
        if e == 0:
            body = format_coeff(mag)
        elif isinstance(mag, Fraction) and mag == 1:
            body = _monomial(var, e)
        else:
            body = f"{format_coeff(mag)}*{_monomial(var, e)}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def format_series(s: EpsSeries, var: str = "eps") -> str:
    body = format_terms(s.terms, var)
    if s.tail == INF:
        return body or "0"
    marker = f"O({_monomial(var, s.tail)})"
    return f"{body} + {marker}" if body else marker


def format_gennum(x) -> str:
    return " || ".join(format_series(b, "eps") for b in x.branches)


def format_endpoint(v) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_openset(u) -> str:
    return " u ".join(f"({format_endpoint(a)},{format_endpoint(b)})" for a, b in u.intervals)
