"""Exact coefficient field: rational functions in q and a few parameter symbols.

Eigenvalue pairs are carried as squares, lambda = a^2 and mu = b^2, so that
sqrt(lambda*mu) = a*b stays inside the field.  Free parameters of the two
parameter algebra and the gl(2) example live in l1..l4.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import cached_property

import gmpy2
from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

SYMBOLS = ("q", "a", "b", "t", "l1", "l2", "l3", "l4")

_FIELD, *_GENS = field(",".join(SYMBOLS), QQ, grlex)
_RING = _FIELD.ring


class ScalarError(ValueError):
    pass


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class MissingSymbol(ScalarError):
    pass


class BadSpecialization(ScalarError):
    pass


class ParseError(ScalarError):
    pass


def _lift(x):
    if isinstance(x, Scalar):
        return x._f
    if isinstance(x, int):
        return _FIELD(x)
    if isinstance(x, Fraction):
        return _FIELD(QQ(x.numerator, x.denominator))
    if isinstance(x, type(gmpy2.mpq())):
        return _FIELD(QQ(int(x.numerator), int(x.denominator)))
    return None


class Scalar:
    """Immutable element of Q(q, a, b, t, l1, ..., l4)."""

    __slots__ = ("_f", "__dict__")

    def __init__(self, value=0):
        f = _lift(value)
        if f is None:
            if hasattr(value, "numer") and getattr(value, "field", None) == _FIELD:
                f = value
            else:
                raise TypeError(f"cannot make a Scalar from {type(value).__name__}")
        self._f = f

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = _lift(other)
        return NotImplemented if o is None else Scalar(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        return NotImplemented if o is None else Scalar(self._f - o)

    def __rsub__(self, other):
        o = _lift(other)
        return NotImplemented if o is None else Scalar(o - self._f)

    def __mul__(self, other):
        o = _lift(other)
        return NotImplemented if o is None else Scalar(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        if not o:
            raise DivisionByZero("division by the zero Scalar")
        return Scalar(self._f / o)

    def __rtruediv__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        if not self._f:
            raise DivisionByZero("division by the zero Scalar")
        return Scalar(o / self._f)

    def __neg__(self):
        return Scalar(-self._f)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self._f:
                raise DivisionByZero("negative power of zero")
            return Scalar((1 / self._f) ** (-k))
        return Scalar(self._f**k)

    def __bool__(self):
        return bool(self._f.numer)

    # canonical form -----------------------------------------------------
    @cached_property
    def canonical(self):
        """(numerator terms, denominator terms) with a primitive integer
        denominator whose grlex-leading coefficient is positive."""
        num, den = self._f.numer, self._f.denom
        dt = den.terms()
        lcm = 1
        for _, c in dt:
            lcm = lcm * int(c.denominator) // math.gcd(lcm, int(c.denominator))
        g = 0
        for _, c in dt:
            g = math.gcd(g, int(c * lcm))
        factor = QQ(lcm, g)
        if dt[0][1] < 0:
            factor = -factor
        num = tuple((m, Fraction(int(c.numerator), int(c.denominator)))
                    for m, c in (num * factor).terms())
        den = tuple((m, int(c)) for m, c in (den * factor).terms())
        return num, den

    def __eq__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return self._f == o

    def __hash__(self):
        return hash(self.canonical)

    @property
    def numerator(self):
        return self._f.numer

    @property
    def denominator(self):
        return self._f.denom

    def symbols(self) -> set[str]:
        used = set()
        for poly in (self._f.numer, self._f.denom):
            for m in poly.monoms():
                used.update(SYMBOLS[i] for i, e in enumerate(m) if e)
        return used

    def is_constant(self) -> bool:
        return not self.symbols()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise MissingSymbol(f"{self} is not a constant")
        return Fraction(self._f.numer.LC if self._f.numer else 0) / Fraction(self._f.denom.LC)

    def subs(self, assignment: dict) -> "Scalar":
        """Partial substitution of symbols by Scalars (or rationals)."""
        vals = []
        for s, g in zip(SYMBOLS, _GENS):
            vals.append(_lift(assignment[s]) if s in assignment else g)
        num = _eval_poly(self._f.numer, vals, _FIELD(0))
        den = _eval_poly(self._f.denom, vals, _FIELD(0))
        if not den:
            raise BadSpecialization(f"denominator of {self} vanishes under {assignment}")
        return Scalar(num / den)

    def diff(self, symbol: str) -> "Scalar":
        i = SYMBOLS.index(symbol)
        num, den = self._f.numer, self._f.denom
        dn, dd = num.diff(_RING.gens[i]), den.diff(_RING.gens[i])
        return Scalar(_FIELD(dn * den - num * dd) / _FIELD(den * den))

    def __repr__(self):
        return f"Scalar({render(self)!r})"

    def __str__(self):
        return render(self)


def _eval_poly(poly, values, zero):
    total = zero
    for monom, coeff in poly.terms():
        term = coeff
        for v, e in zip(values, monom):
            if e:
                term = term * v**e
        total = total + term
    return total


def symbol(name: str) -> Scalar:
    return Scalar(_GENS[SYMBOLS.index(name)])


q = symbol("q")
a = symbol("a")
b = symbol("b")
t = symbol("t")
ONE = Scalar(1)
ZERO = Scalar(0)


def lam() -> Scalar:
    return a * a


def mu() -> Scalar:
    return b * b


def quantum_integer(k: int) -> Scalar:
    """k-hat = sum_{i=1}^{k} q^{-2i+2}."""
    if k < 0:
        raise ValueError("quantum integers are defined here for k >= 0")
    total = ZERO
    for i in range(1, k + 1):
        total = total + q ** (-2 * i + 2)
    return total


# specialization ---------------------------------------------------------

class Specialization:
    """Assignment symbol -> exact rational; a ring homomorphism on Scalars.

    Values are gmpy2 ``mpq``.  q in {0, 1, -1} is refused unless
    ``allow_classical`` is set.
    """

    def __init__(self, values: dict, allow_classical: bool = False):
        self.values = {k: gmpy2.mpq(Fraction(v).numerator, Fraction(v).denominator)
                       for k, v in values.items()}
        for k in self.values:
            if k not in SYMBOLS:
                raise MissingSymbol(f"unknown symbol {k!r}")
        qv = self.values.get("q")
        if qv is not None and qv in (0, 1, -1) and not allow_classical:
            raise BadSpecialization(f"q = {qv} is excluded outside classical mode")
        self._cache: dict = {}

    def __call__(self, x) -> "gmpy2.mpq":
        return specialize(x, self)

    def as_dict(self):
        return {k: str(v) for k, v in sorted(self.values.items())}


def specialize(x, s: Specialization):
    """Exact rational value (gmpy2.mpq) of a Scalar at a specialization."""
    if not isinstance(x, Scalar):
        x = Scalar(x)
    hit = s._cache.get(x)
    if hit is not None:
        return hit
    missing = x.symbols() - set(s.values)
    if missing:
        raise MissingSymbol(f"no value for {sorted(missing)}")
    vals = [s.values.get(name, gmpy2.mpq(0)) for name in SYMBOLS]
    den = _eval_poly(x._f.denom, vals, gmpy2.mpq(0))
    if den == 0:
        raise BadSpecialization(f"denominator of {x} vanishes at {s.as_dict()}")
    val = gmpy2.mpq(_eval_poly(x._f.numer, vals, gmpy2.mpq(0))) / den
    s._cache[x] = val
    return val


# text rendering and parsing --------------------------------------------

def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _render_poly(terms) -> str:
    if not terms:
        return "0"
    out = []
    for monom, c in terms:
        c = Fraction(c)
        factors = []
        for name, e in zip(SYMBOLS, monom):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _render_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _render_coeff(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        if not out:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def render(x: Scalar) -> str:
    num, den = x.canonical
    n = _render_poly(num)
    if den == (((0,) * len(SYMBOLS), 1),):
        return n
    return f"({n})/({_render_poly(den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokens(text: str):
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad input at {pos}: {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            yield ("int", int(m.group(1)))
        elif m.group(2):
            yield ("sym", m.group(2))
        else:
            if m.group(3) not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}")
            yield ("op", m.group(3))
    yield ("end", None)


class _Parser:
    def __init__(self, text, resolve=None):
        self.toks = list(_tokens(text))
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok[1]!r}")

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer literal")
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return Scalar(val)
        if kind == "sym":
            if val in SYMBOLS:
                return symbol(val)
            if self.resolve is not None:
                return self.resolve(val)
            raise ParseError(f"unknown symbol {val!r}")
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse(text: str, resolve=None):
    """Parse the text grammar; ``resolve`` maps extra names (generators)."""
    p = _Parser(text, resolve)
    val = p.expr()
    if p.peek()[0] != "end":
        raise ParseError(f"trailing input: {p.peek()[1]!r}")
    return val


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse(x)
    return Scalar(x)
