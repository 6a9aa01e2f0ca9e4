"""Exact rational functions in one indeterminate ``q`` over the rationals.

A :class:`Scalar` is stored as ``q**val * num / den`` where ``num`` and
``den`` are polynomials with rational coefficients, neither divisible by
``q``, coprime, and ``den`` monic.  That normal form is unique, so equality
and hashing are structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

import flint

__all__ = [
    "Scalar",
    "ScalarParseError",
    "SingularLimitError",
    "parse_scalar",
    "ZERO",
    "ONE",
    "Q",
    "QBAR",
    "qpow",
]

_P = flint.fmpq_poly
_POLY_ONE = _P([1])

Coercible = Union["Scalar", int, Fraction]


class SingularLimitError(ArithmeticError):
    """The denominator vanishes at q = 1."""


class ScalarParseError(ValueError):
    pass


def _low_order(p) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no low order")


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Scalar:
    __slots__ = ("_num", "_den", "_val", "_hash")

    def __init__(self, value: Coercible = 0):
        if isinstance(value, Scalar):
            self._num, self._den, self._val = value._num, value._den, value._val
        elif isinstance(value, (int, Fraction)):
            fr = Fraction(value)
            self._num = _P([flint.fmpq(fr.numerator, fr.denominator)]) if fr else _P([])
            self._den = _POLY_ONE
            self._val = 0
        else:
            raise TypeError(f"cannot make a Scalar from {type(value).__name__}")
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, num, den, val: int) -> "Scalar":
        s = object.__new__(cls)
        s._num, s._den, s._val, s._hash = num, den, val, None
        return s

    @classmethod
    def _make(cls, num, den, val: int) -> "Scalar":
        if num.is_zero():
            return ZERO
        if den.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        k = _low_order(num)
        if k:
            num = num.right_shift(k)
            val += k
        k = _low_order(den)
        if k:
            den = den.right_shift(k)
            val -= k
        if den.degree() > 0:
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls._raw(num, den, val)

    @classmethod
    def from_laurent(cls, coeffs: dict[int, Coercible]) -> "Scalar":
        """Build ``sum(c * q**e)`` from an exponent -> coefficient mapping."""
        items = {e: Fraction(c) for e, c in coeffs.items() if Fraction(c) != 0}
        if not items:
            return ZERO
        lo = min(items)
        hi = max(items)
        cs = [flint.fmpq(0)] * (hi - lo + 1)
        for e, c in items.items():
            cs[e - lo] = flint.fmpq(c.numerator, c.denominator)
        return cls._make(_P(cs), _POLY_ONE, lo)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.is_one()

    def is_constant(self) -> bool:
        return self._val == 0 and self._den.is_one() and self._num.degree() <= 0

    def is_monomial(self) -> bool:
        """True for ``c * q**k`` with c a nonzero rational."""
        return self._den.is_one() and self._num.degree() == 0

    def laurent_terms(self) -> dict[int, Fraction]:
        """Exponent -> coefficient map of the numerator, shifted by ``val``."""
        return {
            i + self._val: _to_fraction(c)
            for i, c in enumerate(self._num.coeffs())
            if c != 0
        }

    def numerator(self) -> "Scalar":
        return Scalar._raw(self._num, _POLY_ONE, self._val) if not self.is_zero() else ZERO

    def denominator(self) -> "Scalar":
        return Scalar._raw(self._den, _POLY_ONE, 0)

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return _to_fraction(self._num.coeffs()[0]) if not self.is_zero() else Fraction(0)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        return NotImplemented

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self._val, other._val)
        a = self._num.left_shift(self._val - v)
        b = other._num.left_shift(other._val - v)
        if self._den == other._den:
            return Scalar._make(a + b, self._den, v)
        return Scalar._make(a * other._den + b * self._den, self._den * other._den, v)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return Scalar._raw(-self._num, self._den, self._val)

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        v = self._val + other._val
        if self._den.is_one() and other._den.is_one():
            return Scalar._raw(self._num * other._num, _POLY_ONE, v)
        return Scalar._make(self._num * other._num, self._den * other._den, v)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        return Scalar._make(self._den, self._num, -self._val)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_monomial():
            c = self._num.coeffs()[0]
            return Scalar._raw(_P([c**k]), _POLY_ONE, self._val * k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return (
            self._val == other._val
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (
                    self._val,
                    tuple(str(c) for c in self._num.coeffs()),
                    tuple(str(c) for c in self._den.coeffs()),
                )
            )
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- involution and specialisation -------------------------------------

    def bar(self) -> "Scalar":
        """Substitute q -> 1/q."""
        if self.is_zero():
            return self
        dn = self._num.degree()
        dd = self._den.degree()
        num = _P(list(reversed(self._num.coeffs())))
        den = _P(list(reversed(self._den.coeffs())))
        return Scalar._make(num, den, -self._val - dn + dd)

    def subs_power(self, k: int) -> "Scalar":
        """Substitute q -> q**k (k != 0)."""
        if k == 0:
            raise ValueError("q -> 1 is a specialisation; use limit_q1")
        if k < 0:
            return self.bar().subs_power(-k)
        if k == 1 or self.is_zero():
            return self

        def spread(p):
            cs = [flint.fmpq(0)] * (p.degree() * k + 1)
            for i, c in enumerate(p.coeffs()):
                cs[i * k] = c
            return _P(cs)

        return Scalar._make(spread(self._num), spread(self._den), self._val * k)

    def limit_q1(self) -> Fraction:
        """Exact value at q = 1."""
        d = self._den(1)
        if d == 0:
            raise SingularLimitError(f"denominator of {self} vanishes at q = 1")
        return _to_fraction(self._num(1) / d)

    def at(self, value: Fraction) -> Fraction:
        """Exact value at a rational point ``q = value`` (``value != 0``)."""
        x = flint.fmpq(Fraction(value).numerator, Fraction(value).denominator)
        d = self._den(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator of {self} vanishes at q = {value}")
        return _to_fraction(self._num(x) / d * x**self._val)

    # -- text -------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        num = _format_laurent(self._num, self._val)
        if self._den.is_one():
            return num
        return f"({num})/({_format_laurent(self._den, 0)})"

    def __repr__(self):
        return f"Scalar('{self}')"


def _format_laurent(p, shift: int) -> str:
    out = []
    coeffs = p.coeffs()
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        e = i + shift
        fc = _to_fraction(c)
        neg = fc < 0
        mag = -fc if neg else fc
        if e == 0:
            body = str(mag)
        else:
            var = "q" if e == 1 else f"q^{e}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


ZERO = Scalar._raw(_P([]), _POLY_ONE, 0)
ONE = Scalar._raw(_P([1]), _POLY_ONE, 0)
Q = Scalar._raw(_P([1]), _POLY_ONE, 1)
QBAR = Scalar._raw(_P([1]), _POLY_ONE, -1)


def qpow(k: int) -> Scalar:
    """``q**k``."""
    return Scalar._raw(_P([1]), _POLY_ONE, k)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(qbar|q)|(\S))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok not in ("q", "qbar") and not tok.isdigit() and tok not in "+-*/^()":
            raise ScalarParseError(f"unexpected character {tok!r} in {text!r}")
        toks.append(tok)
        pos = m.end()
    return toks


class _ScalarParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ScalarParseError(f"expected {expected or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Scalar:
        if not self.toks:
            raise ScalarParseError("empty scalar")
        value = self.expr()
        if self.peek() is not None:
            raise ScalarParseError(f"trailing input in {self.text!r}")
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self) -> Scalar:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Scalar:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("-", "+"):
                sign = -1 if self.take() == "-" else 1
            tok = self.take()
            if not tok.isdigit():
                raise ScalarParseError(f"integer exponent expected in {self.text!r}")
            return base ** (sign * int(tok))
        return base

    def atom(self) -> Scalar:
        tok = self.take()
        if tok == "q":
            return Q
        if tok == "qbar":
            return QBAR
        if tok.isdigit():
            return Scalar(int(tok))
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ScalarParseError(f"unexpected {tok!r} in {self.text!r}")


def parse_scalar(text: str) -> Scalar:
    """Parse a rational expression in ``q`` (``qbar`` is accepted for 1/q)."""
    return _ScalarParser(text).parse()
