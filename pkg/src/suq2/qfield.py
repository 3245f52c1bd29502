"""Exact rational functions of q over the rationals.

A :class:`QScalar` is a reduced fraction of two integer polynomials.  The
canonical form has coprime numerator and denominator (content included) and
a denominator with positive leading coefficient, so equal functions have
identical representations.  Negative powers of q live in the denominator.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from flint import fmpq, fmpz_poly

__all__ = [
    "QScalar",
    "PoleError",
    "Q",
    "ONE",
    "ZERO",
    "qpow",
    "q_number",
    "q_binomial",
    "geo_sum",
    "parse_qscalar",
]

Number = Union[int, Fraction]
_ONE_POLY = fmpz_poly([1])
_ZERO_POLY = fmpz_poly([])


class PoleError(ZeroDivisionError):
    """Evaluation at a root of the denominator."""


def _poly_str(p: fmpz_poly) -> str:
    coeffs = p.coeffs()
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if k == 0:
            body = str(c)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if c == 1 else f"{c}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


def _poly_terms(p: fmpz_poly) -> int:
    return sum(1 for c in p.coeffs() if c != 0)


class QScalar:
    """Element of Q(q) in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: fmpz_poly | Number | Iterable[int] = 0, den: fmpz_poly | Iterable[int] | None = None):
        if isinstance(num, QScalar):
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if isinstance(num, Fraction):
            n, d = fmpz_poly([num.numerator]), fmpz_poly([num.denominator])
        elif isinstance(num, int):
            n, d = fmpz_poly([num]), _ONE_POLY
        elif isinstance(num, fmpz_poly):
            n, d = num, _ONE_POLY
        else:
            n, d = fmpz_poly([int(c) for c in num]), _ONE_POLY
        if den is not None:
            den = den if isinstance(den, fmpz_poly) else fmpz_poly([int(c) for c in den])
            d = d * den
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _canon(n, d)
        self._hash = None

    @classmethod
    def _raw(cls, num: fmpz_poly, den: fmpz_poly) -> "QScalar":
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def make(cls, num: fmpz_poly, den: fmpz_poly) -> "QScalar":
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        n, d = _canon(num, den)
        return cls._raw(n, d)

    # -- field operations -------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return QScalar.make(self.num + other.num, self.den)
        return QScalar.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == 1 and other.den == 1:
            return QScalar._raw(self.num * other.num, _ONE_POLY)
        return QScalar.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.num == 0:
            raise ZeroDivisionError("division by the zero function")
        return QScalar.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            if self.num == 0:
                raise ZeroDivisionError("division by the zero function")
            return QScalar.make(self.den ** (-k), self.num ** (-k))
        return QScalar._raw(self.num**k, self.den**k)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()), tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def __bool__(self):
        return self.num != 0

    def is_zero(self) -> bool:
        return self.num == 0

    def conj(self) -> "QScalar":
        # q is a real parameter and coefficients are rational
        return self

    # -- evaluation -------------------------------------------------------
    def eval_at(self, q0: Number | str) -> Fraction:
        """Exact substitution q = q0."""
        q0 = Fraction(q0)
        x = fmpq(q0.numerator, q0.denominator)
        d = self.den(x)
        if d == 0:
            raise PoleError(f"pole at q={q0}: denominator {_poly_str(self.den)} vanishes")
        v = self.num(x) / d
        return Fraction(int(v.p), int(v.q))

    def __call__(self, q0: float) -> float:
        if isinstance(q0, (int, Fraction)) and not isinstance(q0, bool):
            return float(self.eval_at(q0))
        d = _horner(self.den, q0)
        if d == 0:
            raise PoleError(f"pole at q={q0}: denominator {_poly_str(self.den)} vanishes")
        return _horner(self.num, q0) / d

    def limit_at(self, q0: Number) -> Fraction:
        """Limit q -> q0, cancelling common roots at q0 first."""
        q0 = Fraction(q0)
        lin = fmpz_poly([-q0.numerator, q0.denominator])
        num, den = self.num, self.den
        while den != 0 and divmod(den, lin)[1] == 0:
            if num != 0 and divmod(num, lin)[1] == 0:
                num, den = num // lin, den // lin
            else:
                raise PoleError(f"q -> {q0} diverges")
        return QScalar.make(num, den).eval_at(q0)

    # -- rendering --------------------------------------------------------
    def num_coeffs(self) -> list[int]:
        return [int(c) for c in self.num.coeffs()] or [0]

    def den_coeffs(self) -> list[int]:
        return [int(c) for c in self.den.coeffs()]

    def to_json(self) -> dict:
        return {"num": self.num_coeffs(), "den": self.den_coeffs()}

    @classmethod
    def from_json(cls, obj: dict) -> "QScalar":
        return cls(obj["num"], obj["den"])

    def __str__(self):
        n = _poly_str(self.num)
        if self.den == 1:
            return n
        if _poly_terms(self.num) > 1:
            n = f"({n})"
        d = _poly_str(self.den)
        if _poly_terms(self.den) > 1 or "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"QScalar({self})"


def _horner(p: fmpz_poly, x):
    acc = 0.0
    for c in reversed(p.coeffs()):
        acc = acc * x + int(c)
    return acc


def _canon(n: fmpz_poly, d: fmpz_poly) -> tuple[fmpz_poly, fmpz_poly]:
    if n == 0:
        return _ZERO_POLY, _ONE_POLY
    if d == 1:
        return n, d
    g = n.gcd(d)
    if g != 1:
        n, d = n // g, d // g
    if d[d.degree()] < 0:
        n, d = -n, -d
    return n, d


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return QScalar(x)
    return NotImplemented


ZERO = QScalar(0)
ONE = QScalar(1)
Q = QScalar(fmpz_poly([0, 1]))


@lru_cache(maxsize=None)
def qpow(k: int) -> QScalar:
    """q**k for any integer k."""
    if k >= 0:
        return QScalar._raw(fmpz_poly([0] * k + [1]), _ONE_POLY)
    return QScalar._raw(_ONE_POLY, fmpz_poly([0] * (-k) + [1]))


def q_number(n: int) -> QScalar:
    """[n] = (q^n - q^-n)/(q - q^-1)."""
    if n == 0:
        return ZERO
    if n < 0:
        return -q_number(-n)
    acc = ZERO
    for k in range(n - 1, -n, -2):
        acc = acc + qpow(k)
    return acc


def q_binomial(n: int, k: int, base_exponent: int = 1) -> QScalar:
    """Gauss binomial coefficient in the base q**base_exponent."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if base_exponent == 0:
        raise ValueError("base exponent must be nonzero")
    t = qpow(base_exponent)
    out = ONE
    for i in range(k):
        out = out * (1 - t ** (n - i)) / (1 - t ** (i + 1))
    return out


def geo_sum(c: int) -> QScalar:
    """Sum over n >= 0 of q^(c n)."""
    if c <= 0:
        raise ValueError(f"geometric ratio exponent must be positive, got {c}")
    return 1 / (1 - qpow(c))


# -- literal parser -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            toks.append(("q", "q", start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, start))
        pos = m.end()
    return toks


class _ScalarParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", self.end)

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> QScalar:
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> QScalar:
        val = self.unary()
        while True:
            kind, tok, _ = self.peek()
            if tok == "*":
                self.take()
                val = val * self.unary()
            elif tok == "/":
                self.take()
                pos = self.peek()[2]
                rhs = self.unary()
                if rhs.is_zero():
                    raise ParseError("division by zero", pos)
                val = val / rhs
            elif kind in ("int", "q") or tok == "(":
                val = val * self.unary()
            else:
                return val

    def unary(self) -> QScalar:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
        return self.power()

    def power(self) -> QScalar:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, tok, pos = self.take()
            if kind != "int":
                raise ParseError("integer exponent expected", pos)
            base = base ** (sign * int(tok))
        return base

    def atom(self) -> QScalar:
        kind, tok, pos = self.take()
        if kind == "int":
            return QScalar(int(tok))
        if kind == "q":
            return Q
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected token {tok or 'end of input'!r}", pos)


def parse_qscalar(text: str) -> QScalar:
    """Parse a literal such as ``(3*q^2+1)/(2*(q^2-1))``."""
    p = _ScalarParser(text)
    val = p.expr()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {tok!r}", pos)
    return val
