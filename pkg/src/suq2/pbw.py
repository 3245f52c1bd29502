"""The *-algebra A(SU_q(2)) in PBW normal form a^alpha b^beta b*^gamma.

A negative ``alpha`` stands for a power of a*.  Products are normal ordered
in two steps: b and b* letters are pushed right across a-powers (each
crossing costs a power of q), then opposite a-powers are cancelled through
the sphere relations, which produce powers of s = b b*.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .qfield import ONE, ZERO, QScalar, qpow

__all__ = [
    "PBWMonomial",
    "AlgebraElement",
    "a_pair",
    "reduce_word",
    "multiply",
    "adjoint",
    "gen",
    "parse_monomial",
]


@dataclass(frozen=True, order=True)
class PBWMonomial:
    alpha: int = 0
    beta: int = 0
    gamma: int = 0

    def __post_init__(self):
        if self.beta < 0 or self.gamma < 0:
            raise ValueError("b and b* powers must be nonnegative")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.gamma)

    def __str__(self):
        parts = []
        if self.alpha:
            g = "a" if self.alpha > 0 else "a*"
            parts.append(g if abs(self.alpha) == 1 else f"{g}^{abs(self.alpha)}")
        for g, k in (("b", self.beta), ("b*", self.gamma)):
            if k:
                parts.append(g if k == 1 else f"{g}^{k}")
        return " ".join(parts) or "1"


@lru_cache(maxsize=None)
def a_pair(x: int, y: int) -> tuple[int, tuple[QScalar, ...]]:
    """Normal order a^x a^y (signed powers) as a^(x+y) * sum_i c_i s^i.

    ``s`` is b b* in the algebra (b^2 in the quotient used by the Hopf map);
    both satisfy s a = q^2 a s, so the same coefficients serve.
    """
    if x == 0 or y == 0 or (x > 0) == (y > 0):
        return x + y, (ONE,)
    poly = [ONE]
    if x > 0:
        # a^k a*^l = a^(k-1) a*^(l-1) (1 - q^(-2(l-1)) s)
        k, l = x, -y
        factors = [qpow(-2 * (l - t)) for t in range(1, min(k, l) + 1)]
    else:
        # a*^k a^l = a*^(k-1) a^(l-1) (1 - q^(2l) s)
        k, l = -x, y
        factors = [qpow(2 * (l - t + 1)) for t in range(1, min(k, l) + 1)]
    for c in factors:
        new = [ZERO] * (len(poly) + 1)
        for i, p in enumerate(poly):
            new[i] = new[i] + p
            new[i + 1] = new[i + 1] - c * p
        poly = new
    return x + y, tuple(poly)


class AlgebraElement:
    """Finite linear combination of PBW monomials with QScalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], QScalar] | None = None):
        self.terms: dict[tuple[int, int, int], QScalar] = {}
        for k, v in (terms or {}).items():
            k = k.as_tuple() if isinstance(k, PBWMonomial) else tuple(k)
            v = v if isinstance(v, QScalar) else QScalar(v)
            if v:
                self.terms[k] = self.terms.get(k, ZERO) + v
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def monomial(cls, alpha: int = 0, beta: int = 0, gamma: int = 0, coeff=ONE) -> "AlgebraElement":
        PBWMonomial(alpha, beta, gamma)
        return cls({(alpha, beta, gamma): coeff})

    @classmethod
    def scalar(cls, c) -> "AlgebraElement":
        return cls({(0, 0, 0): c})

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self):
        return _raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (QScalar, int)):
            c = other if isinstance(other, QScalar) else QScalar(other)
            return _raw({k: v * c for k, v in self.terms.items() if v * c})
        return multiply(self, _coerce(other))

    def __rmul__(self, other):
        if isinstance(other, (QScalar, int)):
            return self * other
        return multiply(_coerce(other), self)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not in the algebra")
        out = AlgebraElement.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def star(self) -> "AlgebraElement":
        return adjoint(self)

    def items(self):
        return self.terms.items()

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c, m = self.terms[k], str(PBWMonomial(*k))
            if m == "1":
                parts.append(f"({c})")
            elif c == 1:
                parts.append(m)
            else:
                parts.append(f"({c})*{m}")
        return " + ".join(parts)

    __repr__ = __str__


def _raw(terms: dict) -> AlgebraElement:
    obj = AlgebraElement.__new__(AlgebraElement)
    obj.terms = terms
    return obj


def _coerce(x) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    if isinstance(x, (int, QScalar)):
        return AlgebraElement.scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as an algebra element")


@lru_cache(maxsize=65536)
def _mono_mul(m1: tuple[int, int, int], m2: tuple[int, int, int]) -> tuple[tuple[tuple[int, int, int], QScalar], ...]:
    a1, b1, g1 = m1
    a2, b2, g2 = m2
    shift = qpow((b1 + g1) * a2)
    net, poly = a_pair(a1, a2)
    return tuple(((net, b1 + b2 + i, g1 + g2 + i), shift * c) for i, c in enumerate(poly) if c)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    out: dict[tuple[int, int, int], QScalar] = {}
    for k1, v1 in x.terms.items():
        for k2, v2 in y.terms.items():
            c12 = v1 * v2
            for k, c in _mono_mul(k1, k2):
                out[k] = out.get(k, ZERO) + c12 * c
    return _raw({k: v for k, v in out.items() if v})


def adjoint(x: AlgebraElement) -> AlgebraElement:
    """Anti-linear anti-automorphism with a -> a*, b -> b*."""
    out: dict[tuple[int, int, int], QScalar] = {}
    for (al, be, ga), v in x.terms.items():
        # (a^al b^be b*^ga)* = b^ga b*^be a^(-al)
        k = (-al, ga, be)
        out[k] = out.get(k, ZERO) + v.conj() * qpow(-(be + ga) * al)
    return _raw({k: v for k, v in out.items() if v})


_LETTER_MONO = {"a": (1, 0, 0), "a*": (-1, 0, 0), "b": (0, 1, 0), "b*": (0, 0, 1)}


def gen(name: str) -> AlgebraElement:
    """One of the generators a, a*, b, b*."""
    try:
        return AlgebraElement.monomial(*_LETTER_MONO[name])
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None


def _split_letters(letters: str | Iterable[str]) -> list[str]:
    if isinstance(letters, str):
        return re.findall(r"[ab]\*?", letters.replace(" ", ""))
    return list(letters)


def reduce_word(letters: str | Iterable[str]) -> AlgebraElement:
    """PBW normal form of a product of generators, e.g. ``"b a*"``."""
    out = AlgebraElement.scalar(1)
    for name in _split_letters(letters):
        out = out * gen(name)
    return out


_MONO_TOKEN = re.compile(r"\s*([ab])(\*?)(?:\^(\d+))?")


def parse_monomial(text: str) -> PBWMonomial:
    """Parse strings like ``"a^2 b b*"`` or ``"a*^3"`` already in PBW order."""
    alpha = beta = gamma = 0
    pos, last = 0, -1
    text = text.strip()
    if text in ("", "1"):
        return PBWMonomial()
    while pos < len(text):
        m = _MONO_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad monomial {text!r} at position {pos}")
        g, star, exp = m.group(1), m.group(2), int(m.group(3) or 1)
        rank = {"a": 0, "b": 1, "b*": 2}.get(g + star, 0)
        if rank <= last:
            raise ValueError(f"monomial {text!r} is not in PBW order")
        last = rank
        if g == "a":
            alpha = -exp if star else exp
        elif star:
            gamma = exp
        else:
            beta = exp
        pos = m.end()
    return PBWMonomial(alpha, beta, gamma)
