"""The operator algebra X generated by the shift operators a±, b± and adjoints.

Elements are kept as free words with a separate F-flagged part; F is central
and F^2 = 1.  Semantic equality goes through :func:`normal_form`, which
composes the basis action on v^j_{m,l} symbolically.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .pbw import AlgebraElement
from .qfield import ONE, ZERO, QScalar, qpow

__all__ = [
    "LETTERS",
    "DEGREE",
    "SHIFT",
    "XElement",
    "SymbolicOperator",
    "lift",
    "delta",
    "d",
    "degree0",
    "normal_form",
    "is_zero_operator",
    "word",
    "xletter",
    "F",
]

# letter codes: 0 a+, 1 a-, 2 b+, 3 b-, 4 a+*, 5 a-*, 6 b+*, 7 b-*
LETTERS = ("a+", "a-", "b+", "b-", "a+*", "a-*", "b+*", "b-*")
_CODE = {name: i for i, name in enumerate(LETTERS)}
_CODE.update({n.replace("-", "−"): i for n, i in list(_CODE.items())})
STAR = (4, 5, 6, 7, 0, 1, 2, 3)
DEGREE = (1, -1, 1, -1, -1, 1, -1, 1)
# shift of (2j, m, l) under each letter
SHIFT = (
    (1, 1, 1),
    (-1, 0, 0),
    (1, 1, 0),
    (-1, 0, -1),
    (-1, -1, -1),
    (1, 0, 0),
    (-1, -1, 0),
    (1, 0, 1),
)

Word = tuple[int, ...]


def word_degree(w: Word) -> int:
    return sum(DEGREE[c] for c in w)


def _add_into(acc: dict, key, val) -> None:
    s = acc.get(key)
    s = val if s is None else s + val
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


class XElement:
    """Sum of words plus (sum of words) times F."""

    __slots__ = ("plain", "f_part")

    def __init__(self, plain: Mapping[Word, QScalar] | None = None, f_part: Mapping[Word, QScalar] | None = None):
        self.plain: dict[Word, QScalar] = {}
        self.f_part: dict[Word, QScalar] = {}
        for src, dst in ((plain, self.plain), (f_part, self.f_part)):
            for w, c in (src or {}).items():
                _add_into(dst, tuple(w), c if isinstance(c, QScalar) else QScalar(c))

    @classmethod
    def _raw(cls, plain: dict, f_part: dict) -> "XElement":
        obj = cls.__new__(cls)
        obj.plain, obj.f_part = plain, f_part
        return obj

    @classmethod
    def scalar(cls, c=1) -> "XElement":
        return cls({(): c})

    def __add__(self, other):
        other = _coerce(other)
        plain, fp = dict(self.plain), dict(self.f_part)
        for w, c in other.plain.items():
            _add_into(plain, w, c)
        for w, c in other.f_part.items():
            _add_into(fp, w, c)
        return XElement._raw(plain, fp)

    __radd__ = __add__

    def __neg__(self):
        return XElement._raw({w: -c for w, c in self.plain.items()}, {w: -c for w, c in self.f_part.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def scale(self, c) -> "XElement":
        c = c if isinstance(c, QScalar) else QScalar(c)
        if not c:
            return XElement()
        return XElement._raw({w: v * c for w, v in self.plain.items()}, {w: v * c for w, v in self.f_part.items()})

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        other = _coerce(other)
        plain: dict[Word, QScalar] = {}
        fp: dict[Word, QScalar] = {}
        for (x, xf) in ((self.plain, False), (self.f_part, True)):
            for (y, yf) in ((other.plain, False), (other.f_part, True)):
                dst = fp if xf != yf else plain
                for w1, c1 in x.items():
                    for w2, c2 in y.items():
                        _add_into(dst, w1 + w2, c1 * c2)
        return XElement._raw(plain, fp)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self.scale(other)
        return _coerce(other) * self

    def __pow__(self, n: int):
        out = XElement.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return False
        return self.plain == other.plain and self.f_part == other.f_part

    def __hash__(self):
        return hash((frozenset(self.plain.items()), frozenset(self.f_part.items())))

    def is_zero(self) -> bool:
        return not self.plain and not self.f_part

    def times_F(self) -> "XElement":
        return XElement._raw(dict(self.f_part), dict(self.plain))

    def plain_only(self) -> "XElement":
        return XElement._raw(dict(self.plain), {})

    def f_only(self) -> "XElement":
        """The coefficient of F, as a plain element."""
        return XElement._raw(dict(self.f_part), {})

    def adjoint(self) -> "XElement":
        def star(part):
            out: dict[Word, QScalar] = {}
            for w, c in part.items():
                _add_into(out, tuple(STAR[x] for x in reversed(w)), c.conj())
            return out

        return XElement._raw(star(self.plain), star(self.f_part))

    def words(self):
        for w, c in self.plain.items():
            yield w, c, False
        for w, c in self.f_part.items():
            yield w, c, True

    def __str__(self):
        parts = []
        for w, c, f in self.words():
            body = " ".join(LETTERS[x] for x in w) or "1"
            if f:
                body += " F"
            parts.append(body if c == 1 else f"({c})*{body}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def _coerce(x) -> XElement:
    if isinstance(x, XElement):
        return x
    if isinstance(x, (int, QScalar)):
        return XElement.scalar(x)
    if isinstance(x, AlgebraElement):
        return lift(x)
    raise TypeError(f"cannot use {type(x).__name__} as an X element")


F = XElement._raw({}, {(): ONE})


def xletter(name: str) -> XElement:
    return XElement._raw({(_CODE[name],): ONE}, {})


def word(text: str | Iterable[str], coeff=ONE) -> XElement:
    """Single word from names, e.g. ``word("a+* a+")``."""
    names = text.split() if isinstance(text, str) else list(text)
    try:
        w = tuple(_CODE[n] for n in names)
    except KeyError as e:
        raise ValueError(f"unknown letter {e.args[0]!r}") from None
    return XElement({w: coeff})


# generator -> (plus letter, minus letter)
_LIFT = {"a": (0, 1), "a*": (4, 5), "b": (2, 3), "b*": (6, 7)}


@lru_cache(maxsize=4096)
def _lift_monomial(alpha: int, beta: int, gamma: int) -> tuple[Word, ...]:
    letters = [_LIFT["a" if alpha > 0 else "a*"]] * abs(alpha)
    letters += [_LIFT["b"]] * beta + [_LIFT["b*"]] * gamma
    return tuple(itertools.product(*letters)) if letters else ((),)


def lift(x: AlgebraElement) -> XElement:
    """Image of an algebra element under the approximate representation."""
    if isinstance(x, XElement):
        return x
    if isinstance(x, (int, QScalar)):
        return XElement.scalar(x)
    plain: dict[Word, QScalar] = {}
    for (al, be, ga), c in x.terms.items():
        for w in _lift_monomial(al, be, ga):
            _add_into(plain, w, c)
    return XElement._raw(plain, {})


def delta(T: XElement, times: int = 1) -> XElement:
    """The derivation [|D|, .]; multiplies each word by its degree."""
    def scaled(part):
        out = {}
        for w, c in part.items():
            k = word_degree(w)
            if k:
                out[w] = c * (k**times)
        return out

    return XElement._raw(scaled(T.plain), scaled(T.f_part))


def d(T: XElement) -> XElement:
    """[D, .] = delta(.) F."""
    return delta(T).times_F()


def degree0(T: XElement) -> XElement:
    return XElement._raw(
        {w: c for w, c in T.plain.items() if word_degree(w) == 0},
        {w: c for w, c in T.f_part.items() if word_degree(w) == 0},
    )


# -- symbolic operator normal form ----------------------------------------
# A coefficient function is a polynomial in Q = q^m, P = q^l, u_c = q_{m+c},
# v_c = q_{l+c}; monomial key (eQ, eP, us, vs) with us, vs sorted tuples.

Mono = tuple[int, int, tuple[int, ...], tuple[int, ...]]
Poly = dict  # Mono -> QScalar


def _poly_mul(x: Poly, y: Poly) -> Poly:
    out: Poly = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            for k, c in _mono_mul(k1, k2):
                _add_into(out, k, c1 * c2 * c)
    return out


@lru_cache(maxsize=None)
def _mono_mul(k1: Mono, k2: Mono) -> tuple[tuple[Mono, QScalar], ...]:
    eq, ep = k1[0] + k2[0], k1[1] + k2[1]
    terms: dict = {(eq, ep, (), ()): ONE}
    for which in (2, 3):
        a, b = set(k1[which]), set(k2[which])
        both = a & b
        single = tuple(sorted(a ^ b))
        new: dict = {}
        for (e1, e2, us, vs), c in terms.items():
            # u_c^2 = 1 - q^(2c) Q^2 (resp. P^2)
            parts = [((e1, e2), c)]
            for cc in both:
                nxt = []
                for (f1, f2), v in parts:
                    nxt.append(((f1, f2), v))
                    bump = (f1 + 2, f2) if which == 2 else (f1, f2 + 2)
                    nxt.append((bump, -v * qpow(2 * cc)))
                parts = nxt
            for (f1, f2), v in parts:
                key = (f1, f2, single, vs) if which == 2 else (f1, f2, us, single)
                _add_into(new, key, v)
        terms = new
    return tuple(terms.items())


def _poly_shift(p: Poly, dm: int, dl: int) -> Poly:
    """Substitute m -> m + dm, l -> l + dl."""
    if dm == 0 and dl == 0:
        return p
    out: Poly = {}
    for (eq, ep, us, vs), c in p.items():
        key = (eq, ep, tuple(u + dm for u in us), tuple(v + dl for v in vs))
        _add_into(out, key, c * qpow(dm * eq + dl * ep))
    return out


def _m(eq=0, ep=0, us=(), vs=(), c=ONE) -> Poly:
    return {(eq, ep, tuple(us), tuple(vs)): c}


_LETTER_COEFF = (
    _m(us=(1,), vs=(1,)),  # a+ : q_{m+1} q_{l+1}
    _m(1, 1, c=qpow(1)),  # a- : q^{m+l+1}
    _m(0, 1, us=(1,)),  # b+ : q^l q_{m+1}
    _m(1, 0, vs=(0,), c=-ONE),  # b- : -q^m q_l
    _m(us=(0,), vs=(0,)),  # a+* : q_m q_l
    _m(1, 1, c=qpow(1)),  # a-* : q^{m+l+1}
    _m(0, 1, us=(0,)),  # b+* : q^l q_m
    _m(1, 0, vs=(1,), c=-ONE),  # b-* : -q^m q_{l+1}
)


@dataclass(frozen=True)
class SymbolicOperator:
    """Map shift (d2j, dm, dl) -> coefficient polynomial, canonical."""

    terms: tuple

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return {s: dict(p) for s, p in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for shift, poly in self.terms:
            mons = []
            for (eq, ep, us, vs), c in sorted(poly, key=lambda kc: kc[0]):
                f = [f"Q^{eq}" if eq else "", f"P^{ep}" if ep else ""]
                f += [f"q_(m+{u})" for u in us] + [f"q_(l+{v})" for v in vs]
                f = "*".join(x for x in f if x)
                mons.append(f"({c})" + (f"*{f}" if f else ""))
            out.append(f"{shift}: " + " + ".join(mons))
        return "; ".join(out)


@lru_cache(maxsize=100000)
def _word_action(w: Word) -> tuple[tuple[int, int, int], tuple]:
    shift = (0, 0, 0)
    coeff: Poly = {(0, 0, (), ()): ONE}
    for x in reversed(w):
        coeff = _poly_mul(coeff, _poly_shift(_LETTER_COEFF[x], shift[1], shift[2]))
        s = SHIFT[x]
        shift = (shift[0] + s[0], shift[1] + s[1], shift[2] + s[2])
    return shift, tuple(coeff.items())


def _collect(part: Mapping[Word, QScalar]) -> SymbolicOperator:
    acc: dict = {}
    for w, c in part.items():
        shift, poly = _word_action(w)
        dst = acc.setdefault(shift, {})
        for k, v in poly:
            _add_into(dst, k, v * c)
    terms = tuple(sorted((s, tuple(sorted(p.items(), key=lambda kv: kv[0]))) for s, p in acc.items() if p))
    return SymbolicOperator(terms)


def normal_form(T: XElement) -> tuple[SymbolicOperator, SymbolicOperator]:
    """(plain part, F part) as canonical symbolic basis actions."""
    T = _coerce(T)
    return _collect(T.plain), _collect(T.f_part)


def is_zero_operator(T: XElement) -> bool:
    p, f = normal_form(T)
    return p.is_zero() and f.is_zero()


_XTOKEN = re.compile(r"\s*([ab])([+\-−])(\*?)")


def parse_word(text: str) -> XElement:
    """Parse ``"a+* a+"``-style words (spaces optional)."""
    codes, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _XTOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad X word {text!r} at position {pos}")
        codes.append(_CODE[m.group(1) + m.group(2).replace("−", "-") + m.group(3)])
        pos = m.end()
    return XElement({tuple(codes): ONE})
