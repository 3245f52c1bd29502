"""Hopf map r : X -> pi_+(A) (x) pi_-(A), the functionals tau_0, tau_1 and residues.

In pi_+ and pi_- the generator b acts diagonally (b eps_n = ±q^n eps_n) and
coincides with b*, so each tensor factor is a quotient monomial a^alpha b^m
with relations b a = q a b, a a* = 1 - b^2, a* a = 1 - q^2 b^2.

Tensor keys are flat 4-tuples (alpha_plus, m_plus, alpha_minus, m_minus).  The
graded variant prepends the X-degree, which lets one-form powers be expanded
without enumerating all X words (r is multiplicative and delta acts on the
degree-k component by k).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .pbw import a_pair
from .qfield import ONE, ZERO, QScalar, qpow
from .xalg import DEGREE, XElement, degree0, delta, word_degree

__all__ = [
    "TensorElement",
    "GradedTensor",
    "r_map",
    "r_word",
    "tau0",
    "tau1",
    "ncint",
    "functional",
    "INV",
    "PdoSum",
    "normalize_pdo",
    "ncint_pdo",
    "in_R",
]

Key = tuple[int, int, int, int]


def _add_into(acc: dict, key, val) -> None:
    s = acc.get(key)
    s = val if s is None else s + val
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


@lru_cache(maxsize=None)
def quotient_mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[tuple[tuple[int, int], QScalar], ...]:
    """(a^al b^m)(a^al' b^m') in the quotient, as ((alpha, m), coeff) pairs."""
    (al1, m1), (al2, m2) = x, y
    shift = qpow(m1 * al2)
    net, poly = a_pair(al1, al2)
    return tuple(((net, m1 + m2 + 2 * i), shift * c) for i, c in enumerate(poly) if c)


@lru_cache(maxsize=None)
def _key_mul(k1: Key, k2: Key) -> tuple[tuple[Key, QScalar], ...]:
    plus = quotient_mul((k1[0], k1[1]), (k2[0], k2[1]))
    minus = quotient_mul((k1[2], k1[3]), (k2[2], k2[3]))
    return tuple(((p[0], p[1], m[0], m[1]), cp * cm) for p, cp in plus for m, cm in minus)


class TensorElement:
    """Finite sum of c * pi_+(a^al b^m) (x) pi_-(a^al' b^m')."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, QScalar] | None = None):
        self.terms: dict[Key, QScalar] = {}
        for k, v in (terms or {}).items():
            _add_into(self.terms, tuple(k), v if isinstance(v, QScalar) else QScalar(v))

    @classmethod
    def _raw(cls, terms: dict) -> "TensorElement":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(out, k, v)
        return TensorElement._raw(out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(-ONE)

    def scale(self, c: QScalar) -> "TensorElement":
        return TensorElement._raw({k: v * c for k, v in self.terms.items()} if c else {})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        out: dict[Key, QScalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                c12 = c1 * c2
                for k, c in _key_mul(k1, k2):
                    _add_into(out, k, c12 * c)
        return TensorElement._raw(out)

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def adjoint(self) -> "TensorElement":
        out: dict[Key, QScalar] = {}
        for (ap, mp, am, mm), c in self.terms.items():
            # (a^al b^m)* = b^m a^-al = q^(-m al) a^-al b^m
            _add_into(out, (-ap, mp, -am, mm), c.conj() * qpow(-mp * ap - mm * am))
        return TensorElement._raw(out)

    def __str__(self):
        def f(al, m):
            s = ("a" if al > 0 else "a*") + (f"^{abs(al)}" if abs(al) > 1 else "") if al else ""
            s += (" b" + (f"^{m}" if m > 1 else "")) if m else ""
            return s.strip() or "1"

        parts = [f"({c}) {f(k[0], k[1])} ⊗ {f(k[2], k[3])}" for k, c in sorted(self.terms.items())]
        return " + ".join(parts) or "0"

    __repr__ = __str__


_R_LETTER: tuple[dict[Key, QScalar], ...] = (
    {(1, 0, 1, 0): ONE},  # a+  -> a (x) a
    {(0, 1, 0, 1): -qpow(1)},  # a-  -> -q b (x) b*
    {(1, 0, 0, 1): -ONE},  # b+  -> -a (x) b
    {(0, 1, -1, 0): -ONE},  # b-  -> -b (x) a*
    {(-1, 0, -1, 0): ONE},  # a+* -> a* (x) a*
    {(0, 1, 0, 1): -qpow(1)},  # a-* -> -q b* (x) b
    {(-1, 0, 0, 1): -ONE},  # b+* -> -a* (x) b
    {(0, 1, 1, 0): -ONE},  # b-* -> -b* (x) a
)


@lru_cache(maxsize=200000)
def r_word(w: tuple[int, ...]) -> TensorElement:
    """r of a single X word (memoized on prefixes)."""
    if not w:
        return TensorElement._raw({(0, 0, 0, 0): ONE})
    head = r_word(w[:-1])
    return head * TensorElement._raw(dict(_R_LETTER[w[-1]]))


def _r_part(part: Mapping[tuple[int, ...], QScalar]) -> TensorElement:
    out: dict[Key, QScalar] = {}
    for w, c in part.items():
        for k, v in r_word(w).terms.items():
            _add_into(out, k, v * c)
    return TensorElement._raw(out)


def r_map(T: XElement) -> TensorElement:
    """r of the plain part of T (use ``T.f_only()`` for the F coefficient)."""
    return _r_part(T.plain)


def tau1(alpha: int, m: int, sign: int = 1) -> QScalar:
    return ONE if alpha == 0 and m == 0 else ZERO


@lru_cache(maxsize=None)
def tau0(alpha: int, m: int, sign: int = 1) -> QScalar:
    """Regularized trace on pi_sign: sum_n (sign q^n)^m for alpha = 0, m > 0."""
    if alpha != 0 or m == 0:
        return ZERO
    s = ONE if sign > 0 or m % 2 == 0 else -ONE
    return s / (1 - qpow(m))


def functional(t: TensorElement | Mapping[Key, QScalar], kind: str) -> QScalar:
    """Apply one of the tensor functionals: '11', '10', '01', '00' or the k-residues.

    ``kind`` is '3', '2', '1' for the plain residues and 'F1' for the F-part
    residue of order one.
    """
    terms = t.terms if isinstance(t, TensorElement) else t
    acc = ZERO
    for (ap, mp, am, mm), c in terms.items():
        t1p, t1m = tau1(ap, mp), tau1(am, mm)
        if kind == "3":
            v = 2 * t1p * t1m
        elif kind == "2":
            v = 2 * (t1p * tau0(am, mm, -1) + tau0(ap, mp, 1) * t1m)
        elif kind == "1":
            v = 2 * tau0(ap, mp, 1) * tau0(am, mm, -1) - t1p * t1m / 2
        elif kind == "F1":
            v = tau0(ap, mp, 1) * t1m - t1p * tau0(am, mm, -1)
        else:
            raise ValueError(f"unknown functional {kind!r}")
        if v:
            acc = acc + c * v
    return acc


def ncint(T: XElement, k: int) -> QScalar:
    """Residue of Tr(T |D|^(-k-s)) at s = 0, for T in the algebra of X and F."""
    if k not in (1, 2, 3):
        raise ValueError(f"power of |D|^-1 must be 1, 2 or 3, got {k}")
    T0 = degree0(T)
    out = functional(_r_part(T0.plain), str(k))
    if k == 1 and T0.f_part:
        out = out + functional(_r_part(T0.f_part), "F1")
    return out


# -- graded tensors -------------------------------------------------------

GKey = tuple[int, int, int, int, int]


class GradedTensor:
    """r-image keyed additionally by X-degree: (deg, al+, m+, al-, m-) -> coeff.

    ``prune`` drops components that can no longer contribute to the residue
    being computed; b-powers never decrease under multiplication.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[GKey, QScalar] = dict(terms or {})

    @classmethod
    def from_letters(cls, letters: Sequence[int]) -> "GradedTensor":
        out: dict[GKey, QScalar] = {}
        for x in letters:
            for k, c in _R_LETTER[x].items():
                _add_into(out, (DEGREE[x],) + k, c)
        return cls(out)

    @classmethod
    def one(cls) -> "GradedTensor":
        return cls({(0, 0, 0, 0, 0): ONE})

    @classmethod
    def from_x(cls, T: XElement) -> "GradedTensor":
        out: dict[GKey, QScalar] = {}
        for w, c in T.plain.items():
            deg = word_degree(w)
            for k, v in r_word(w).terms.items():
                _add_into(out, (deg,) + k, v * c)
        return cls(out)

    def mul(self, other: "GradedTensor", prune: str | None = None) -> "GradedTensor":
        out: dict[GKey, QScalar] = {}
        keep = _PRUNE[prune]
        for k1, c1 in self.terms.items():
            t1 = k1[1:]
            for k2, c2 in other.terms.items():
                c12 = c1 * c2
                deg = k1[0] + k2[0]
                for k, c in _key_mul(t1, k2[1:]):
                    if keep(k):
                        _add_into(out, (deg,) + k, c12 * c)
        return GradedTensor(out)

    __mul__ = mul

    def __add__(self, other: "GradedTensor") -> "GradedTensor":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(out, k, v)
        return GradedTensor(out)

    def scale(self, c: QScalar) -> "GradedTensor":
        return GradedTensor({k: v * c for k, v in self.terms.items()} if c else {})

    def delta(self, times: int = 1) -> "GradedTensor":
        return GradedTensor({k: v * (k[0] ** times) for k, v in self.terms.items() if k[0]})

    def degree0(self) -> TensorElement:
        return TensorElement._raw({k[1:]: v for k, v in self.terms.items() if k[0] == 0})

    def prune(self, how: str | None) -> "GradedTensor":
        keep = _PRUNE[how]
        return GradedTensor({k: v for k, v in self.terms.items() if keep(k[1:])})


_PRUNE = {
    None: lambda k: True,
    "3": lambda k: k[1] == 0 and k[3] == 0,
    "2": lambda k: k[1] == 0 or k[3] == 0,
    "1": lambda k: True,
}


# -- pseudodifferential normalization --------------------------------------


class _Inv:
    def __repr__(self):
        return "|D|^-1"


INV = _Inv()


@dataclass
class PdoSum:
    """Sum of T_i |D|^(-k_i) with k_i in 1..3 (higher orders dropped)."""

    terms: list[tuple[XElement, int]]

    def ncint(self) -> QScalar:
        acc = ZERO
        for T, k in self.terms:
            acc = acc + ncint(T, k)
        return acc

    def by_order(self) -> dict[int, XElement]:
        out: dict[int, XElement] = {}
        for T, k in self.terms:
            out[k] = out[k] + T if k in out else T
        return out


def normalize_pdo(factors: Iterable[XElement | _Inv | int]) -> PdoSum:
    """Move every |D|^-1 to the right.

    ``factors`` alternates X elements with ``INV`` markers (an int k stands
    for k consecutive markers).  Uses
    |D|^-k S = sum_i (-1)^i C(k+i-1, i) delta^i(S) |D|^(-k-i).
    """
    factors = list(factors)
    total = sum(f if isinstance(f, int) else 1 for f in factors if f is INV or isinstance(f, int))
    if total > 3:
        return PdoSum([])
    terms: list[tuple[XElement, int]] = [(XElement.scalar(1), 0)]
    for f in factors:
        if f is INV or isinstance(f, int):
            step = 1 if f is INV else f
            terms = [(T, k + step) for T, k in terms]
            continue
        new: list[tuple[XElement, int]] = []
        for T, k in terms:
            i = 0
            while k + i <= 3:
                if k == 0 and i > 0:
                    break
                S = f if i == 0 else delta(f, i)
                c = (-1) ** i * comb(k + i - 1, i) if k else 1
                if not S.is_zero():
                    new.append(((T * S).scale(QScalar(c)), k + i))
                i += 1
        terms = new
    merged: dict[int, XElement] = {}
    for T, k in terms:
        if 1 <= k <= 3:
            merged[k] = merged[k] + T if k in merged else T
    return PdoSum([(T, k) for k, T in sorted(merged.items()) if not T.is_zero()])


def ncint_pdo(factors: Iterable[XElement | _Inv | int]) -> QScalar:
    return normalize_pdo(factors).ncint()


def _symbol_zero(t: TensorElement) -> bool:
    """(sigma (x) id) r and (id (x) sigma) r both vanish: every surviving term has b in both factors."""
    for side in (1, 3):
        acc: dict[tuple[int, ...], QScalar] = {}
        for k, c in t.terms.items():
            if k[side] == 0:
                _add_into(acc, k, c)
        if acc:
            return False
    return True


def in_R(T: XElement) -> bool:
    """Membership in the ideal R, plain and F parts separately.

    Both one-sided symbols must vanish; this is what makes the |D|^-2
    functional (tau_0 on one side, tau_1 on the other) blind to R.
    """
    return _symbol_zero(_r_part(T.plain)) and _symbol_zero(_r_part(T.f_part))
