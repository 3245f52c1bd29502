"""One-forms A = sum A^beta_alpha m^alpha delta(m^beta) and their residues.

Two independent evaluation paths are provided:

* :func:`ncint_tau` expands powers of A through the graded Hopf image and
  applies the tau functionals;
* :func:`ncint_closed` evaluates the closed-form coefficient formulas over
  balanced index tuples, with series kernels summed exactly.
"""
from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .hopf_tau import GradedTensor, functional
from .pbw import AlgebraElement, adjoint, multiply
from .qfield import ONE, ZERO, QScalar, qpow
from .xalg import XElement, delta, lift

__all__ = [
    "OneForm",
    "to_x",
    "balanced_part",
    "is_balanced",
    "w1_series",
    "V_series",
    "path_series",
    "ncint_tau",
    "ncint_closed",
    "ncint_J",
    "adjoint_oneform",
    "graded",
    "graded_element",
    "CLOSED_PAIRS",
]

Idx = tuple[int, int, int]
Pair = tuple[Idx, Idx]  # (alpha, beta)


class OneForm:
    """Coefficient tensor of a delta-one-form."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Pair, QScalar] | None = None):
        self.coeffs: dict[Pair, QScalar] = {}
        for (al, be), c in (coeffs or {}).items():
            c = c if isinstance(c, QScalar) else QScalar(c)
            if tuple(be) == (0, 0, 0) or not c:
                continue  # delta(1) = 0
            key = (tuple(al), tuple(be))
            s = self.coeffs.get(key, ZERO) + c
            if s:
                self.coeffs[key] = s
            else:
                self.coeffs.pop(key, None)

    @classmethod
    def term(cls, alpha: Idx, beta: Idx, coeff=ONE) -> "OneForm":
        return cls({(alpha, beta): coeff})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[AlgebraElement, AlgebraElement]]) -> "OneForm":
        """sum x delta(y) for a presentation [(x, y), ...]."""
        acc: dict[Pair, QScalar] = {}
        for x, y in pairs:
            for al, cx in x.terms.items():
                for be, cy in y.terms.items():
                    acc[(al, be)] = acc.get((al, be), ZERO) + cx * cy
        return cls(acc)

    def __add__(self, other: "OneForm") -> "OneForm":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return OneForm(out)

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "OneForm":
        c = c if isinstance(c, QScalar) else QScalar(c)
        return OneForm({k: v * c for k, v in self.coeffs.items()})

    __rmul__ = scale

    def conj(self) -> "OneForm":
        return OneForm({k: v.conj() for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, OneForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def adjoint_form(self) -> "OneForm":
        """A* as a one-form, from (x delta y)* = y* delta(x*) - 1 delta(y* x*)."""
        pairs = []
        for (al, be), c in self.coeffs.items():
            x = AlgebraElement.monomial(*al, coeff=c)
            y = AlgebraElement.monomial(*be)
            xs, ys = adjoint(x), adjoint(y)
            pairs.append((ys, xs))
            pairs.append((AlgebraElement.scalar(-1), multiply(ys, xs)))
        return OneForm.from_pairs(pairs)

    def symmetrized(self) -> "OneForm":
        return self + self.adjoint_form()

    def __str__(self):
        from .pbw import PBWMonomial

        parts = []
        for (al, be), c in sorted(self.coeffs.items()):
            x, y = str(PBWMonomial(*al)), str(PBWMonomial(*be))
            body = ("" if x == "1" else x + " ") + f"δ({y})"
            parts.append(body if c == 1 else f"({c})*{body}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def _mono(idx: Idx) -> AlgebraElement:
    return AlgebraElement.monomial(*idx)


def to_x(A: OneForm, variant: str = "delta") -> XElement:
    """Expand in X; the 'd' variant multiplies by F."""
    out = XElement()
    for (al, be), c in A.coeffs.items():
        out = out + (lift(_mono(al)) * delta(lift(_mono(be)))).scale(c)
    if variant == "d":
        return out.times_F()
    if variant != "delta":
        raise ValueError(f"variant must be 'delta' or 'd', got {variant!r}")
    return out


def adjoint_oneform(A: OneForm, variant: str = "delta") -> XElement:
    return to_x(A, variant).adjoint()


# -- tau path ---------------------------------------------------------------

_PM = {"a": (0, 1), "a*": (4, 5), "b": (2, 3), "b*": (6, 7)}


@lru_cache(maxsize=4096)
def _graded_mono(idx: Idx) -> GradedTensor:
    al, be, ga = idx
    out = GradedTensor.one()
    gens = [_PM["a" if al > 0 else "a*"]] * abs(al) + [_PM["b"]] * be + [_PM["b*"]] * ga
    for pm in gens:
        out = out * GradedTensor.from_letters(pm)
    return out


@lru_cache(maxsize=4096)
def _graded_M(alpha: Idx, beta: Idx) -> GradedTensor:
    return _graded_mono(alpha) * _graded_mono(beta).delta()


def graded_element(x: AlgebraElement) -> GradedTensor:
    """Graded Hopf image of the lift of an algebra element."""
    out = GradedTensor()
    for idx, c in x.terms.items():
        out = out + _graded_mono(idx).scale(c)
    return out


def graded(A: OneForm, prune: str | None = None) -> GradedTensor:
    out = GradedTensor()
    for (al, be), c in A.coeffs.items():
        out = out + _graded_M(al, be).scale(c)
    return out.prune(prune)


def ncint_tau(A: OneForm, n: int, p: int, delta_first: bool = False) -> QScalar:
    """Residue of A^n |D|^-p through the Hopf image (``delta_first``: delta(A) A^(n-1))."""
    if p not in (1, 2, 3) or n < 1:
        raise ValueError(f"unsupported order n={n}, p={p}")
    key = str(p)
    G = graded(A, key)
    acc = G.delta() if delta_first else G
    for _ in range(n - 1):
        acc = acc.mul(G, key)
    return functional(acc.degree0(), key)


# -- balanced components ----------------------------------------------------


def _product_terms(A: OneForm, n: int):
    items = list(A.coeffs.items())
    for combo in itertools.product(items, repeat=n):
        coeff = ONE
        for _, c in combo:
            coeff = coeff * c
        yield tuple(k for k, _ in combo), coeff


def _is_a_balanced(keys: Sequence[Pair]) -> bool:
    if any(al[1] or al[2] or be[1] or be[2] for al, be in keys):
        return False
    return sum(al[0] + be[0] for al, be in keys) == 0


def _is_full_balanced(keys: Sequence[Pair]) -> bool:
    if sum(al[0] + be[0] for al, be in keys) != 0:
        return False
    return sum(al[1] + be[1] for al, be in keys) == sum(al[2] + be[2] for al, be in keys)


def balanced_part(A: OneForm, n: int, kind: str = "balanced") -> dict[tuple[Pair, ...], QScalar]:
    """Entries of the n-fold coefficient tensor passing the balance filter."""
    if not 1 <= n <= 3:
        raise ValueError("n must be 1, 2 or 3")
    test = {"balanced": _is_full_balanced, "a-balanced": _is_a_balanced}[kind]
    out: dict[tuple[Pair, ...], QScalar] = {}
    for keys, c in _product_terms(A, n):
        if test(keys):
            out[keys] = out.get(keys, ZERO) + c
    return {k: v for k, v in out.items() if v}


def is_balanced(A: OneForm) -> bool:
    """Every term of A is balanced on its own."""
    return all(_is_full_balanced(((al, be),)) for al, be in A.coeffs)


# -- series kernels ---------------------------------------------------------


def _segment(start: int, k: int) -> list[int]:
    """Indices c of q_{n+c} in q^{up k}_{n+start,|k|}."""
    if k >= 0:
        return [start + i for i in range(1, k + 1)]
    return [start - i for i in range(0, -k)]


@lru_cache(maxsize=None)
def path_series(offsets: tuple[tuple[int, int], ...], l: int, j: int) -> QScalar:
    """sum_{n>=0} ( q^(l+2nj) prod_c (1 - q^(2(n+c)))^e_c - delta_{j,0} ).

    ``offsets`` lists (c, e_c); factors with n + c <= 0 vanish.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    n0 = max([0] + [1 - c for c, e in offsets if e > 0])
    # prod as a polynomial in X = q^(2n)
    poly: list[QScalar] = [ONE]
    for c, e in offsets:
        for _ in range(e):
            t = qpow(2 * c)
            new = [ZERO] * (len(poly) + 1)
            for i, v in enumerate(poly):
                new[i] = new[i] + v
                new[i + 1] = new[i + 1] - v * t
            poly = new
    total = ZERO
    if j == 0:
        if l != 0:
            raise ValueError("divergent kernel: j = 0 needs l = 0")
        total = QScalar(-n0)
    ql = qpow(l)
    for k, dk in enumerate(poly):
        if j + k == 0 or not dk:
            continue
        e = j + k
        total = total + ql * dk * qpow(2 * n0 * e) / (1 - qpow(2 * e))
    return total


def _closed_path(segments: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    cnt = Counter()
    for start, k in segments:
        cnt.update(_segment(start, k))
    if any(v % 2 for v in cnt.values()):
        raise ValueError("open path: product is not a perfect square")
    return tuple(sorted((c, v // 2) for c, v in cnt.items()))


def w1_series(beta1: int, j: int) -> QScalar:
    """sum_n ( q^(2jn) (q^{up beta1}_{n,|beta1|})^2 - delta_{j0} )."""
    return path_series(_closed_path([(0, beta1), (beta1, -beta1)]), 0, j)


def V_series(beta1: int, alpha1p: int, beta1p: int, l: int, j: int) -> QScalar:
    """The kernel v_{beta1, alpha1', beta1'}(l, j)."""
    s1 = beta1p
    s2 = s1 + alpha1p
    s3 = s2 + beta1
    segs = [(0, beta1p), (s1, alpha1p), (s2, beta1), (s3, -s3)]
    return path_series(_closed_path(segs), l, j)


# -- closed forms -------------------------------------------------------------

CLOSED_PAIRS = ((1, 3), (1, 2), (2, 3), (2, 2), (3, 3))


def _w(alpha: Idx, beta: Idx) -> QScalar:
    b1 = beta[0]
    if b1 == 0:
        return ZERO
    return 2 * b1 * qpow(b1 * (2 * alpha[2] + beta[2] - beta[1])) * w1_series(b1, alpha[2] + beta[2])


def _V(t1: Pair, t2: Pair) -> QScalar:
    (al, be), (alp, bep) = t1, t2
    weight = be[0] * bep[0] + (be[1] - be[2]) * (bep[1] - bep[2])
    if weight == 0:
        return ZERO
    expo = be[0] * (al[1] + al[2]) + bep[0] * (alp[1] + alp[2])
    l = (al[1] + be[1] + al[2] + be[2]) * (alp[0] + bep[0])
    j = al[2] + alp[2] + be[2] + bep[2]
    return 2 * weight * qpow(expo) * V_series(be[0], alp[0], bep[0], l, j)


def ncint_closed(A: OneForm, n: int, p: int, delta_first: bool = False) -> QScalar:
    """Closed-form residues of A^n |D|^-p for the supported (n, p)."""
    if delta_first:
        if (n, p) != (2, 3):
            raise ValueError("delta(A) A is available in closed form only for p = 3")
        return ZERO
    if (n, p) not in CLOSED_PAIRS:
        raise ValueError(f"no closed form for n={n}, p={p}; use ncint_tau")
    acc = ZERO
    if p == 3:
        for keys, c in balanced_part(A, n, "a-balanced").items():
            w = 2
            for _, be in keys:
                w *= be[0]
            if w:
                acc = acc + c * w
        return acc
    if n == 1:
        for ((al, be),), c in balanced_part(A, 1, "balanced").items():
            acc = acc + 2 * c * _w(al, be)
        return acc
    for (t1, t2), c in balanced_part(A, 2, "balanced").items():
        acc = acc + 2 * c * _V(t1, t2)
    return acc


def ncint_J(A: OneForm, B: OneForm, kind: str) -> QScalar:
    """Residues of A J B J^-1 |D|^-p type terms, reduced to plain residues."""
    if kind == "iv":
        return ZERO
    Bc = B.conj()
    if kind == "i":
        return ncint_closed(A, 1, 3) * ncint_closed(Bc, 1, 3) / 2
    if kind == "ii":
        return (ncint_closed(A, 1, 2) * ncint_closed(Bc, 1, 3) + ncint_closed(A, 1, 3) * ncint_closed(Bc, 1, 2)) / 2
    if kind == "iii":
        return ncint_closed(A, 2, 3) * ncint_closed(Bc, 1, 3) / 2
    raise ValueError(f"kind must be i, ii, iii or iv, got {kind!r}")
