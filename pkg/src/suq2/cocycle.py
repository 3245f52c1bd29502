"""Cochains phi_n(a0, ..., an) = ncint a0 [D,a1] D^-1 ... [D,an] D^-1 and the b-B operators.

Since [D, x] = delta(x) F with F central and D^-1 = F |D|^-1, every factor
[D, x] D^-1 equals delta(x) |D|^-1.  The |D|^-1 factors are moved to the
right with the usual delta expansion and each order is evaluated on the
graded Hopf image, pruned for that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .hopf_tau import GradedTensor, functional
from .oneform import graded_element
from .pbw import AlgebraElement, multiply
from .qfield import ONE, ZERO, QScalar, qpow

__all__ = [
    "Cochain",
    "phi",
    "nphi1",
    "PHI",
    "coboundary",
    "UForm",
    "uform",
    "u_mul",
    "u_d",
    "integrate",
    "scale_invariant_term",
    "ncint_chain",
    "canonical_unitary",
    "psi1",
]

Elt = AlgebraElement


def _as_elt(x) -> Elt:
    if isinstance(x, AlgebraElement):
        return x
    return AlgebraElement.scalar(x)


@lru_cache(maxsize=20000)
def _graded(x: Elt) -> GradedTensor:
    return graded_element(x)


def ncint_chain(elements: Sequence[Elt], deltas: Sequence[int]) -> QScalar:
    """ncint x0 delta^e1(x1) |D|^-1 delta^e2(x2) |D|^-1 ... with one |D|^-1 after each xi, i >= 1.

    ``deltas[i]`` is the number of deltas applied to ``elements[i]``.
    """
    n = len(elements) - 1
    if n > 3:
        return ZERO
    # expansion: list of (extra deltas per slot, final order)
    expansions: list[tuple[tuple[int, ...], int, int]] = [((0,) * (n + 1), 0, 1)]
    for slot in range(1, n + 1):
        nxt = []
        for extra, k, sign in expansions:
            # factors so far end with |D|^-k; now move it past slot's element
            i = 0
            while k + i <= 3:
                if k == 0 and i > 0:
                    break
                c = (-1) ** i * comb(k + i - 1, i) if k else 1
                ex = list(extra)
                ex[slot] += i
                nxt.append((tuple(ex), k + i, sign * c))
                i += 1
        # then the slot's own |D|^-1
        expansions = [(ex, k + 1, c) for ex, k, c in nxt if k + 1 <= 3]
    total = ZERO
    for extra, k, c in expansions:
        key = str(k)
        acc = _graded(elements[0]).prune(key)
        for slot in range(1, n + 1):
            g = _graded(elements[slot])
            times = deltas[slot] + extra[slot]
            if times:
                g = g.delta(times)
            acc = acc.mul(g, key)
        val = functional(acc.degree0(), key)
        if val:
            total = total + val * c
    return total


def phi(n: int, args: Sequence) -> QScalar:
    """phi_n(a0, ..., an)."""
    if n not in (1, 2, 3):
        raise ValueError("phi is defined for n = 1, 2, 3")
    if len(args) != n + 1:
        raise ValueError(f"phi_{n} takes {n + 1} arguments, got {len(args)}")
    elts = [_as_elt(a) for a in args]
    return ncint_chain(elts, [0] + [1] * n)


def nphi1(a0, a1) -> QScalar:
    return phi(1, (a0, a1)) - phi(1, (a1, a0))


@dataclass(frozen=True)
class Cochain:
    """An n-cochain given by its evaluator on (n+1)-tuples."""

    arity: int
    evaluate: Callable[[tuple], QScalar]
    name: str = "φ"

    def __call__(self, *args) -> QScalar:
        if len(args) != self.arity + 1:
            raise ValueError(f"{self.name} takes {self.arity + 1} arguments, got {len(args)}")
        return self.evaluate(tuple(_as_elt(a) for a in args))

    def __add__(self, other: "Cochain") -> "Cochain":
        _check(self, other)
        return Cochain(self.arity, lambda t: self.evaluate(t) + other.evaluate(t), f"({self.name}+{other.name})")

    def __sub__(self, other: "Cochain") -> "Cochain":
        _check(self, other)
        return Cochain(self.arity, lambda t: self.evaluate(t) - other.evaluate(t), f"({self.name}-{other.name})")

    def scale(self, c) -> "Cochain":
        c = c if isinstance(c, QScalar) else QScalar(c)
        return Cochain(self.arity, lambda t: c * self.evaluate(t), f"{c}{self.name}")


def _check(x: Cochain, y: Cochain) -> None:
    if x.arity != y.arity:
        raise ValueError(f"arity mismatch: {x.arity} vs {y.arity}")


PHI = {n: Cochain(n, lambda t, n=n: phi(n, t), f"φ{n}") for n in (1, 2, 3)}


def _b_prime(f: Cochain) -> Cochain:
    n = f.arity

    def ev(t):
        acc = ZERO
        for j in range(n + 1):
            merged = t[:j] + (multiply(t[j], t[j + 1]),) + t[j + 2 :]
            acc = acc + (-1) ** j * f.evaluate(merged)
        return acc

    return Cochain(n + 1, ev, f"b'{f.name}")


def _b(f: Cochain) -> Cochain:
    n = f.arity
    bp = _b_prime(f)

    def ev(t):
        return bp.evaluate(t) + (-1) ** (n + 1) * f.evaluate((multiply(t[-1], t[0]),) + t[1:-1])

    return Cochain(n + 1, ev, f"b{f.name}")


def _lambda(f: Cochain) -> Cochain:
    n = f.arity
    return Cochain(n, lambda t: (-1) ** n * f.evaluate((t[-1],) + t[:-1]), f"λ{f.name}")


def _N(f: Cochain) -> Cochain:
    out, cur = f, f
    for _ in range(f.arity):
        cur = _lambda(cur)
        out = out + cur
    return Cochain(f.arity, out.evaluate, f"N{f.name}")


def _B0(f: Cochain) -> Cochain:
    if f.arity < 1:
        raise ValueError("B0 needs a cochain of arity >= 1")
    one = AlgebraElement.scalar(1)
    return Cochain(f.arity - 1, lambda t: f.evaluate((one,) + t), f"B0{f.name}")


def coboundary(op: str, f: Cochain) -> Cochain:
    """Apply one of b, b', B0, B, lambda, N."""
    ops = {
        "b": _b,
        "b'": _b_prime,
        "B0": _B0,
        "B": lambda g: _N(_B0(g)),
        "lambda": _lambda,
        "N": _N,
    }
    try:
        return ops[op](f)
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None


# -- universal forms --------------------------------------------------------
# A universal n-form is a list of (coeff, (a0, ..., an)) meaning c a0 da1 ... dan.

UForm = list


def uform(pairs: Sequence[tuple]) -> UForm:
    """sum x dy from a presentation [(x, y), ...]."""
    return [(ONE, (_as_elt(x), _as_elt(y))) for x, y in pairs]


def _right_mul(chain: tuple, b: Elt) -> list[tuple[QScalar, tuple]]:
    """(a0 da1 ... dan) b as a combination of n-forms."""
    if len(chain) == 1:
        return [(ONE, (multiply(chain[0], b),))]
    head, last = chain[:-1], chain[-1]
    # (w dan) b = w d(an b) - (w an) db
    out = [(ONE, head + (multiply(last, b),))]
    for c, ch in _right_mul(head, last):
        out.append((-c, ch + (b,)))
    return out


def u_mul(x: UForm, y: UForm) -> UForm:
    out = []
    for cx, chx in x:
        for cy, chy in y:
            for c, ch in _right_mul(chx, chy[0]):
                out.append((cx * cy * c, ch + chy[1:]))
    return out


def u_d(x: UForm) -> UForm:
    one = AlgebraElement.scalar(1)
    return [(c, (one,) + ch) for c, ch in x]


def integrate(cochain: Cochain | str, form: UForm) -> QScalar:
    """Pair a cochain (or 'Nphi1', 'phi1', 'phi2', 'phi3') with a universal form."""
    if isinstance(cochain, str):
        cochain = {"Nphi1": coboundary("N", PHI[1]), "phi1": PHI[1], "phi2": PHI[2], "phi3": PHI[3]}[cochain]
    acc = ZERO
    for c, ch in form:
        if len(ch) != cochain.arity + 1:
            raise ValueError(f"form degree {len(ch) - 1} does not match cochain arity {cochain.arity}")
        acc = acc + c * cochain.evaluate(ch)
    return acc


def scale_invariant_term(pairs: Sequence[tuple], path: str = "direct") -> QScalar:
    """zeta_{D_A}(0) - zeta_D(0) (no reality operator) for A = sum x dy.

    ``direct``: -ncint A D^-1 + 1/2 ncint (A D^-1)^2 - 1/3 ncint (A D^-1)^3.
    ``cochain``: -1/2 int_{N phi1} A + 1/2 int_{phi2}(dA + A^2) - 1/2 int_{phi3}(A dA + 2/3 A^3).
    """
    pairs = [(_as_elt(x), _as_elt(y)) for x, y in pairs]
    if not pairs:
        return ZERO
    if path == "direct":
        acc = ZERO
        for p, coeff in ((1, QScalar(-1)), (2, QScalar(Fraction(1, 2))), (3, QScalar(Fraction(-1, 3)))):
            acc = acc + coeff * _power_term(pairs, p)
        return acc
    if path != "cochain":
        raise ValueError(f"path must be 'direct' or 'cochain', got {path!r}")
    A = uform(pairs)
    dA = u_d(A)
    A2 = u_mul(A, A)
    A3 = u_mul(A2, A)
    half = QScalar(Fraction(1, 2))
    two_thirds = QScalar(Fraction(2, 3))
    t1 = integrate("Nphi1", A)
    t2 = integrate("phi2", dA + A2)
    t3 = integrate("phi3", u_mul(A, dA) + [(c * two_thirds, ch) for c, ch in A3])
    return -half * t1 + half * t2 - half * t3


def _power_term(pairs, p: int) -> QScalar:
    """ncint (A D^-1)^p with A D^-1 = sum x delta(y) |D|^-1."""
    import itertools

    acc = ZERO
    for combo in itertools.product(pairs, repeat=p):
        # x1 delta(y1) |D|^-1 x2 delta(y2) |D|^-1 ... = x1 . [delta(y1) |D|^-1 x2] ...
        acc = acc + _chain_xy(combo)
    return acc


def _chain_xy(combo) -> QScalar:
    """ncint x1 delta(y1) |D|^-1 x2 delta(y2) |D|^-1 ... via the |D|^-1 expansion.

    Moving |D|^-1 past x_{i+1} delta(y_{i+1}) is done factor by factor, so
    the elements are laid out as x1, y1, x2, y2, ... with |D|^-1 after each y.
    """
    elements = []
    deltas = []
    inv_after = []
    for x, y in combo:
        elements += [x, y]
        deltas += [0, 1]
        inv_after += [False, True]
    return _generic_chain(elements, deltas, inv_after)


def _generic_chain(elements, deltas, inv_after) -> QScalar:
    """ncint prod_i delta^{d_i}(e_i) (|D|^-1 if inv_after[i]) for a general layout."""
    total_inv = sum(inv_after)
    if total_inv > 3:
        return ZERO
    # states: (extra deltas tuple, current k, coefficient)
    states = [((0,) * len(elements), 0, 1)]
    for i in range(len(elements)):
        nxt = []
        for extra, k, c in states:
            j = 0
            while k + j <= 3:
                if k == 0 and j > 0:
                    break
                cc = (-1) ** j * comb(k + j - 1, j) if k else 1
                ex = list(extra)
                ex[i] += j
                nxt.append((tuple(ex), k + j, c * cc))
                j += 1
        if inv_after[i]:
            nxt = [(ex, k + 1, c) for ex, k, c in nxt if k + 1 <= 3]
        states = nxt
    total = ZERO
    for extra, k, c in states:
        if k == 0:
            continue
        key = str(k)
        acc = GradedTensor.one()
        for i, e in enumerate(elements):
            g = _graded(e)
            times = deltas[i] + extra[i]
            if times:
                g = g.delta(times)
            acc = acc.mul(g, key)
        val = functional(acc.degree0(), key)
        if val:
            total = total + val * c
    return total


# -- pairing with the fundamental unitary -----------------------------------


def canonical_unitary() -> list[list[Elt]]:
    """U = [[a, b], [-q b*, a*]]."""
    from .pbw import gen

    mq = AlgebraElement.monomial(0, 0, 1, coeff=-qpow(1))
    return [[gen("a"), gen("b")], [mq, gen("a*")]]


def psi1(U: Sequence[Sequence[Elt]] | None = None) -> QScalar:
    """psi_1(U, U*) = sum_kl 2 ncint U_kl delta(U*_kl) P|D|^-1 - U_kl delta^2(U*_kl) P|D|^-2
    + 2/3 U_kl delta^3(U*_kl) P|D|^-3, with P = (1 + F)/2 and U*_kl the adjoint of the entry."""
    from .xalg import delta as xdelta, lift
    from .hopf_tau import ncint

    U = canonical_unitary() if U is None else U
    acc = ZERO
    for row in U:
        for x in row:
            X, Y = lift(x), lift(x.star())
            # c P = (c/2)(1 + F)
            for p, c in ((1, ONE), (2, QScalar(Fraction(-1, 2))), (3, QScalar(Fraction(1, 3)))):
                T = X * xdelta(Y, p)
                acc = acc + c * (ncint(T, p) + ncint(T.times_F(), p))
    return acc
