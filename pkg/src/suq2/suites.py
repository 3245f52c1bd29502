"""Named identity tables and seeded random checks, shared by the CLI and the test suite."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cocycle import PHI, coboundary, psi1, scale_invariant_term
from .oneform import OneForm, ncint_closed, ncint_tau
from .pbw import AlgebraElement, gen, multiply
from .qfield import ONE, ZERO, QScalar, qpow
from .xalg import F, XElement, d, is_zero_operator, lift, word

__all__ = [
    "Check",
    "operator_identities",
    "random_monomial",
    "random_oneform",
    "random_selfadjoint_presentation",
    "cochain_identities",
    "run_suite",
    "SUITES",
]


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def operator_identities() -> dict[str, XElement]:
    """Expressions that vanish identically as operators."""
    q, q2 = qpow(1), qpow(2)
    w = word
    one = XElement.scalar(1)
    a, a_, b, b_ = (lift(gen(n)) for n in ("a", "a*", "b", "b*"))
    return {
        "astuce1": w("a+* a+") - w("a+ a+*", q2) + w("b+* b+", q2) - w("b+ b+*", q2) - one.scale(1 - q2),
        "astuce1'": w("a+ a+*") + w("a- a-*") + w("b+ b+*") + w("b- b-*") - one,
        "astuce1''": w("a+* a+") + w("a-* a-") + w("b+* b+", q2) + w("b-* b-", q2) - one,
        "astuce2": w("a-* a-") - w("a- a-*", q2) + w("b-* b-", q2) - w("b- b-*", q2),
        "astuce3a": w("a+ a-*") + w("b-* b+"),
        "astuce3b": w("a-* a+") + w("b-* b+", q2),
        "astuce4a": w("a- a+*") + w("b+* b-"),
        "astuce4b": w("a+* a-") + w("b+* b-", q2),
        "astuce5": w("b+ b+*") - w("b+* b+") + w("b- b-*") - w("b-* b-"),
        "astuce6": w("a+ b-", q) - w("b- a+") + w("a- b+", q) - w("b+ a-"),
        "F2": a_ * d(a) + (b * d(b_) + a * d(a_) + b_ * d(b)).scale(q2) - F.scale(1 - q2),
        "dF": d(a_) * d(a) + (d(a) * d(a_) + d(b_) * d(b) + d(b) * d(b_)).scale(q2) + one.scale(1 + q2),
        "1is2form": (d(a) * d(a_)).scale(q2) - d(a_) * d(a) - one.scale(1 - q2),
        "2forms-da-db": (d(a) * d(b)).scale(q) - d(b) * d(a),
        "2forms-da-db*": (d(a) * d(b_)).scale(q) - d(b_) * d(a),
        "2forms-da*-db": d(a_) * d(b) - (d(b) * d(a_)).scale(q),
        "2forms-da*-db*": d(a_) * d(b_) - (d(b_) * d(a_)).scale(q),
        "2forms-db-db*": d(b) * d(b_) - d(b_) * d(b),
        "2forms-sum": d(a) * d(a_) + d(b) * d(b_) + one,
    }


def random_monomial(rng: random.Random, size: int = 2) -> AlgebraElement:
    return AlgebraElement.monomial(rng.randint(-size, size), rng.randint(0, size), rng.randint(0, size))


_BALANCED_SEEDS = (
    ((-1, 0, 0), (1, 0, 0)),
    ((1, 0, 0), (-1, 0, 0)),
    ((0, 1, 0), (0, 0, 1)),
    ((0, 0, 1), (0, 1, 0)),
    ((-1, 1, 0), (1, 0, 1)),
    ((0, 1, 1), (0, 1, 1)),
    ((-2, 0, 0), (2, 0, 0)),
    ((1, 1, 0), (-1, 0, 1)),
    ((0, 2, 1), (0, 0, 1)),
)


def random_oneform(rng: random.Random, terms: int = 3, balanced_bias: float = 0.5) -> OneForm:
    """Random delta-one-form with small integer coefficients, half of its terms drawn from balanced seeds."""
    coeffs: dict = {}
    for _ in range(rng.randint(1, terms)):
        if rng.random() < balanced_bias:
            key = rng.choice(_BALANCED_SEEDS)
        else:
            al = (rng.randint(-2, 2), rng.randint(0, 2), rng.randint(0, 2))
            be = (rng.randint(-2, 2), rng.randint(0, 2), rng.randint(0, 2))
            if be == (0, 0, 0):
                be = (1, 0, 0)
            key = (al, be)
        c = QScalar(rng.choice([-3, -2, -1, 1, 2, 3]))
        if rng.random() < 0.25:
            c = c * qpow(rng.randint(1, 2))
        coeffs[key] = coeffs.get(key, ZERO) + c
    return OneForm(coeffs)


def random_selfadjoint_presentation(rng: random.Random, terms: int = 2) -> list[tuple]:
    """x dy + (x dy)* for random monomials, with (x dy)* = y* d(x*) - d(y* x*)."""
    pairs = []
    minus_one = AlgebraElement.scalar(-1)
    for _ in range(terms):
        x, y = random_monomial(rng, 1), random_monomial(rng, 1)
        pairs += [(x, y), (y.star(), x.star()), (minus_one, multiply(y.star(), x.star()))]
    return pairs


def cochain_identities() -> dict[str, tuple[int, Callable]]:
    """Cochain identities as (arity+1, evaluator that must vanish)."""
    b = lambda f: coboundary("b", f)
    B0 = lambda f: coboundary("B0", f)
    B = lambda f: coboundary("B", f)
    lam = lambda f: coboundary("lambda", f)
    N = lambda f: coboundary("N", f)
    bp = lambda f: coboundary("b'", f)
    p1, p2, p3 = PHI[1], PHI[2], PHI[3]
    return {
        "b phi1 = -phi2": (3, b(p1) + p2),
        "b phi2 = 0": (4, b(p2)),
        "b phi3 = 0": (5, b(p3)),
        "B phi1 = 0": (1, B(p1)),
        "B0 phi2 = -(1 - lambda) phi1": (2, B0(p2) + p1 - lam(p1)),
        "b B0 phi2 = 2 phi2 + B0 phi3": (3, b(B0(p2)) - p2.scale(2) - B0(p3)),
        "B phi2 = 0": (2, B(p2)),
        "B0 phi3 = N b' phi1": (3, B0(p3) - N(bp(p1))),
        "B phi3 = 3 B0 phi3": (3, B(p3) - B0(p3).scale(3)),
    }


# -- suites -----------------------------------------------------------------


def _suite_pbw(rng, opts) -> list[Check]:
    out = []
    a, a_, b, b_ = (gen(n) for n in ("a", "a*", "b", "b*"))
    q, q2 = qpow(1), qpow(2)
    rel = {
        "ba = q ab": b * a - a * b * q,
        "b*a = q ab*": b_ * a - a * b_ * q,
        "bb* = b*b": b * b_ - b_ * b,
        "a*a + q^2 b*b = 1": a_ * a + b_ * b * q2 - 1,
        "aa* + bb* = 1": a * a_ + b * b_ - 1,
    }
    for name, v in rel.items():
        out.append(Check(name, v.is_zero()))
    bad = 0
    for _ in range(opts.get("samples", 30)):
        x, y, z = (random_monomial(rng) for _ in range(3))
        if multiply(multiply(x, y), z) != multiply(x, multiply(y, z)):
            bad += 1
        if multiply(x, y).star() != multiply(y.star(), x.star()) or x.star().star() != x:
            bad += 1
    out.append(Check("associativity and star on random monomials", bad == 0, f"{bad} failures"))
    return out


def _suite_operators(rng, opts) -> list[Check]:
    return [Check(name, is_zero_operator(T)) for name, T in operator_identities().items()]


def _suite_cocycle(rng, opts) -> list[Check]:
    out = []
    n = opts.get("samples", 10)
    for name, (arity, f) in cochain_identities().items():
        bad = 0
        for _ in range(n):
            args = tuple(random_monomial(rng, 1) for _ in range(arity))
            if f.evaluate(args) != ZERO:
                bad += 1
        out.append(Check(name, bad == 0, f"{bad}/{n} nonzero"))
    bad = 0
    for _ in range(max(1, n // 2)):
        pres = random_selfadjoint_presentation(rng)
        if scale_invariant_term(pres, "direct") != scale_invariant_term(pres, "cochain"):
            bad += 1
    out.append(Check("scale-invariant term: direct = cochain", bad == 0, f"{bad} mismatches"))
    out.append(Check("psi1(U, U*)", psi1() == QScalar(-2), f"engine value {psi1()}"))
    return out


def _suite_closedform(rng, opts) -> list[Check]:
    bad = []
    n = opts.get("samples", 20)
    for k in range(n):
        A = random_oneform(rng)
        for (m, p) in ((1, 3), (1, 2), (2, 3), (2, 2), (3, 3)):
            if ncint_closed(A, m, p) != ncint_tau(A, m, p):
                bad.append((k, m, p))
    return [Check("closed form = tau pipeline", not bad, f"{len(bad)} mismatches on {n} forms")]


def _suite_oracle(rng, opts) -> list[Check]:
    from .oracle import oracle_integral, oracle_J
    from .oneform import ncint_J
    from .spectral import TABLE1_ROWS, preset

    q0 = opts.get("q", 0.5)
    top = opts.get("max_2j", 70)
    out = []
    for name in TABLE1_ROWS:
        A = preset(name)
        worst = 0.0
        for (m, p) in ((1, 3), (2, 3), (3, 3), (1, 2), (2, 2), (1, 1)):
            sym = (ncint_tau(A, m, p) if p == 1 else ncint_closed(A, m, p))(q0)
            num = oracle_integral(A, m, p, q0, top).residue(p)
            tol = 1e-6 if p == 1 else 1e-8
            worst = max(worst, abs(num - sym) / tol)
        out.append(Check(f"oracle row {name}", worst <= 1, f"worst error {worst:.3g} x tolerance"))
    bad = 0
    for _ in range(opts.get("samples", 5)):
        A, B = random_oneform(rng, 2, 0.9), random_oneform(rng, 2, 0.9)
        for kind in ("i", "ii", "iii"):
            if abs(oracle_J(A, B, kind, q0, min(top, 50)) - ncint_J(A, B, kind)(q0)) > 1e-6:
                bad += 1
    out.append(Check("oracle J-reduction (i)-(iii)", bad == 0, f"{bad} mismatches"))
    return out


SUITES: dict[str, Callable] = {
    "pbw": _suite_pbw,
    "operators": _suite_operators,
    "cocycle": _suite_cocycle,
    "closedform": _suite_closedform,
    "oracle": _suite_oracle,
}


def run_suite(name: str, seed: int = 0, **opts) -> list[Check]:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(random.Random(seed), opts)
