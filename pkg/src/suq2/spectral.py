"""Spectral action coefficients, the Dirac zeta function and worked examples."""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from fractions import Fraction

import mpmath

from .oneform import OneForm, ncint_closed, ncint_tau
from .pbw import AlgebraElement
from .qfield import ONE, ZERO, QScalar, q_number, qpow

__all__ = [
    "PrimitiveIntegrals",
    "ActionCoefficients",
    "CutoffMoments",
    "primitives",
    "coeffs_suq2_withJ",
    "coeffs_noJ",
    "coeffs_general",
    "zeta_D",
    "zeta_D_residue",
    "zeta_D0",
    "xi_q",
    "assemble",
    "gauge_invariants",
    "BASELINE",
    "PRESETS",
    "preset",
    "omega_F",
    "TABLE1_ROWS",
    "TABLE1_COLUMNS",
    "table1",
]


@dataclass(frozen=True)
class ActionCoefficients:
    c3: QScalar
    c2: QScalar
    c1: QScalar
    c0: QScalar

    def as_tuple(self) -> tuple[QScalar, QScalar, QScalar, QScalar]:
        return (self.c3, self.c2, self.c1, self.c0)

    def to_json(self) -> dict:
        return {name: getattr(self, name).to_json() | {"text": str(getattr(self, name))} for name in ("c3", "c2", "c1", "c0")}


@dataclass(frozen=True)
class PrimitiveIntegrals:
    """Residues I(n, p) of A^n |D|^-p, plus the mixed terms of the general formula.

    ``base`` holds the unperturbed residues of |D|^-3, |D|^-2, |D|^-1 and
    zeta_D(0).  The J-products are A J A J^-1 at |D|^-3 and |D|^-2,
    delta(A) J A J^-1 at |D|^-3 and A^2 J A J^-1 at |D|^-3.
    """

    I11: QScalar = ZERO
    I12: QScalar = ZERO
    I13: QScalar = ZERO
    I22: QScalar = ZERO
    I23: QScalar = ZERO
    I33: QScalar = ZERO
    dA_A3: QScalar = ZERO
    AJA3: QScalar = ZERO
    AJA2: QScalar = ZERO
    dAJA3: QScalar = ZERO
    A2JA3: QScalar = ZERO
    base: tuple = field(default=(QScalar(2), ZERO, QScalar(Fraction(-1, 2)), ZERO))


BASELINE = ActionCoefficients(QScalar(2), ZERO, QScalar(Fraction(-1, 2)), ZERO)


@dataclass(frozen=True)
class CutoffMoments:
    phi1: float
    phi2: float
    phi3: float
    phi0: float
    lam: float = 1.0


def primitives(A: OneForm, engine: str = "closed") -> PrimitiveIntegrals:
    """All I(n, p) with 1 <= n <= p <= 3 for the delta-one-form A.

    ``engine='closed'`` uses the closed-form lemmas where available and the
    tau path for I(1,1); ``engine='tau'`` uses the tau path throughout.
    """
    closed = engine == "closed"

    def I(n, p):
        if closed and (n, p) != (1, 1):
            return ncint_closed(A, n, p)
        return ncint_tau(A, n, p)

    I13, I12 = I(1, 3), I(1, 2)
    I23 = I(2, 3)
    Ac = A.conj()
    I13c = ncint_closed(Ac, 1, 3) if closed else ncint_tau(Ac, 1, 3)
    I12c = ncint_closed(Ac, 1, 2) if closed else ncint_tau(Ac, 1, 2)
    half = QScalar(Fraction(1, 2))
    return PrimitiveIntegrals(
        I11=I(1, 1),
        I12=I12,
        I13=I13,
        I22=I(2, 2),
        I23=I23,
        I33=I(3, 3),
        dA_A3=ZERO if closed else ncint_tau(A, 2, 3, delta_first=True),
        AJA3=half * I13 * I13c,
        AJA2=half * (I12 * I13c + I13 * I12c),
        dAJA3=ZERO,
        A2JA3=half * I23 * I13c,
    )


def coeffs_general(I: PrimitiveIntegrals) -> ActionCoefficients:
    """Coefficients for a real triple of dimension 3 with [F, A] smoothing."""
    r3, r2, r1, z0 = I.base
    c3 = r3
    c2 = r2 - 4 * I.I13
    c1 = r1 - 2 * I.I12 + 2 * I.I23 + 2 * I.AJA3
    c0 = (
        z0
        - 2 * I.I11
        + I.I22
        + I.AJA2
        + I.dA_A3
        + I.dAJA3
        - QScalar(Fraction(2, 3)) * I.I33
        - 2 * I.A2JA3
    )
    return ActionCoefficients(c3, c2, c1, c0)


def coeffs_suq2_withJ(A: OneForm, engine: str = "closed") -> ActionCoefficients:
    I = primitives(A, engine)
    half = QScalar(Fraction(1, 2))
    I13b, I12b = I.I13.conj(), I.I12.conj()
    c3 = QScalar(2)
    c2 = -4 * I.I13
    c1 = -half + 2 * (I.I23 - I.I12) + I.I13 * I13b
    c0 = -2 * I.I11 + I.I22 - QScalar(Fraction(2, 3)) * I.I33 + I13b * (half * I.I12 - I.I23) + half * I.I13 * I12b
    return ActionCoefficients(c3, c2, c1, c0)


def coeffs_noJ(A: OneForm, engine: str = "closed") -> ActionCoefficients:
    I = primitives(A, engine)
    c2 = -2 * I.I13
    c1 = QScalar(Fraction(-1, 2)) - I.I12 + I.I23
    c0 = -I.I11 + I.I22 / 2 - I.I33 / 3
    return ActionCoefficients(QScalar(2), c2, c1, c0)


# -- zeta function of D -------------------------------------------------------
# zeta_D(s) = 2 (2^(s-2) - 1) zeta(s-2) - 1/2 (2^s - 1) zeta(s)
_ZETA_TERMS = ((Fraction(2), 2), (Fraction(-1, 2), 0))


def zeta_D(s) -> mpmath.mpf:
    """Numeric value of the Dirac zeta function (s != 1, 3)."""
    s = mpmath.mpf(s) if not isinstance(s, Fraction) else mpmath.mpf(s.numerator) / s.denominator
    return sum(c * (mpmath.power(2, s - a) - 1) * mpmath.zeta(s - a) for c, a in ((2, 2), (-0.5, 0)))


def zeta_D_residue(s0: int) -> Fraction:
    """Residue at s0; (2^(s-a) - 1) zeta(s-a) has residue 1 at s = a + 1."""
    return sum((c for c, a in _ZETA_TERMS if a + 1 == s0), Fraction(0))


def _zeta_nonpositive(n: int) -> Fraction:
    """zeta(-n) = (-1)^n B_(n+1)/(n+1)."""
    from sympy import bernoulli

    b = bernoulli(n + 1)
    if n == 0:
        return Fraction(-1, 2)
    return Fraction((-1) ** n) * Fraction(int(b.p), int(b.q)) / (n + 1)


def zeta_D0() -> QScalar:
    val = Fraction(0)
    for c, a in _ZETA_TERMS:
        fac = Fraction(1, 2**a) - 1
        val += c * fac * _zeta_nonpositive(a)
    return QScalar(val)


# -- the sign of D as a one-form -----------------------------------------------


def xi_q(s) -> QScalar:
    """xi_q(s) = q ([2s] - 2s) / ([s + 1/2][s - 1/2]) for half-integer s."""
    s = Fraction(s)
    if (2 * s).denominator != 1 or (s + Fraction(1, 2)).denominator != 1:
        raise ValueError(f"xi_q needs a half-integer argument, got {s}")
    n2, up, dn = int(2 * s), int(s + Fraction(1, 2)), int(s - Fraction(1, 2))
    den = q_number(up) * q_number(dn)
    if den.is_zero():
        raise ZeroDivisionError(f"xi_q has a pole at s={s}")
    return qpow(1) * (q_number(n2) - n2) / den


def omega_F() -> OneForm:
    """a* delta a + q^2 b delta b* + q^2 a delta a* + q^2 b* delta b (equals (1-q^2) mod smoothing)."""
    q2 = qpow(2)
    return OneForm(
        {
            ((-1, 0, 0), (1, 0, 0)): ONE,
            ((0, 1, 0), (0, 0, 1)): q2,
            ((1, 0, 0), (-1, 0, 0)): q2,
            ((0, 0, 1), (0, 1, 0)): q2,
        }
    )


def assemble(moments: CutoffMoments, c: ActionCoefficients, q0=None) -> float:
    """Phi_3 L^3 c3 + Phi_2 L^2 c2 + Phi_1 L c1 + Phi(0) c0 at q = q0."""

    def val(x: QScalar) -> float:
        if q0 is None:
            if x.num.degree() > 0 or x.den.degree() > 0:
                raise ValueError("coefficient depends on q; pass q0")
            return float(x.eval_at(0)) if x.den(0) != 0 else float(int(x.num[0])) / int(x.den[0])
        return x(q0) if not isinstance(q0, (int, Fraction)) else float(x.eval_at(q0))

    L = moments.lam
    return (
        moments.phi3 * L**3 * val(c.c3)
        + moments.phi2 * L**2 * val(c.c2)
        + moments.phi1 * L * val(c.c1)
        + moments.phi0 * val(c.c0)
    )


def gauge_invariants(A: OneForm) -> tuple[QScalar, QScalar, QScalar]:
    I13 = ncint_closed(A, 1, 3)
    I23, I12 = ncint_closed(A, 2, 3), ncint_closed(A, 1, 2)
    third = -2 * ncint_tau(A, 1, 1) + ncint_closed(A, 2, 2) - QScalar(Fraction(2, 3)) * ncint_closed(A, 3, 3)
    return I13, I23 - I12, third


# -- named one-forms ---------------------------------------------------------


def _B_n(n: int) -> OneForm:
    return OneForm.term((0, n + 1, n), (0, 0, 1))


PRESETS = {
    "a*da": lambda: OneForm.term((-1, 0, 0), (1, 0, 0)),
    "b*db": lambda: OneForm.term((0, 0, 1), (0, 1, 0)),
    "ada*": lambda: OneForm.term((1, 0, 0), (-1, 0, 0)),
    "bdb*": lambda: OneForm.term((0, 1, 0), (0, 0, 1)),
    "omegaF": lambda: omega_F().scale(1 / (1 - qpow(2))),
    "ada*+adj": lambda: OneForm.term((1, 0, 0), (-1, 0, 0)).symmetrized(),
    "adb": lambda: OneForm.term((1, 0, 0), (0, 1, 0)),
}


def preset(name: str) -> OneForm:
    if name.startswith("B") and name[1:].isdigit():
        return _B_n(int(name[1:]))
    if name.startswith("A") and name[1:].isdigit():
        return _B_n(int(name[1:])).symmetrized()
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}, Bn, An") from None


# -- the table of integrals for the four basic one-forms -----------------------

TABLE1_ROWS = ("a*da", "b*db", "ada*", "bdb*")
TABLE1_COLUMNS = ("A|D|^-3", "A^2|D|^-3", "A^3|D|^-3", "A|D|^-2", "A^2|D|^-2", "A|D|^-1", "zeta_DA(0)")


def table1(engine: str = "closed", with_F: bool = False) -> dict[str, tuple[QScalar, ...]]:
    """Rows of integrals for a*da, b*db, ada*, bdb*, read as delta-one-forms.

    With ``with_F`` the literal F-flagged forms are used instead; the
    odd-power |D|^-3 and |D|^-2 columns then come from the F-part functionals.
    """
    out = {}
    for name in TABLE1_ROWS:
        A = preset(name)
        if with_F:
            out[name] = _table_row_with_F(A)
            continue
        I = primitives(A, engine)
        c0 = coeffs_suq2_withJ(A, engine).c0
        out[name] = (I.I13, I.I23, I.I33, I.I12, I.I22, I.I11, c0)
    return out


def _table_row_with_F(A: OneForm) -> tuple[QScalar, ...]:
    from .hopf_tau import ncint
    from .oneform import to_x

    T = to_x(A, "d")
    vals = []
    for n, p in ((1, 3), (2, 3), (3, 3), (1, 2), (2, 2), (1, 1)):
        vals.append(ncint(T**n, p))
    return tuple(vals) + (None,)
