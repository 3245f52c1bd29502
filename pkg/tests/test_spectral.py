import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from suq2.cocycle import scale_invariant_term
from suq2.oneform import OneForm, ncint_closed
from suq2.qfield import ZERO, QScalar, parse_qscalar, qpow
from suq2.spectral import (
    BASELINE,
    CutoffMoments,
    PrimitiveIntegrals,
    assemble,
    coeffs_general,
    coeffs_noJ,
    coeffs_suq2_withJ,
    gauge_invariants,
    preset,
    table1,
    xi_q,
    zeta_D,
    zeta_D0,
    zeta_D_residue,
)
from suq2.suites import random_oneform, random_selfadjoint_presentation

q2 = qpow(2)
half = QScalar(Fraction(1, 2))


def test_baseline_without_form():
    assert coeffs_noJ(OneForm()).as_tuple() == (2, 0, -half, 0)
    assert coeffs_suq2_withJ(OneForm()).as_tuple() == (2, 0, -half, 0)
    assert coeffs_general(PrimitiveIntegrals()) == BASELINE


def test_no_J_example():
    assert coeffs_noJ(preset("a*da")).c2 == -4


def test_first_example_with_J():
    c = coeffs_suq2_withJ(preset("a*da"))
    assert (c.c3, c.c2) == (2, -8)
    assert c.c1 == (q2 + 15) / (2 * (1 - q2))
    assert c.c0 == parse_qscalar("(11*q^4+36*q^2+13)/(3*(q^4-1))")


def test_general_formula_reduces_to_suq2():
    from suq2.spectral import primitives

    for name in ("a*da", "ada*", "b*db", "ada*+adj", "omegaF"):
        A = preset(name)
        assert coeffs_general(primitives(A)) == coeffs_suq2_withJ(A)


def test_engines_agree():
    for name in ("a*da", "bdb*", "ada*+adj", "B2"):
        A = preset(name)
        assert coeffs_suq2_withJ(A, "tau") == coeffs_suq2_withJ(A, "closed")


def test_zeta_residues_and_value_at_zero():
    assert zeta_D_residue(3) == 2
    assert zeta_D_residue(2) == 0
    assert zeta_D_residue(1) == Fraction(-1, 2)
    assert zeta_D0() == ZERO


@pytest.mark.parametrize("s", [4, 5, Fraction(9, 2), Fraction(-3, 2)])
def test_zeta_matches_spectrum(s):
    # eigenvalues d = k + 1/2 with multiplicity 2(d^2 - 1/4), summed as Hurwitz zetas
    x = mpmath.mpf(s.numerator) / s.denominator if isinstance(s, Fraction) else mpmath.mpf(s)
    direct = 2 * (mpmath.zeta(x - 2, 0.5) - mpmath.zeta(x, 0.5) / 4)
    assert float(zeta_D(s)) == pytest.approx(float(direct), rel=1e-12)


def test_xi_limits():
    for two_j in range(6):
        assert xi_q(Fraction(2 * two_j + 3, 2)).limit_at(0) == 1
        assert xi_q(Fraction(2 * two_j + 3, 2)).limit_at(1) == 0
    for two_j in range(1, 6):
        assert -xi_q(Fraction(2 * two_j + 1, 2)).limit_at(0) == -1
    with pytest.raises(ValueError):
        xi_q(Fraction(3, 4))
    with pytest.raises(ZeroDivisionError):
        xi_q(Fraction(1, 2))


def test_q_independent_action():
    c = coeffs_suq2_withJ(preset("omegaF"))
    assert c.as_tuple() == (2, -8, QScalar(Fraction(15, 2)), QScalar(Fraction(-13, 3)))
    m = CutoffMoments(phi1=1.0, phi2=0.5, phi3=2.0, phi0=3.0, lam=2.0)
    assert assemble(m, c) == pytest.approx(2 * 2 * 8 - 8 * 0.5 * 4 + 7.5 * 2 - 13)


def test_assemble_needs_q_for_q_dependent_terms():
    c = coeffs_suq2_withJ(preset("a*da"))
    m = CutoffMoments(1, 1, 1, 1)
    with pytest.raises(ValueError):
        assemble(m, c)
    expect = 2 - 8 + float(c.c1.eval_at(Fraction(1, 2))) + float(c.c0.eval_at(Fraction(1, 2)))
    assert assemble(m, c, Fraction(1, 2)) == pytest.approx(expect)


def test_gauge_invariants():
    assert gauge_invariants(OneForm()) == (ZERO, ZERO, ZERO)
    I13, I23_minus_I12, _ = gauge_invariants(preset("a*da"))
    assert I13 == 2
    assert I23_minus_I12 == 2 - 4 * q2 / (q2 - 1)
    assert gauge_invariants(preset("b*db")) == (ZERO, ZERO, -2 * (-2 / (q2 - 1)) + (-4 / (qpow(4) - 1)))


def test_table_first_row():
    row = table1()["a*da"]
    expect = ["2", "2", "2", "4*q^2/(q^2-1)", "4*q^2*(q^2+2)/(q^4-1)", "(3*q^2+1)/(2*(q^2-1))", "(11*q^4+36*q^2+13)/(3*(q^4-1))"]
    assert row == tuple(parse_qscalar(e) for e in expect)


def test_table_with_F_flags_odd_columns():
    row = table1(with_F=True)["a*da"]
    assert row[-1] is None
    assert row[0] == ZERO


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_scale_invariant_term_matches_cochain_module(seed):
    pairs = random_selfadjoint_presentation(random.Random(seed))
    A = OneForm.from_pairs(pairs)
    assert coeffs_noJ(A).c0 == scale_invariant_term(pairs, "direct")


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_J_doubles_scale_invariant_term_when_first_moment_vanishes(seed):
    A = random_oneform(random.Random(seed))
    # only terms built from a, a* alone reach the |D|^-3 residue
    A = OneForm({k: v for k, v in A.coeffs.items() if k[0][1:] + k[1][1:] != (0, 0, 0, 0)})
    assert ncint_closed(A, 1, 3) == 0
    assert coeffs_suq2_withJ(A).c0 == 2 * coeffs_noJ(A).c0
