"""Numeric truncated-space oracle: basis action, J, shell traces and residue fits."""
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp

from suq2.hopf_tau import ncint
from suq2.oneform import OneForm
from suq2.oracle import (
    BasisVector,
    ConvergenceError,
    Oracle,
    ShellTrace,
    apply,
    apply_J,
    oracle_integral,
    oracle_J,
    residues_fit,
)
from suq2.pbw import gen
from suq2.qfield import qpow
from suq2.xalg import delta, lift, normal_form, word

Q = 0.5


@pytest.fixture(scope="module")
def orc():
    return Oracle(Q, 40)


def qn(n):
    return np.sqrt(1 - Q ** (2 * n))


def test_b_minus_kills_l_zero():
    v = BasisVector(4, 2, 0, "up")
    assert apply(word("b-"), v, Q) == {}


def test_a_plus_coefficient():
    v = BasisVector(3, 1, 2, "up")
    out = apply(word("a+"), v, Q)
    assert list(out) == [BasisVector(4, 2, 3, "up")]
    assert out[BasisVector(4, 2, 3, "up")] == pytest.approx(qn(2) * qn(3), abs=1e-15)


def test_invalid_vectors_rejected():
    with pytest.raises(ValueError):
        BasisVector(0, 0, 0, "down")
    with pytest.raises(ValueError):
        BasisVector(2, 3, 0, "up")


@pytest.mark.parametrize("v", [BasisVector(0, 0, 1), BasisVector(5, 2, 6), BasisVector(5, 4, 3, "down")])
def test_J_squares_to_minus_one(v):
    c1, w = apply_J(v, 1)
    c2, u = apply_J(w, c1)
    assert u == v
    assert c2 == pytest.approx(-1)


def test_J_matrix_squares_to_minus_one(orc):
    x = np.random.default_rng(0).normal(size=orc.dim) + 1j
    assert np.allclose(orc.apply_J_vector(orc.apply_J_vector(x)), -x)


def test_identity_shell_traces(orc):
    for t in orc.shell_traces(sp.identity(orc.dim)):
        assert t.value == 2 * (t.d**2 - Fraction(1, 4))


def test_F_shell_traces_balance(orc):
    for t in orc.shell_traces(orc.F):
        assert t.value == 0


def _symbolic_diagonal(T, m, l):
    """Evaluate the zero-shift part of normal_form(T) at (m, l)."""
    plain, _ = normal_form(T)
    poly = plain.as_dict().get((0, 0, 0), {})
    total = 0.0
    for (eq, ep, us, vs), c in poly.items():
        term = c(Q) * Q ** (eq * m + ep * l)
        for u in us:
            term *= qn(m + u)
        for v in vs:
            term *= qn(l + v)
        total += term
    return total


def test_bbstar_traces_match_symbolic(orc):
    T = lift(gen("b") * gen("b*"))
    # the last shell touches the truncation edge, where b+* has no target
    traces = orc.shell_traces(orc.x_matrix(T), orc.N - 1)
    for t in traces[20:]:
        k = int(t.d - Fraction(1, 2))
        expect = sum(_symbolic_diagonal(T, m, l) for m in range(k) for l in range(k + 1))
        expect += sum(_symbolic_diagonal(T, m, l) for m in range(k + 1) for l in range(k))
        assert abs(t.value - expect) < 1e-12 * abs(expect)


def test_fit_of_identity(orc):
    fit = residues_fit(orc.shell_traces(sp.identity(orc.dim)))
    assert (fit.c2, fit.c1, fit.c0) == pytest.approx((2, 0, -0.5), abs=1e-9)


def test_fit_needs_four_shells():
    with pytest.raises(ValueError):
        residues_fit([ShellTrace(Fraction(1, 2), 0)] * 3)


def test_fit_flags_unsettled_windows():
    traces = [ShellTrace(Fraction(2 * k + 1, 2), complex((-1) ** k)) for k in range(6)]
    with pytest.raises(ConvergenceError):
        residues_fit(traces, tol=1e-8)


def test_tadpole_value():
    A = OneForm.term((0, 1, 0), (0, 0, 1))
    assert oracle_integral(A, 1, 1, Q, 70).c0 == pytest.approx(8 / 3, abs=1e-8)


def test_A_J_A_J_inverse():
    A = OneForm.term((-1, 0, 0), (1, 0, 0))
    assert oracle_J(A, A, "i", Q, 50) == pytest.approx(2, abs=1e-8)


def test_q_guard():
    with pytest.raises(ValueError, match="symbolic engine"):
        Oracle(0.95, 5)
    with pytest.raises(ValueError):
        Oracle(1.0, 5)


def test_L_word_is_diagonal_q_power(orc):
    # exact away from the top l of each row and the truncation shell; the l-edge error is O(q^2l)
    L = orc.x_matrix(word("b+ b+*") + word("a- a-*", qpow(-2)))
    target = Q ** (2.0 * orc.l)
    diff = abs(L - sp.diags(target)).tocoo()
    edge = (orc.l == np.where(orc.up, orc.two_j + 1, orc.two_j - 1)) | (orc.two_j == orc.N)
    assert (diff.row == diff.col).all()
    inner = ~edge[diff.col]
    assert diff.data[inner].max(initial=0) < 1e-12
    assert (diff.data[~inner] <= target[diff.col[~inner]] + 1e-15).all()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_L_power_traces(n):
    o = Oracle(Q, 60)
    Ln = sp.diags(Q ** (2.0 * n * o.l))
    traces = o.shell_traces(Ln)
    for t in traces:
        k = int(t.d - Fraction(1, 2))
        geo = lambda top: sum(Q ** (2 * n * l) for l in range(top))
        assert abs(t.value - (k * geo(k + 1) + (k + 1) * geo(k))) < 1e-10
    assert residues_fit(traces).c1 == pytest.approx(2 / (1 - Q ** (2 * n)), abs=1e-10)


def test_L_word_integral_is_symbolic():
    L = word("b+ b+*") + word("a- a-*", qpow(-2))
    for n in (1, 2, 3):
        assert ncint(L**n, 2) == 2 / (1 - qpow(2 * n))


def test_delta_matches_commutator(orc):
    b = orc.x_matrix(lift(gen("b*")))
    lhs = orc.delta(b)
    rhs = orc.x_matrix(delta(lift(gen("b*"))))
    assert abs(lhs - rhs).max() < 1e-12
