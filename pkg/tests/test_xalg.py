import pytest
from hypothesis import given, strategies as st

from suq2.pbw import AlgebraElement, gen
from suq2.qfield import ONE, qpow
from suq2.suites import operator_identities
from suq2.xalg import (
    DEGREE,
    LETTERS,
    F,
    XElement,
    d,
    degree0,
    delta,
    is_zero_operator,
    lift,
    normal_form,
    word,
)

q, q2 = qpow(1), qpow(2)

words = st.lists(st.sampled_from(LETTERS), min_size=1, max_size=4).map(word)
elements = st.lists(
    st.tuples(words, st.integers(-3, 3).filter(bool)), min_size=1, max_size=3
).map(lambda ts: sum((w.scale(c) for w, c in ts), XElement()))


def test_lifts():
    assert lift(gen("a")) == word("a+") + word("a-")
    assert lift(gen("b*")) == word("b+*") + word("b-*")
    assert lift(AlgebraElement.scalar(1)) == XElement.scalar(1)


def test_delta_examples():
    assert delta(lift(gen("a"))) == word("a+") - word("a-")
    assert delta(lift(gen("b")), 2) == word("b+") + word("b-")
    assert delta(word("a+ b+")) == word("a+ b+", 2)


def test_degree_zero_part():
    T = lift(gen("a*")) * delta(lift(gen("a")))
    assert degree0(T) == word("a+* a+") - word("a-* a-")
    assert degree0(word("a+")).is_zero()
    assert degree0(lift(AlgebraElement.scalar(1))) == XElement.scalar(1)


def test_degrees_match_delta_weights():
    for name, k in zip(LETTERS, DEGREE):
        assert delta(word(name)) == word(name, k)


def test_first_commutator_identity_is_constant():
    T = word("a+* a+") - word("a+ a+*", q2) + (word("b+* b+") - word("b+ b+*")).scale(q2)
    assert normal_form(T) == normal_form(XElement.scalar(1 - q2))


def test_b_minus_action():
    plain, fpart = normal_form(word("b-"))
    assert plain.as_dict() == {(-1, 0, -1): {(1, 0, (), (0,)): -ONE}}
    assert fpart.is_zero()


def test_commutation_rules():
    assert is_zero_operator(word("a- a+") - word("a+ a-", q2))
    assert is_zero_operator(word("b+ a+") - word("a+ b+", q))


def test_F_is_central_involution():
    assert F * F == XElement.scalar(1)
    for name in LETTERS:
        assert F * word(name) == word(name) * F


def test_d_is_delta_times_F():
    x = lift(gen("b"))
    assert d(x) == delta(x).times_F()


@pytest.mark.parametrize("name", sorted(operator_identities()))
def test_operator_identities(name):
    assert is_zero_operator(operator_identities()[name])


@given(elements, elements)
def test_delta_is_a_derivation(T, S):
    assert delta(T * S) == delta(T) * S + T * delta(S)


@given(elements)
def test_adjoint_is_involutive(T):
    assert T.adjoint().adjoint() == T
