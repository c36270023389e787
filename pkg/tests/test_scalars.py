from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vertextwist.scalars import (HALF_SQRT2, Scalar, Vec, binomial,
                                 CyclotomicLevelError)

F = Fraction


def test_e_pi_folds_to_minus_one():
    assert Scalar.e(1) == Scalar.rational(-1)
    assert Scalar.e(2) == Scalar.one()
    assert Scalar.e(F(5, 2)) == Scalar.e(F(1, 2))
    assert Scalar.e(F(3, 2)) == -Scalar.e(F(1, 2))


def test_phase_lattice_enforced():
    with pytest.raises(CyclotomicLevelError):
        Scalar.e(F(1, 3))


def test_half_sqrt2_squares_to_half():
    assert HALF_SQRT2 * HALF_SQRT2 == Scalar.rational(F(1, 2))


def test_pi_laurent():
    x = Scalar.pi(-1) * Scalar.pi(3)
    assert x == Scalar.pi(2)


phases = st.integers(min_value=-40, max_value=40).map(lambda k: F(k, 16))
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def scalars():
    return st.lists(
        st.tuples(st.integers(min_value=-2, max_value=3), phases, rationals),
        max_size=4,
    ).map(lambda ts: sum(
        (Scalar.pi(p) * Scalar.e(q) * c for p, q, c in ts), Scalar.zero()))


@given(scalars(), scalars())
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(scalars(), scalars(), scalars())
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(phases, phases)
def test_phase_addition(q1, q2):
    assert Scalar.e(q1) * Scalar.e(q2) == Scalar.e(q1 + q2)


@given(scalars())
def test_additive_inverse(a):
    assert (a - a).is_zero()


def test_binomial_recurrence_oracle():
    # independent oracle: Pascal recurrence C(a,k) = C(a-1,k-1) + C(a-1,k)
    for num in range(-6, 7):
        a = F(num, 2)
        for k in range(1, 8):
            assert binomial(a, k) == binomial(a - 1, k - 1) + binomial(a - 1, k)


def test_binomial_half_values():
    assert binomial(F(1, 2), 0) == 1
    assert binomial(F(1, 2), 1) == F(1, 2)
    assert binomial(F(1, 2), 2) == F(-1, 8)
    assert binomial(F(1, 2), 3) == F(1, 16)


def test_vec_arithmetic():
    v = Vec.basis("a") + Vec.basis("b").scale(2)
    w = v - Vec.basis("a")
    assert w == Vec.basis("b").scale(2)
    assert v.scale(0).is_zero()
    assert v.coeff("a") == Scalar.one()
