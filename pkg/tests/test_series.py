from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vertextwist.errors import InfiniteConvolution, NonMeromorphicVariable
from vertextwist.scalars import ONE, Scalar
from vertextwist.series import (Box, PlainDelta, Product, Sum, TermSeries,
                                binomial_expand, binomial_of, branch_shift,
                                delta_iter, delta_prod, delta_prod_rev,
                                derivative, log_substitute, log1p_of,
                                minus_convention, mono, nilpotent_binomial,
                                residue, series_mismatch, series_to_json)

F = Fraction
X = ("x",)
X12 = ("x1", "x2")
X012 = ("x0", "x1", "x2")


def window(vars, hw, logcap=0):
    return Box.cube(len(vars), -hw, hw, logcap)


def poly(vars, *terms):
    return TermSeries(vars, {mono(p, l): c for p, l, c in terms})


def test_add_identity_and_cancellation():
    a = TermSeries.monomial(X, [F(1, 2)])
    z = TermSeries.zero(X)
    assert series_mismatch(Sum([a, z]), a, window(X, 3)) is None
    s = Sum([a, TermSeries.monomial(X, [F(1, 2)], coeff=Scalar.rational(-1))])
    assert s.terms_in(window(X, 3)) == {}


def test_x1_minus_x2_plus_x2_is_x1():
    d = poly(X12, ((1, 0), None, ONE), ((0, 1), None, Scalar.rational(-1)))
    s = Sum([d, TermSeries.monomial(X12, [0, 1])])
    assert series_mismatch(s, TermSeries.monomial(X12, [1, 0]), window(X12, 4)) is None


def test_telescoping_product():
    # (sum_{n>=0} x1^{-1-n} x2^n) * (x1 - x2) = 1
    geom = binomial_expand(X12, -1, 0, 1)
    lin = poly(X12, ((1, 0), None, ONE), ((0, 1), None, Scalar.rational(-1)))
    prod = Product(geom, lin)
    assert series_mismatch(prod, TermSeries.constant(X12, ONE), window(X12, 6)) is None


def test_half_power_product():
    a = TermSeries.monomial(X, [F(1, 2)])
    assert Product(a, a).terms_in(window(X, 2)) == {mono([1]): ONE}


def test_delta_squared_is_infinite():
    d = PlainDelta(X, 0)
    with pytest.raises(InfiniteConvolution):
        Product(d, d).terms_in(window(X, 1))


def test_binomial_integer_cases():
    b = binomial_expand(X12, 1, 0, 1)
    assert b.terms_in(window(X12, 2)) == {
        mono([1, 0]): ONE, mono([0, 1]): Scalar.rational(-1)}


def test_binomial_half_expansion():
    b = binomial_expand(X12, F(1, 2), 0, 1)
    t = b.terms_in(window(X12, 2))
    assert t[mono([F(1, 2), 0])] == ONE
    assert t[mono([F(-1, 2), 1])] == Scalar.rational(F(-1, 2))
    assert t[mono([F(-3, 2), 2])] == Scalar.rational(F(-1, 8))


@given(st.integers(-9, 9).map(lambda n: F(n, 2)))
@settings(max_examples=30, deadline=None)
def test_binomial_inverse_property(A):
    w = window(X12, 5)
    p = Product(binomial_expand(X12, A, 0, 1), binomial_expand(X12, -A, 0, 1))
    assert series_mismatch(p, TermSeries.constant(X12, ONE), w) is None


def test_minus_convention_integer():
    # (-x2 + x1)^1 = e^{pi i} (x2 - x1) = x1 - x2
    m = minus_convention(X12, 1, 0, 1)
    want = poly(X12, ((1, 0), None, ONE), ((0, 1), None, Scalar.rational(-1)))
    assert series_mismatch(m, want, window(X12, 3)) is None


def test_minus_convention_half():
    m = minus_convention(X12, F(1, 2), 0, 1)
    t = m.terms_in(window(X12, 2))
    assert t[mono([0, F(1, 2)])] == Scalar.e(F(1, 2))


def test_delta_identity_three_term():
    # x0^{-1}d((x1-x2)/x0) - x0^{-1}d((-x2+x1)/x0) = x1^{-1}d((x2+x0)/x1)
    lhs = Sum([delta_prod(X012, 0, 1, 2),
               delta_prod_rev(X012, 0, 1, 2) * Scalar.rational(-1)])
    rhs = delta_iter(X012, 0, 1, 2)
    assert series_mismatch(lhs, rhs, window(X012, 3)) is None


def test_delta_constant_term():
    t = delta_prod(X012, 0, 1, 2).terms_in(Box.cube(3, -2, 2))
    assert t[mono([-1, 0, 0])] == ONE
    assert t[mono([-2, 1, 0])] == ONE
    assert t[mono([-2, 0, 1])] == Scalar.rational(-1)


def test_delta_substitution_residue():
    # Res_x1 x1^{-1} d(x2/x1) x1^3 = x2^3
    from vertextwist.series import DeltaDerivKernel
    dk = DeltaDerivKernel(X12, den=0, num=1, k=0)
    cubed = TermSeries.monomial(X12, [3, 0])
    r = residue(Product(dk, cubed), 0)
    assert r.terms_in(Box.cube(1, -5, 5)) == {mono([3]): ONE}


def test_residue_rules():
    assert residue(TermSeries.monomial(X, [-1]), 0).terms_in(Box.cube(0, 0, 0)) \
        == {((), ()): ONE}
    assert residue(TermSeries.monomial(X, [4]), 0).terms_in(Box.cube(0, 0, 0)) == {}
    with pytest.raises(NonMeromorphicVariable):
        residue(TermSeries.monomial(X, [F(-1, 2)]), 0)
    with pytest.raises(NonMeromorphicVariable):
        residue(TermSeries.monomial(X, [-1], logs=[1]), 0)


def test_branch_shift_basics():
    s = TermSeries.monomial(X, [F(1, 2)])
    assert branch_shift(s, 0, 0) is s
    t = branch_shift(s, 0, 1).terms_in(window(X, 1))
    assert t == {mono([F(1, 2)]): Scalar.rational(-1)}
    lg = TermSeries(X, {mono([0], [1]): ONE})
    t = branch_shift(lg, 0, 1).terms_in(Box.cube(1, -1, 1, 1))
    assert t[mono([0], [1])] == ONE
    assert t[mono([0], [0])] == Scalar.pi() * 2


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=20, deadline=None)
def test_branch_shift_group_action(p, q):
    s = TermSeries(X, {mono([F(1, 2)], [2]): ONE, mono([-2], [1]): Scalar.e(F(1, 4))})
    w = Box.cube(1, -3, 3, 2)
    lhs = branch_shift(branch_shift(s, 0, p), 0, q)
    rhs = branch_shift(s, 0, p + q)
    assert series_mismatch(lhs, rhs, w) is None


def test_log_substitute_rules():
    y = ("y",)
    assert log_substitute(TermSeries.monomial(y, [-1]), 0).terms_in(window(X, 2)) \
        == {mono([-1]): Scalar.rational(-1)}
    assert log_substitute(TermSeries.monomial(y, [F(-1, 2)]), 0).terms_in(window(X, 1)) \
        == {mono([F(-1, 2)]): Scalar.e(F(-1, 2))}
    t = log_substitute(TermSeries(y, {mono([0], [1]): ONE}), 0).terms_in(
        Box.cube(1, 0, 0, 1))
    assert t[mono([0], [1])] == ONE
    assert t[mono([0], [0])] == Scalar.pi()


def test_log_substitute_twice_is_full_branch_shift():
    # applying y -> -x twice maps x^n -> e^{2 pi i n} x^n, log x -> log x + 2 PI
    s = TermSeries(("y",), {mono([F(1, 2)], [1]): ONE})
    twice = log_substitute(log_substitute(s, 0, rename="z"), 0)
    back = branch_shift(TermSeries(X, {mono([F(1, 2)], [1]): ONE}), 0, 1)
    assert series_mismatch(twice, back, Box.cube(1, -2, 2, 1)) is None


def test_derivative_with_logs():
    s = TermSeries(X, {mono([2], [1]): ONE})
    t = derivative(s, 0).terms_in(Box.cube(1, -3, 3, 1))
    assert t[mono([1], [1])] == Scalar.rational(2)
    assert t[mono([1], [0])] == ONE


def test_formal_identity_alpha():
    # ((1 + x2/(x1-x2))/x1)^(-a) = (x1-x2)^a, expanded per the conventions
    a = F(1, 2)
    w = window(X12, 4)
    inner = Product(TermSeries.monomial(X12, [0, 1]), binomial_expand(X12, -1, 0, 1))
    outer = binomial_of(inner, -a, w)
    lhs = Product(outer, TermSeries.monomial(X12, [a, 0]))
    rhs = binomial_expand(X12, a, 0, 1)
    assert series_mismatch(lhs, rhs, w) is None


def test_formal_identity_nilpotent():
    # same with a nilpotent exponent: compare coefficient series of N^k
    w = window(X12, 3)
    wlog = Box.cube(2, -3, 3, 3)
    order = 4
    direct = nilpotent_binomial(X12, order, 0, 1, wlog)
    inner = Product(TermSeries.monomial(X12, [0, 1]), binomial_expand(X12, -1, 0, 1))
    tail = log1p_of(inner, w)
    xlog = TermSeries(X12, {mono([0, 0], [1, 0]): ONE})
    L = Sum([tail, xlog])  # log(1 + x2/(x1-x2)) + log x1... sign: see below
    # ((1+u)/x1)^{-N} = e^{-N(log(1+u) - log x1)} = e^{N(log x1 - log(1+u))}
    L = Sum([xlog, tail * Scalar.rational(-1)])
    cur = TermSeries.constant(X12, ONE)
    from math import factorial
    for k in range(order):
        ratio = TermSeries(X12, {m: c / factorial(k) for m, c in cur.terms.items()})
        assert series_mismatch(ratio, direct[k], wlog) is None, k
        cur = TermSeries(X12, Product(cur, L).terms_in(wlog))


def test_json_roundtrip_shape():
    s = TermSeries(X12, {mono([F(1, 2), -1], [0, 1]): Scalar.e(F(1, 4))})
    doc = series_to_json(s.terms, X12, window(X12, 2))
    assert doc["variables"] == ["x1", "x2"]
    assert doc["entries"][0]["powers"] == {"x1": "1/2", "x2": "-1"}
    assert doc["entries"][0]["log_powers"] == {"x2": 1}
