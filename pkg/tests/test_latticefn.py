"""Operator algebra: shifts, covariant differences, weight-conjugated factors."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcharlier import LatticePoly, QContext
from qcharlier.latticefn import (
    WeightedLatticeFn,
    delta_cov,
    nabla,
    nabla_power_expansion,
    raising_apply,
    rodrigues_elementary,
    rodrigues_elementary_expanded,
    shift_fn,
    shift_poly,
)
from qcharlier.qkernels import q_number, x_of

coeff_lists = st.lists(
    st.fractions(min_value=Fraction(-12), max_value=Fraction(12), max_denominator=10),
    min_size=1,
    max_size=11,
)
bases = st.fractions(min_value=Fraction(1, 5), max_value=Fraction(4), max_denominator=8).filter(
    lambda c: c != 0
)


def wlf(base, coeffs, flag):
    return WeightedLatticeFn(base, LatticePoly.monomial(coeffs), flag)


# ---------------------------------------------------------------------------
# shifts
# ---------------------------------------------------------------------------

def test_shift_poly(ctx2, q2):
    x = LatticePoly.monomial((0, 1))
    assert shift_poly(x, 1, ctx2).coeffs == (1, q2)
    assert shift_poly(x, -1, ctx2).coeffs == (-1 / q2, 1 / q2)
    const = LatticePoly.monomial((Fraction(3, 7),))
    assert shift_poly(const, 1, ctx2) == const
    assert shift_poly(const, -1, ctx2) == const


@settings(max_examples=50)
@given(coeff_lists)
def test_shift_round_trip(coeffs):
    ctx = QContext.from_t("9/10", ["1/2"])
    poly = LatticePoly.monomial(coeffs)
    assert shift_poly(shift_poly(poly, 1, ctx), -1, ctx) == poly


def test_shift_fn_pointwise(ctx2):
    f = wlf(Fraction(3, 2), (1, 2, 1), True)
    down = shift_fn(f, -1, ctx2)
    for s in range(0, 7):
        assert down.eval_at(s, ctx2) == f.eval_at(s - 1, ctx2)
    g = wlf(Fraction(3, 2), (1, 2, 1), False)
    up = shift_fn(g, 1, ctx2)
    for s in range(-3, 7):
        assert up.eval_at(s, ctx2) == g.eval_at(s + 1, ctx2)
    with pytest.raises(ValueError):
        shift_fn(f, 1, ctx2)


def test_class_closed_under_x_and_geometric_multiplication(ctx2):
    # remaining closure operations: multiply by x(s) and by d^s
    f = wlf(Fraction(3, 2), (2, 1), True)
    d = Fraction(5, 7)
    for s in range(0, 7):
        assert f.times_x().eval_at(s, ctx2) == x_of(s, ctx2) * f.eval_at(s, ctx2)
        assert f.times_geometric(d).eval_at(s, ctx2) == d ** s * f.eval_at(s, ctx2)
        assert f.scale(d).eval_at(s, ctx2) == d * f.eval_at(s, ctx2)


# ---------------------------------------------------------------------------
# nabla
# ---------------------------------------------------------------------------

def test_nabla_on_reciprocal_factorial(ctx2, q2):
    f = wlf(Fraction(1), (1,), True)
    out = nabla(f, ctx2)
    assert out.base == 1 / q2
    assert out.poly.coeffs == (ctx2.t, -ctx2.t)
    assert out.factorial_denominator


def test_nabla_on_geometric(ctx2, q2):
    c = Fraction(5, 4)
    f = wlf(c, (1,), False)
    out = nabla(f, ctx2)
    assert out.base == c / q2
    assert out.poly.coeffs == (ctx2.t * (c - 1) / c,)


def test_nabla_kills_constants(ctx2):
    f = wlf(Fraction(1), (Fraction(4, 3),), False)
    assert nabla(f, ctx2).poly.is_zero


@settings(max_examples=40)
@given(bases, coeff_lists, st.booleans())
def test_nabla_pointwise(base, coeffs, flag):
    # symbolic rule == direct difference quotient at integer lattice points
    ctx = QContext.from_t("9/10", ["1/2"])
    f = wlf(base, coeffs, flag)
    out = nabla(f, ctx)
    for s in range(0, 7):
        direct = (f.eval_at(s, ctx) - f.eval_at(s - 1, ctx)) / ctx.q ** s * ctx.t
        assert out.eval_at(s, ctx) == direct


@settings(max_examples=30)
@given(bases, coeff_lists, st.booleans())
def test_nabla_commutes_with_forward_shift_pointwise(base, coeffs, flag):
    # evaluate nabla(f) at s+1 two ways: symbolically via the rules, and
    # directly from lattice values of f
    ctx = QContext.from_t("9/10", ["1/2"])
    f = wlf(base, coeffs, flag)
    out = nabla(f, ctx)
    for s in range(0, 8):
        direct = (f.eval_at(s + 1, ctx) - f.eval_at(s, ctx)) / ctx.q ** (s + 1) * ctx.t
        assert out.eval_at(s + 1, ctx) == direct


# ---------------------------------------------------------------------------
# covariant forward difference on polynomials
# ---------------------------------------------------------------------------

def test_delta_cov_examples(ctx2):
    x = LatticePoly.monomial((0, 1))
    assert delta_cov(x, ctx2).coeffs == (ctx2.t,)
    assert delta_cov(LatticePoly.monomial((Fraction(9),)), ctx2).is_zero
    x2 = LatticePoly.monomial((0, 0, 1))
    out = delta_cov(x2, ctx2)
    assert out.degree == 1
    assert out.leading == ctx2.t * q_number(2, ctx2)


@settings(max_examples=60)
@given(coeff_lists)
def test_delta_cov_degree_and_leading(coeffs):
    ctx = QContext.from_t("9/10", ["1/2"])
    poly = LatticePoly.monomial(coeffs)
    out = delta_cov(poly, ctx)  # exact division; raises if a remainder appears
    if poly.degree < 1:
        assert out.is_zero
    else:
        assert out.degree == poly.degree - 1
        assert out.leading == ctx.t * q_number(poly.degree, ctx) * poly.leading


@settings(max_examples=40)
@given(coeff_lists)
def test_delta_cov_pointwise(coeffs):
    ctx = QContext.from_t("9/10", ["1/2"])
    poly = LatticePoly.monomial(coeffs)
    out = delta_cov(poly, ctx)
    for s in range(0, 7):
        lhs = out.evaluate(x_of(s, ctx))
        rhs = (poly.evaluate(x_of(s + 1, ctx)) - poly.evaluate(x_of(s, ctx))) / ctx.q ** s * ctx.t
        assert lhs == rhs


# ---------------------------------------------------------------------------
# weight-conjugated factors
# ---------------------------------------------------------------------------

def test_rodrigues_elementary_identity_at_zero(ctx2):
    f = wlf(Fraction(1), (1, 2), True)
    assert rodrigues_elementary(f, ctx2.alphas[0], 0, ctx2) == f


def test_rodrigues_elementary_single_step(ctx2, q2):
    a = ctx2.alphas[0]
    f = wlf(Fraction(1), (1,), True)
    out = rodrigues_elementary(f, a, 1, ctx2)
    assert out.base == 1
    assert out.factorial_denominator
    assert out.poly.coeffs == (ctx2.t, -ctx2.t / (a * q2))


@settings(max_examples=25)
@given(
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=3),
)
def test_rodrigues_factors_commute(n1, n2):
    ctx = QContext.from_t("9/10", ["1/2", "3/5"])
    f = wlf(Fraction(1), (1,), True)
    one_way = rodrigues_elementary(
        rodrigues_elementary(f, ctx.alphas[0], n1, ctx), ctx.alphas[1], n2, ctx
    )
    other = rodrigues_elementary(
        rodrigues_elementary(f, ctx.alphas[1], n2, ctx), ctx.alphas[0], n1, ctx
    )
    assert one_way == other


def test_rodrigues_base_preserved(ctx2):
    f = wlf(Fraction(7, 3), (2, 1), True)
    for n in range(4):
        assert rodrigues_elementary(f, ctx2.alphas[1], n, ctx2).base == f.base


@settings(max_examples=25)
@given(bases, coeff_lists, st.booleans(), st.integers(min_value=0, max_value=4))
def test_power_expansion_matches_iteration(base, coeffs, flag, m):
    # the closed binomial expansion of the m-fold difference is an
    # independent implementation; the two must agree exactly
    ctx = QContext.from_t("9/10", ["1/2"])
    f = wlf(base, coeffs, flag)
    iterated = f
    for _ in range(m):
        iterated = nabla(iterated, ctx)
    assert nabla_power_expansion(f, m, ctx) == iterated


@settings(max_examples=20)
@given(st.integers(min_value=0, max_value=4))
def test_rodrigues_expanded_path_agrees(n):
    ctx = QContext.from_t("9/10", ["1/2", "3/5"])
    f = wlf(Fraction(1), (1,), True)
    assert rodrigues_elementary_expanded(f, ctx.alphas[0], n, ctx) == rodrigues_elementary(
        f, ctx.alphas[0], n, ctx
    )


# ---------------------------------------------------------------------------
# raising action
# ---------------------------------------------------------------------------

def test_raising_apply_on_constants(ctx2):
    one = LatticePoly.one()
    a = ctx2.alphas[0]
    out = raising_apply(one, a, 0, ctx2)
    assert out.coeffs == (ctx2.t * a, -ctx2.t)
    zero_alpha = raising_apply(one, Fraction(0), 0, ctx2)
    assert zero_alpha.coeffs == (0, -ctx2.t)


@settings(max_examples=40)
@given(coeff_lists, st.integers(min_value=0, max_value=5))
def test_raising_apply_degree_and_leading(coeffs, power):
    ctx = QContext.from_t("9/10", ["1/2"])
    poly = LatticePoly.monomial(coeffs)
    if poly.is_zero:
        return
    out = raising_apply(poly, ctx.alphas[0], power, ctx)
    assert out.degree == poly.degree + 1
    # the X * P((X-1)/q) term supplies the new top term with a q^-deg factor
    assert out.leading == -(ctx.q ** (power - poly.degree)) * ctx.t * poly.leading
