import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import SQRT2, brute_force_value, random_context, random_poly
from valuniform.errors import ContextInvalid, NonzeroValue
from valuniform.funcfield import Context, RationalFunction
from valuniform.ordered_group import GroupElement, OrderSpec, express_in_basis
from valuniform.valuation import (
    INF,
    add_values,
    check_setting,
    compare_values,
    reduce_element,
    residue,
    value_monomial,
    value_poly,
    value_ratfun,
)


@pytest.fixture
def ctx():
    return Context.build(0, SQRT2, [("x1", "value", (1, 0)), ("x2", "value", (0, 1)), ("y1", "residue"), ("y2", "residue")])


def test_value_monomial_examples(ctx):
    assert value_monomial((0, 0, 0, 0), ctx).is_zero()
    assert value_monomial((1, 1, 0, 0), ctx) == GroupElement((1, 1))
    v = value_monomial((3, -2, 5, 0), ctx)
    assert v == GroupElement((3, -2)) and ctx.order.sign(v.coords) > 0


def test_value_poly_examples(ctx):
    assert value_poly(ctx.parse("0").num) is INF
    assert value_poly(ctx.parse("x1 + x2").num) == GroupElement((1, 0))
    assert value_poly(ctx.parse("3*x1^2*x2 + y1*x1^5").num) == GroupElement((2, 1))


def test_value_ratfun_examples(ctx):
    assert value_ratfun(ctx.parse("(x1+x2)/x1")).is_zero()
    assert value_ratfun(ctx.parse("y1/y2")).is_zero()
    lex = Context.build(0, OrderSpec.lex(2), [("x1", "value", (1, 0)), ("x2", "value", (0, 1))])
    v = value_ratfun(lex.parse("x2/x1"))
    assert v == GroupElement((-1, 1)) and lex.order.sign(v.coords) < 0


def test_residue_examples(ctx):
    assert residue(ctx.parse("y1")) == ctx.parse("y1")
    assert residue(ctx.parse("(x1+x2)/x1")) == 1
    assert residue(ctx.parse("(y1*x1 + x2)/x1")) == ctx.parse("y1")
    with pytest.raises(NonzeroValue):
        residue(ctx.parse("x1"))


def test_reduce_element(ctx):
    assert reduce_element(ctx.parse("x1*y1")).is_zero()
    assert reduce_element(ctx.parse("(1 + x2)*y2")) == ctx.parse("y2")
    with pytest.raises(NonzeroValue):
        reduce_element(ctx.parse("1/x2"))


def test_infinity_is_largest(ctx):
    assert compare_values(INF, GroupElement((100, 100)), ctx) == 1
    assert compare_values(INF, INF, ctx) == 0
    assert add_values(INF, GroupElement((1, 0))) is INF


def test_check_setting_examples():
    good = Context.build(0, SQRT2, [("x1", "value", (1, 0)), ("x2", "value", (0, 1)), ("y1", "residue")])
    rep = check_setting(good)
    assert rep.ok and (rep.rho, rep.tau, rep.delta, rep.trdeg) == (2, 1, 0, 3)
    dep = Context.build(0, OrderSpec.lex(1), [("x1", "value", (1,)), ("x2", "value", (2,))])
    rep = check_setting(dep)
    assert not rep.ok and "value_matrix_square" in rep.failed() and "abhyankar_equality" in rep.failed()
    zero_param = Context.build(0, SQRT2, [("s", "param", (0, 0)), ("x2", "value", (0, 1))])
    assert "params_positive" in check_setting(zero_param).failed()


def test_dependent_values_make_residue_undefined():
    dep = Context.build(0, OrderSpec.lex(1), [("x1", "value", (1,)), ("x2", "value", (1,))])
    with pytest.raises(ContextInvalid):
        residue(dep.parse("(x1 + x2)/x1"))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["lex", "sqrt2", "sqrt3"]), st.sampled_from([0, 5]))
def test_valuation_axioms_and_oracle(seed, kind, char):
    rng = random.Random(seed)
    ctx = random_context(rng, rng.randint(1, 3), rng.randint(0, 1), kind, char)
    f, g = random_poly(rng, ctx), random_poly(rng, ctx)
    vf, vg = value_poly(f, ctx), value_poly(g, ctx)
    assert vf.coords == brute_force_value(f, ctx)
    assert value_poly(f * g, ctx) == vf + vg
    s = f + g
    if not s.is_zero():
        vs = value_poly(s, ctx)
        c = compare_values(vf, vg, ctx)
        lo = vf if c <= 0 else vg
        assert compare_values(vs, lo, ctx) >= 0
        if c != 0:
            assert vs == lo


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_residue_is_multiplicative(seed):
    rng = random.Random(seed)
    ctx = random_context(rng, 2, 2, "sqrt2")
    a = RationalFunction(random_poly(rng, ctx, 3, 3), random_poly(rng, ctx, 3, 3))
    b = RationalFunction(random_poly(rng, ctx, 3, 3), random_poly(rng, ctx, 3, 3))

    def unitize(z):
        v = value_ratfun(z, ctx)
        e = express_in_basis(v, [list(r) for r in ctx.value_matrix])
        return z / RationalFunction.monomial(ctx, ctx.embed_tx(e))

    a, b = unitize(a), unitize(b)
    assert residue(a * b, ctx) == residue(a, ctx) * residue(b, ctx)
