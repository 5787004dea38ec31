import pytest

from helpers import order_family
from valuniform.errors import ContextInvalid, NegativeValue
from valuniform.funcfield import Context
from valuniform.ordered_group import OrderSpec
from valuniform.pipeline import base_coefficients, uniformize


def sqrt2_base_with_x():
    order = order_family("sqrt2", 3)
    return Context.build(0, order, [("s", "param", (1, 0, 0)), ("t", "param", (0, 1, 0)), ("x", "value", (0, 0, 1))])


def commensurable_base():
    return Context.build(
        0, OrderSpec.lex(2), [("s", "param", (2, 0)), ("t", "param", (3, 0)), ("x", "value", (0, 1))]
    )


def test_base_coefficients_groups_by_other_variables():
    ctx = sqrt2_base_with_x()
    got = base_coefficients(ctx.parse("(s^3 + t^2)*x + s*t + x^2"), ["s", "t"])
    assert [str(c) for c in got] == ["s^3 + t^2"]


def test_uniformize_independent_weights():
    ctx = sqrt2_base_with_x()
    Z = [ctx.parse("(s^3 + t^2)*x + s*t"), ctx.parse("x^2 + s^2 + t")]
    u = uniformize(Z, ctx)
    assert u.ok and u.dimension == 1 + 2
    assert u.state.transforms() > 0 and not u.state.reclassified


def test_uniformize_commensurable_weights_reclassifies():
    ctx = commensurable_base()
    Z = [ctx.parse("(s^3 + t^2)*x + s"), ctx.parse("x^2*t + s^2*x")]
    u = uniformize(Z, ctx)
    assert u.ok
    assert len(u.state.reclassified) == 1
    assert u.dimension == 2  # one param left plus one value variable


def test_uniformize_propagates_negative_values():
    ctx = sqrt2_base_with_x()
    with pytest.raises(NegativeValue):
        uniformize([ctx.parse("1/x")], ctx)


def test_uniformize_needs_a_valid_rewritten_context():
    ctx = Context.build(0, OrderSpec.lex(1), [("s", "param", (1,)), ("x", "value", (1,))])
    with pytest.raises(ContextInvalid):
        uniformize([ctx.parse("s + x")], ctx)
