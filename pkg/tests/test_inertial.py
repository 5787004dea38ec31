import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import SQRT2, random_poly
from test_monomialize import _hand_chart
from valuniform.errors import InertialCheckFailed, InvalidPresentation, MissingConstant, NonUnitDenominator
from valuniform.funcfield import Context, RationalFunction
from valuniform.inertial import (
    EtalePresentation,
    ExtElement,
    Representation,
    ascend_chart,
    check_inertial,
    collect_constants,
    ext_mul,
    ext_value,
    make_ext,
    parse_ext,
    split_units,
    verify_ascended,
)
from valuniform.monomialize import monomialize_set
from valuniform.ordered_group import GroupElement
from valuniform.valuation import INF, value_ratfun


def sq(char=0):
    return Context.build(char, SQRT2, [("x1", "value", (1, 0)), ("x2", "value", (0, 1))])


def pres(ctx, f, g=("1",), h=("1",), s=0, residue="0"):
    P = ctx.parse
    return EtalePresentation("T", tuple(map(P, f)), tuple(map(P, g)), tuple(map(P, h)), s, P(residue))


AS = ("-x1", "-1", "1")  # T^2 - T - x1
# f'(T) = 2T - 1 and (2T - 1)^2 = 4 x1 + 1 modulo f, so 1/f' = (2T - 1)/(4 x1 + 1)
AS_INV = dict(g=("4*x1 + 1",), h=("-1", "2"), s=1)


def test_check_inertial_examples():
    ctx = sq()
    assert check_inertial(pres(ctx, AS, residue="0", **AS_INV), ctx).ok
    c2 = sq(2)
    assert check_inertial(pres(c2, AS, residue="0"), c2).ok
    ram = check_inertial(pres(ctx, ("-x1", "0", "1"), residue="0"), ctx)
    assert not ram.ok and "separable_reduction" in ram.failed()


def test_check_inertial_reports_each_clause():
    ctx = sq()
    rep = check_inertial(pres(ctx, AS, residue="0"), ctx)
    # with g = h = 1 the identity f' h = g^s fails, everything else holds
    assert rep.failed() == ["inverse_derivative"]
    rep = check_inertial(pres(ctx, ("-1/x1", "-1", "1"), residue="0"), ctx)
    assert "integral_coefficients" in rep.failed()
    rep = check_inertial(pres(ctx, ("-x1", "-1", "2"), residue="0"), ctx)
    assert "monic" in rep.failed()
    rep = check_inertial(pres(ctx, AS, residue="2", **AS_INV), ctx)
    assert "residue_is_root" in rep.failed()


def test_ext_value_examples():
    ctx = sq()
    p = pres(ctx, AS, residue="1", **AS_INV)
    assert ext_value(parse_ext("T", p), p, ctx).is_zero()
    assert ext_value(parse_ext("x1*T + x1^2", p), p, ctx) == GroupElement((1, 0))
    assert ext_value(make_ext([RationalFunction.const(ctx, 0)], p), p, ctx) is INF


def test_ext_value_sees_the_chosen_root():
    ctx = sq()
    p0 = pres(ctx, AS, residue="0", **AS_INV)
    # the root near 0 is -x1 + x1^2 - 2 x1^3 + ...
    assert ext_value(parse_ext("T", p0), p0, ctx) == GroupElement((1, 0))
    assert ext_value(parse_ext("T + x1", p0), p0, ctx) == GroupElement((2, 0))
    assert ext_value(parse_ext("T + x1 - x1^2", p0), p0, ctx) == GroupElement((3, 0))


def test_ext_value_rejects_bad_presentations():
    ctx = sq()
    with pytest.raises(InvalidPresentation):
        ext_value(parse_ext("T", pres(ctx, ("-x1", "0", "1"))), pres(ctx, ("-x1", "0", "1")), ctx)
    # T^2 - 3T + 2 = (T - 1)(T - 2) has roots in the base field
    split = pres(ctx, ("2", "-3", "1"), residue="1")
    with pytest.raises(InvalidPresentation):
        ext_value(parse_ext("T - 1", split), split, ctx)


def _random_ext(rng, ctx, p):
    c = [RationalFunction(random_poly(rng, ctx, 3, 3)) for _ in range(2)]
    return make_ext(c, p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_ext_value_adds_up_to_the_norm(seed):
    rng = random.Random(seed)
    ctx = sq()
    p0, p1 = pres(ctx, AS, residue="0", **AS_INV), pres(ctx, AS, residue="1", **AS_INV)
    e = _random_ext(rng, ctx, p0)
    c0, c1 = e.coeffs
    # N(c0 + c1 T) over the two roots: c0^2 + c0 c1 (T + T') + c1^2 T T', with T + T' = 1, T T' = -x1
    norm = c0 * c0 + c0 * c1 - c1 * c1 * ctx.parse("x1")
    if norm.is_zero():
        return
    v0, v1 = ext_value(e, p0, ctx), ext_value(e, p1, ctx)
    assert v0 + v1 == value_ratfun(norm, ctx)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["0", "1"]))
def test_ext_value_is_multiplicative(seed, residue):
    rng = random.Random(seed)
    ctx = sq()
    p = pres(ctx, AS, residue=residue, **AS_INV)
    a, b = _random_ext(rng, ctx, p), _random_ext(rng, ctx, p)
    if a.is_zero() or b.is_zero():
        return
    assert ext_value(ext_mul(a, b, p), p, ctx) == ext_value(a, p, ctx) + ext_value(b, p, ctx)


def test_split_units_examples():
    ctx = sq()
    p = pres(ctx, AS, residue="1", **AS_INV)
    units, primes, _ = split_units([parse_ext("T", p)], p, ctx)
    assert units[0] == parse_ext("T", p) and primes == []
    units, primes, _ = split_units([parse_ext("x1", p)], p, ctx)
    assert primes[0] == ctx.parse("x1") and units[0] == parse_ext("1", p)
    units, primes, _ = split_units([parse_ext("x1*T", p)], p, ctx)
    assert primes[0] == ctx.parse("x1") and units[0] == parse_ext("T", p)


def test_collect_constants_examples():
    ctx = sq()
    p = pres(ctx, AS)
    got = collect_constants(p, [], ctx)
    assert {str(c) for c in got} == {"-x1", "-1", "1"}
    P = ctx.parse
    p1 = pres(ctx, AS, residue="1", **AS_INV)
    one, zero = P("1"), P("0")
    eta = parse_ext("T", p1)
    with_eta = collect_constants(p1, [Representation(eta, (zero, one), (one,), 0)], ctx)
    assert any(c == 1 for c in with_eta)
    # xi = (x1 T + 1)/T = (x1^2 - 1)/x1 + T/x1 because 1/T = (T - 1)/x1
    xi = ExtElement((P("(x1^2 - 1)/x1"), P("1/x1")))
    got = collect_constants(p1, [Representation(xi, (one, P("x1")), (zero, one), 0)], ctx)
    assert any(c == P("x1") for c in got)
    with pytest.raises(InvalidPresentation):
        collect_constants(p1, [Representation(xi, (one, P("x2")), (zero, one), 0)], ctx)


def test_non_unit_denominator():
    ctx = sq()
    p0 = pres(ctx, AS, residue="0", **AS_INV)
    P = ctx.parse
    eta = parse_ext("T", p0)
    with pytest.raises(NonUnitDenominator):
        collect_constants(p0, [Representation(eta, (P("0"), P("1")), (P("0"), P("1")), 0)], ctx)


def _base_for(p, Z, ctx, extra=()):
    units, primes, _ = split_units(Z, p, ctx)
    items = [c for c in list(collect_constants(p, [], ctx)) + list(primes) + list(extra) if not c.is_constant()]
    return monomialize_set(items, ctx)


def test_ascend_examples():
    ctx = sq()
    p = pres(ctx, AS, residue="1", **AS_INV)
    Z = [parse_ext("T", p)]
    ac = ascend_chart(_base_for(p, Z, ctx), p, Z, ctx=ctx)
    fz = ac.factorizations[0]
    assert fz.exps == (0, 0) and str(fz.unit.format("T")) == "T"
    assert all(good for good, _ in verify_ascended(ac, ctx).values())

    Z = [parse_ext("x1*T", p)]
    base = _base_for(p, Z, ctx)
    ac = ascend_chart(base, p, Z, ctx=ctx)
    fz = ac.factorizations[0]
    assert base.expand(base.monomial(fz.exps)) == ctx.parse("x1")
    assert fz.unit.format("T") == "T"
    assert ac.dimension == base.dimension


def test_ascend_sqrt2_worked_example_on_the_hand_chart():
    ctx = sq()
    p = pres(ctx, AS, residue="1", **AS_INV)
    base = _hand_chart(ctx)
    Z = [parse_ext("(x1 + x2)*T", p)]
    ac = ascend_chart(base, p, Z, ctx=ctx)
    fz = ac.factorizations[0]
    assert fz.exps == (2, 1)
    assert fz.unit == ExtElement((base.context.parse("0"), base.context.parse("1 + xp1")))
    verdict = verify_ascended(ac, ctx)
    assert all(good for good, _ in verdict.values()), verdict
    assert ac.dimension == base.dimension == 2 and ac.regular_params == base.regular_params


def test_ascend_errors():
    ctx = sq()
    ram = pres(ctx, ("-x1", "0", "1"))
    Z = [parse_ext("T", ram)]
    with pytest.raises(InertialCheckFailed):
        ascend_chart(monomialize_set([ctx.parse("x1")], ctx), ram, Z, ctx=ctx)
    p = pres(ctx, ("-x1 - x2", "-1", "1"), g=("4*x1 + 4*x2 + 1",), h=("-1", "2"), s=1, residue="1")
    assert check_inertial(p, ctx).ok
    with pytest.raises(MissingConstant):
        ascend_chart(monomialize_set([ctx.parse("x1")], ctx), p, [parse_ext("T", p)], ctx=ctx)


def test_check_inertial_does_not_depend_on_the_chart():
    ctx = sq()
    p = pres(ctx, AS, residue="1", **AS_INV)
    before = check_inertial(p, ctx).as_dict()
    monomialize_set([ctx.parse("x1 + x2")], ctx)
    assert check_inertial(p, ctx).as_dict() == before
