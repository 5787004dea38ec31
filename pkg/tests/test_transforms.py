from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest

from helpers import SQRT2, binomial_transform_oracle
from valuniform.errors import (
    DimensionZero,
    EmptyCenter,
    IterationCapExceeded,
    NotInBaseRing,
    RationalDependenceUnresolved,
)
from valuniform.funcfield import Context
from valuniform.ordered_group import GroupElement, OrderSpec, int_det
from valuniform.transforms import (
    CAP_ENV,
    default_cap,
    establish_nc_v,
    initial_state,
    monoidal_transform,
    verify_certificate,
)


def sqrt2_base():
    return Context.build(0, SQRT2, [("s", "param", (1, 0)), ("t", "param", (0, 1))])


def rational_base(ws=2, wt=3):
    return Context.build(0, OrderSpec.lex(1), [("s", "param", (ws,)), ("t", "param", (wt,))])


def test_quadratic_transform_sqrt2():
    ctx = sqrt2_base()
    st = monoidal_transform(initial_state(ctx), ["s", "t"], ctx)
    assert [p.definition for p in st.params] == [(1, 0), (-1, 1)]
    assert [p.value for p in st.params] == [GroupElement((1, 0)), GroupElement((-1, 1))]
    assert st.transforms() == 1


def test_principal_center_is_a_no_op():
    ctx = sqrt2_base()
    st0 = initial_state(ctx)
    st = monoidal_transform(st0, ["t"], ctx)
    assert st.params == st0.params and st.transforms() == 0


def test_quadratic_transform_rational_weights():
    ctx = rational_base()
    st = monoidal_transform(initial_state(ctx), ["s", "t"], ctx)
    assert [p.definition for p in st.params] == [(1, 0), (-1, 1)]
    assert [p.value.coords for p in st.params] == [(2,), (1,)]


def test_transform_errors():
    ctx = sqrt2_base()
    with pytest.raises(EmptyCenter):
        monoidal_transform(initial_state(ctx), [], ctx)
    empty = initial_state(ctx, [])
    with pytest.raises(DimensionZero):
        monoidal_transform(empty, ["s"], ctx)


def test_equal_weights_reclassify_or_raise():
    ctx = rational_base(1, 1)
    with pytest.raises(RationalDependenceUnresolved):
        monoidal_transform(initial_state(ctx), ["s", "t"], ctx, allow_reclassify=False)
    st = monoidal_transform(initial_state(ctx), ["s", "t"], ctx)
    assert st.dim == 1 and len(st.reclassified) == 1
    assert abs(int_det(st.definition_matrix())) == 1


def test_nc_v_examples():
    one = Context.build(0, OrderSpec.lex(1), [("s", "param", (1,))])
    st, certs = establish_nc_v(initial_state(one), [one.parse("s^3*(1 + s)")], one)
    assert st.transforms() == 0 and certs[0].exps == (3,)

    ctx = sqrt2_base()
    st, certs = establish_nc_v(initial_state(ctx), [ctx.parse("s + t")], ctx)
    assert st.transforms() == 1 and certs[0].exps == (1, 0)
    assert str(certs[0].unit) == "t_1 + 1"
    assert verify_certificate(certs[0], st, ctx) == []

    ctx = rational_base()
    st, certs = establish_nc_v(initial_state(ctx), [ctx.parse("s + t")], ctx)
    assert st.transforms() == 1 and certs[0].exps == (1, 0)
    assert verify_certificate(certs[0], st, ctx) == []


def test_nc_v_rejects_non_params():
    ctx = Context.build(0, SQRT2, [("s", "param", (1, 0)), ("x", "value", (0, 1))])
    with pytest.raises(NotInBaseRing):
        establish_nc_v(initial_state(ctx), [ctx.parse("s + x")], ctx)


def test_iteration_cap(monkeypatch):
    ctx = sqrt2_base()
    with pytest.raises(IterationCapExceeded) as info:
        establish_nc_v(initial_state(ctx), [ctx.parse("s^8 + t^7")], ctx, cap=1)
    assert info.value.residual
    monkeypatch.setenv(CAP_ENV, "3")
    assert default_cap() == 3


def test_tampered_certificate_rejected():
    ctx = sqrt2_base()
    st, certs = establish_nc_v(initial_state(ctx), [ctx.parse("s^2 + t^3")], ctx)
    cert = certs[0]
    assert verify_certificate(cert, st, ctx) == []
    assert verify_certificate(replace(cert, exps=tuple(e + 1 for e in cert.exps)), st, ctx)
    assert verify_certificate(replace(cert, unit=cert.unit * 2), st, ctx)
    assert verify_certificate(replace(cert, exps=(-1,) + cert.exps[1:]), st, ctx)


@pytest.mark.parametrize(
    "make_ctx,ws,wt",
    [(sqrt2_base, mpmath.mpf(1), mpmath.sqrt(2)), (rational_base, Fraction(2), Fraction(3))],
    ids=["sqrt2", "2-3"],
)
def test_binomials_match_continued_fraction(make_ctx, ws, wt):
    ctx = make_ctx()
    for a in range(1, 9):
        for b in range(1, 9):
            st, certs = establish_nc_v(initial_state(ctx), [ctx.parse(f"s^{a} + t^{b}")], ctx)
            assert st.transforms() == binomial_transform_oracle(a, b, ws, wt), (a, b)
            assert verify_certificate(certs[0], st, ctx) == []
            for p in st.params:
                assert ctx.order.sign(p.value.coords) > 0
