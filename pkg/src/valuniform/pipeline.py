"""End-to-end uniformization: base-ring transforms followed by monomialization.

The coefficients of every element, viewed as polynomials in the remaining
variables over ``k[params]``, are first made unit times monomial by quadratic
transforms of the base ring.  The elements are then rewritten in the
transformed params and monomialized.  Params whose quotient reached value 0
become residue-class variables of the rewritten context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ContextInvalid
from .funcfield import Context, Polynomial, RationalFunction
from .monomialize import Chart, StructReport, chart_report, monomialize_set
from .transforms import FactorizationCert, LocalRingState, establish_nc_v, initial_state, original_in_current
from .valuation import check_setting


@dataclass(frozen=True)
class Uniformization:
    source: Context
    state: LocalRingState
    certificates: tuple[FactorizationCert, ...]
    rewritten_context: Context
    rewritten: tuple[RationalFunction, ...]
    chart: Chart
    report: StructReport
    composition_ok: bool

    @property
    def ok(self) -> bool:
        return self.report.ok and self.composition_ok

    @property
    def dimension(self) -> int:
        return self.chart.dimension


def base_coefficients(zeta: RationalFunction, params: Sequence[str]) -> list[RationalFunction]:
    """Coefficients of numerator and denominator as polynomials over ``k[params]``.

    Monomial coefficients are dropped: they are unit times monomial already.
    """
    ctx = zeta.ctx
    pidx = [ctx.index[n] for n in params]
    out = []
    for poly in (zeta.num, zeta.den):
        groups: dict[tuple, dict] = {}
        for e, c in poly.terms.items():
            rest = tuple(0 if i in pidx else x for i, x in enumerate(e))
            key = tuple(e[i] for i in pidx)
            groups.setdefault(rest, {})
            exps = [0] * ctx.nvars
            for i, x in zip(pidx, key):
                exps[i] = x
            groups[rest][tuple(exps)] = c
        for terms in groups.values():
            if len(terms) < 2:
                continue
            p = Polynomial(ctx, terms)
            out.append(RationalFunction(p.shift(tuple(-x for x in p.min_exponents()))))
    return out


def _rewritten_context(ctx: Context, state: LocalRingState) -> Context:
    base = state.context(ctx)
    others = tuple(v for v in ctx.vars if v.name not in state.original)
    return Context(ctx.field, base.vars + others, ctx.order)


def _images_to_new(ctx: Context, new: Context, state: LocalRingState) -> list[tuple[int, ...]]:
    """Exponent images of the source variables in the rewritten context."""
    E = original_in_current(state)
    pos = {n: k for k, n in enumerate(state.original)}
    ndefs = len(state.all_defs)
    images = []
    for name in ctx.names:
        e = [0] * new.nvars
        if name in pos:
            e[:ndefs] = E[pos[name]]
        else:
            e[new.index[name]] = 1
        images.append(tuple(e))
    return images


def _images_to_source(ctx: Context, new: Context, state: LocalRingState) -> list[tuple[int, ...]]:
    pos = {n: ctx.index[n] for n in state.original}
    images = []
    for p in state.all_defs:
        e = [0] * ctx.nvars
        for n, x in zip(state.original, p.definition):
            e[pos[n]] = x
        images.append(tuple(e))
    for name in new.names[len(state.all_defs):]:
        e = [0] * ctx.nvars
        e[ctx.index[name]] = 1
        images.append(tuple(e))
    return images


def uniformize(
    Z: Sequence[RationalFunction],
    ctx: Context,
    base_params: Sequence[str] | None = None,
    cap: int | None = None,
) -> Uniformization:
    """Transform the base ring, rewrite ``Z`` and monomialize it."""
    state = initial_state(ctx, base_params)
    coeffs = [c for z in Z for c in base_coefficients(z, state.original)]
    state, certs = establish_nc_v(state, coeffs, ctx, cap=cap)
    new = _rewritten_context(ctx, state)
    setting = check_setting(new)
    if not setting.ok:
        raise ContextInvalid("rewritten context fails: " + ", ".join(setting.failed()))
    fwd = _images_to_new(ctx, new, state)
    rewritten = tuple(z.substitute(new, fwd) for z in Z)
    chart = monomialize_set(rewritten, new)
    report = chart_report(chart, new)
    back = _images_to_source(ctx, new, state)
    composition_ok = all(
        chart.expand(fz.unit * chart.monomial(fz.exps)).substitute(ctx, back) == z
        for fz, z in zip(chart.factorizations, Z)
    )
    return Uniformization(ctx, state, tuple(certs), new, rewritten, chart, report, composition_ok)
