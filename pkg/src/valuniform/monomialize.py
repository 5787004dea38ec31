"""Monomialization of a finite set of elements of the valuation ring.

Pipeline for a finite set Z (all elements of non-negative value):

1. :func:`clear_denominator` divides numerator and denominator of each element
   by the least-value ``(t, x)``-monomial of its denominator;
2. :func:`build_H` collects the exponent vectors whose monomials must become
   monomials in the new coordinates;
3. a positive basis of the value group adapted to those values is computed by
   :func:`~valuniform.ordered_group.perron_basis`, and the new coordinates
   ``xp_j`` are the ``(t, x)``-Laurent monomials with those values;
4. every element is rewritten as ``unit * prod xp_j^{a_j}`` with ``a_j >= 0``.

:func:`chart_report` re-verifies a chart from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContextInvalid, HSetInconsistent, NegativeValue, ZeroElement
from .funcfield import Context, Polynomial, RationalFunction, VarDecl
from .ordered_group import (
    DEFAULT_STEP_CAP,
    GroupElement,
    express_in_basis,
    int_det,
    int_inverse,
    perron_basis,
    vec_mat,
)
from .valuation import (
    INF,
    check_setting,
    minimal_tx,
    residue,
    value_monomial,
    value_ratfun,
    value_sign,
)


@dataclass(frozen=True)
class ThirdFraction:
    zeta: RationalFunction
    num: Polynomial  # Laurent
    den: Polynomial  # Laurent
    pivot: tuple[int, ...]  # tx-exponent removed from numerator and denominator


@dataclass(frozen=True)
class HSet:
    elements: tuple[tuple[int, ...], ...]
    h_min: tuple[tuple[int, ...], ...]  # aligned with the list of third fractions


@dataclass(frozen=True)
class NewVar:
    name: str
    definition: tuple[int, ...]  # exponents over the tx variables of the source context
    value: GroupElement


@dataclass(frozen=True)
class Factorization:
    zeta: RationalFunction
    unit: RationalFunction  # over the chart context
    exps: tuple[int, ...]  # over the new variables


@dataclass(frozen=True)
class Chart:
    source: Context
    context: Context
    new_vars: tuple[NewVar, ...]
    regular_params: tuple[str, ...]
    factorizations: tuple[Factorization, ...]
    dimension: int
    extra_params: tuple[str, ...] = ()

    @property
    def definitions(self) -> list[list[int]]:
        return [list(v.definition) for v in self.new_vars]

    def images(self) -> list[tuple[int, ...]]:
        """Chart variable -> exponent vector in the source context."""
        src = self.source
        out = [src.embed_tx(v.definition) for v in self.new_vars]
        for i in self.context.residues:
            e = [0] * src.nvars
            e[src.index[self.context.names[i]]] = 1
            out.append(tuple(e))
        return out

    def expand(self, f: RationalFunction) -> RationalFunction:
        """Substitute the definitions of the new variables into ``f``."""
        return f.substitute(self.source, self.images())

    def rewrite(self, f: RationalFunction) -> RationalFunction:
        """Express a source-context element in the chart variables."""
        inv = int_inverse(self.definitions)
        n = len(self.new_vars)
        chart = self.context
        images = [None] * self.source.nvars
        for k, i in enumerate(self.source.tx):
            images[i] = tuple(inv[k]) + (0,) * (chart.nvars - n)
        for i in self.source.residues:
            e = [0] * chart.nvars
            e[chart.index[self.source.names[i]]] = 1
            images[i] = tuple(e)
        return f.substitute(chart, images)

    def monomial(self, exps: Sequence[int]) -> RationalFunction:
        return RationalFunction.monomial(self.context, tuple(exps) + (0,) * (self.context.nvars - len(exps)))

    def find(self, zeta: RationalFunction) -> Factorization | None:
        return next((fz for fz in self.factorizations if fz.zeta == zeta), None)


@dataclass
class StructReport:
    rho: int
    tau: int
    delta: int
    dimension: int
    abhyankar_ok: bool
    basis_ok: bool
    factorization_ok: bool
    unit_ok: bool
    dimension_ok: bool
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.abhyankar_ok and self.basis_ok and self.factorization_ok and self.unit_ok and self.dimension_ok

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "rho": self.rho,
            "tau": self.tau,
            "delta": self.delta,
            "dimension": self.dimension,
            "abhyankar_ok": self.abhyankar_ok,
            "basis_ok": self.basis_ok,
            "factorization_ok": self.factorization_ok,
            "unit_ok": self.unit_ok,
            "dimension_ok": self.dimension_ok,
            "details": list(self.details),
        }


def _tx_value(tx: Sequence[int], ctx: Context) -> GroupElement:
    return value_monomial(ctx.embed_tx(tx), ctx)


def clear_denominator(zeta: RationalFunction, ctx: Context | None = None) -> ThirdFraction:
    ctx = ctx or zeta.ctx
    v = value_ratfun(zeta, ctx)
    if v is INF:
        raise ZeroElement("0 is not a unit times a monomial")
    if value_sign(v, ctx) < 0:
        raise NegativeValue(f"element {zeta} has negative value {v.coords}")
    _, attained = minimal_tx(zeta.den, ctx)
    pivot = attained[0]
    shift = tuple(-x for x in ctx.embed_tx(pivot))
    num, den = zeta.num.shift(shift), zeta.den.shift(shift)
    third = ThirdFraction(zeta, num, den, pivot)
    for part, what in ((den, "denominator"), (num, "numerator")):
        for e in part.terms:
            if value_sign(value_monomial(e, ctx), ctx) < 0:
                raise HSetInconsistent(f"{what} monomial of negative value after clearing {zeta}")
    return third


def build_H(thirds: Sequence[ThirdFraction], ctx: Context) -> HSet:
    n = len(ctx.tx)
    elements = {tuple(int(i == j) for j in range(n)) for i in range(n)}
    h_min = []
    for th in thirds:
        _, attained = minimal_tx(th.num, ctx)
        if len(attained) != 1:
            raise ContextInvalid("least numerator monomial is not unique; values are not independent")
        h = attained[0]
        h_min.append(h)
        elements.add(h)
        for e in th.den.terms:
            elements.add(ctx.tx_part(e))
        for e in th.num.terms:
            elements.add(tuple(a - b for a, b in zip(ctx.tx_part(e), h)))
    for h in elements:
        if value_sign(_tx_value(h, ctx), ctx) < 0:
            raise HSetInconsistent(f"H contains an element of negative value: {h}")
    return HSet(tuple(sorted(elements, key=lambda t: (sum(t), t))), tuple(h_min))


def _chart_context(ctx: Context, values: Sequence[GroupElement], prefix: str = "xp") -> Context:
    taken = set(ctx.names)
    names = []
    for j in range(len(values)):
        name = f"{prefix}{j + 1}"
        while name in taken:
            name = "_" + name
        names.append(name)
    decls = [VarDecl(nm, "value", v) for nm, v in zip(names, values)]
    decls += [ctx.vars[i] for i in ctx.residues]
    return Context(ctx.field, tuple(decls), ctx.order)


def monomialize_set(
    Z: Sequence[RationalFunction],
    ctx: Context | None = None,
    extra_params: Sequence[str] = (),
    step_cap: int = DEFAULT_STEP_CAP,
) -> Chart:
    """Regular chart in which every element of ``Z`` is a unit times a monomial.

    ``extra_params`` names regular parameters of the base ring that occur in
    no element (they enlarge the dimension but not the lattice).
    """
    if ctx is None:
        ctx = Z[0].ctx
    setting = check_setting(ctx)
    if not setting.ok:
        raise ContextInvalid("context fails: " + ", ".join(setting.failed()))
    thirds = [clear_denominator(z, ctx) for z in Z]
    H = build_H(thirds, ctx)
    V = [list(r) for r in ctx.value_matrix]
    values = [vec_mat(h, V) for h in H.elements]
    pr = perron_basis(values, ctx.order, step_cap=step_cap)
    reps = dict(zip(H.elements, pr.reps))
    gammas = [GroupElement(g) for g in pr.basis]
    definitions = [express_in_basis(g, V) for g in gammas]
    chart_ctx = _chart_context(ctx, gammas)
    n = len(gammas)
    res_idx = ctx.residues

    def chart_exps(beta, e):
        return tuple(beta) + tuple(e[i] for i in res_idx)

    facts = []
    for th, h in zip(thirds, H.h_min):
        num = {}
        for e, c in th.num.terms.items():
            d = tuple(a - b for a, b in zip(ctx.tx_part(e), h))
            num[chart_exps(reps[d], e)] = c
        den = {}
        for e, c in th.den.terms.items():
            den[chart_exps(reps[ctx.tx_part(e)], e)] = c
        unit = RationalFunction(Polynomial(chart_ctx, num), Polynomial(chart_ctx, den))
        facts.append(Factorization(th.zeta, unit, tuple(reps[h])))
    new_vars = tuple(
        NewVar(chart_ctx.names[j], tuple(definitions[j]), gammas[j]) for j in range(n)
    )
    return Chart(
        source=ctx,
        context=chart_ctx,
        new_vars=new_vars,
        regular_params=tuple(v.name for v in new_vars) + tuple(extra_params),
        factorizations=tuple(facts),
        dimension=n + len(extra_params),
        extra_params=tuple(extra_params),
    )


def factorization_holds(chart: Chart, fz: Factorization) -> bool:
    """Exact check of ``zeta == unit * prod xp^exps`` after substitution."""
    lhs = chart.expand(fz.unit * chart.monomial(fz.exps))
    return lhs == fz.zeta


def chart_report(chart: Chart, ctx: Context | None = None) -> StructReport:
    """Recompute every chart invariant; failures become report entries."""
    ctx = ctx or chart.source
    details = []
    setting = check_setting(ctx)
    chart_setting = check_setting(chart.context)
    abhyankar_ok = setting.ok and chart_setting.ok
    if not setting.ok:
        details.append("source context: " + ", ".join(setting.failed()))
    if not chart_setting.ok:
        details.append("chart context: " + ", ".join(chart_setting.failed()))

    n = len(ctx.tx)
    V = [list(r) for r in ctx.value_matrix]
    D = chart.definitions
    basis_ok = len(D) == n and all(len(row) == n for row in D)
    if basis_ok:
        det = int_det(D)
        if abs(det) != 1:
            basis_ok = False
            details.append(f"definition matrix has det {det}")
        for nv, row in zip(chart.new_vars, D):
            val = GroupElement(vec_mat(row, V))
            if val != nv.value or chart.context.vars[chart.context.index[nv.name]].value != val:
                basis_ok = False
                details.append(f"{nv.name}: recorded value disagrees with its definition")
            if ctx.order.sign(val.coords) <= 0:
                basis_ok = False
                details.append(f"{nv.name} has non-positive value")
    else:
        details.append("definition matrix is not square over the (t,x)-lattice")

    factorization_ok = True
    unit_ok = True
    for k, fz in enumerate(chart.factorizations):
        if len(fz.exps) != len(chart.new_vars) or any(e < 0 for e in fz.exps):
            factorization_ok = False
            details.append(f"element {k}: exponent vector {fz.exps} is not non-negative")
        elif not factorization_holds(chart, fz):
            factorization_ok = False
            details.append(f"element {k}: unit * monomial does not reproduce {fz.zeta}")
        try:
            v = value_ratfun(fz.unit, chart.context)
            if v is INF or not v.is_zero():
                unit_ok = False
                details.append(f"element {k}: unit has value {v}")
            elif residue(fz.unit, chart.context).is_zero():
                unit_ok = False
                details.append(f"element {k}: unit has zero residue")
        except ContextInvalid as exc:
            unit_ok = False
            details.append(f"element {k}: {exc}")

    expected_dim = len(chart.new_vars) + len(chart.extra_params)
    dimension_ok = chart.dimension == expected_dim == len(chart.regular_params)
    if not dimension_ok:
        details.append(f"dimension {chart.dimension} != {expected_dim}")
    return StructReport(
        rho=setting.rho,
        tau=setting.tau,
        delta=setting.delta,
        dimension=chart.dimension,
        abhyankar_ok=abhyankar_ok,
        basis_ok=basis_ok,
        factorization_ok=factorization_ok,
        unit_ok=unit_ok,
        dimension_ok=dimension_ok,
        details=details,
    )
