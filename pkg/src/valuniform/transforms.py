"""Monoidal and quadratic transforms of a regular local base ring of dim <= 2.

The base ring is the localization of ``k[t_1, ..., t_d]`` at the origin, with a
monomial valuation given by the values of the ``t_i``.  A quadratic transform
along the valuation replaces every param ``y`` other than the one of least
value ``x`` by ``y/x``.  Iterating, any finite set of polynomials in the params
eventually factors as ``unit * monomial`` in the current params.

If two params end up with equal value (commensurable weights), ``y/x`` has
value 0: it leaves the maximal ideal and becomes a residue-class variable, and
the ring drops to dimension 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import (
    DimensionZero,
    EmptyCenter,
    IterationCapExceeded,
    NotInBaseRing,
    RationalDependenceUnresolved,
    ZeroElement,
)
from .funcfield import Context, RationalFunction, VarDecl
from .ordered_group import GroupElement, int_det, int_inverse
from .valuation import INF, residue, value_ratfun

DEFAULT_TRANSFORM_CAP = 512
CAP_ENV = "VALUNIFORM_ITER_CAP"


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_TRANSFORM_CAP


@dataclass(frozen=True)
class ParamDef:
    name: str
    definition: tuple[int, ...]  # Laurent exponents over the original params
    value: GroupElement


@dataclass(frozen=True)
class LocalRingState:
    original: tuple[str, ...]
    params: tuple[ParamDef, ...]
    reclassified: tuple[ParamDef, ...] = ()
    history: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.params)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    @property
    def all_defs(self) -> tuple[ParamDef, ...]:
        return self.params + self.reclassified

    def definition_matrix(self) -> list[list[int]]:
        return [list(p.definition) for p in self.all_defs]

    def context(self, ctx: Context) -> Context:
        """Context whose variables are the current params (and reclassified ones)."""
        zero = GroupElement.zero(ctx.order.rank)
        decls = [VarDecl(p.name, "param", p.value) for p in self.params]
        decls += [VarDecl(p.name, "residue", zero) for p in self.reclassified]
        return Context(ctx.field, tuple(decls), ctx.order)

    def transforms(self) -> int:
        return sum(1 for h in self.history if h.startswith("quadratic"))


@dataclass(frozen=True)
class FactorizationCert:
    element: RationalFunction  # in the original context
    unit: RationalFunction  # in the state context
    exps: tuple[int, ...]  # over the current params


def initial_state(ctx: Context, names: Sequence[str] | None = None) -> LocalRingState:
    if names is None:
        names = [ctx.names[i] for i in ctx.of_kind("param")]
    names = tuple(names)
    if len(names) > 2:
        raise ValueError("base rings of dimension > 2 are not supported")
    params = []
    for k, n in enumerate(names):
        if n not in ctx.index or ctx.vars[ctx.index[n]].kind != "param":
            raise ValueError(f"{n} is not a param-class variable")
        params.append(ParamDef(n, tuple(int(k == j) for j in range(len(names))), ctx.vars[ctx.index[n]].value))
    return LocalRingState(names, tuple(params))


def _check_invariants(state: LocalRingState, ctx: Context) -> None:
    for p in state.params:
        assert ctx.order.sign(p.value.coords) > 0, f"param {p.name} left the valuation ideal"
    D = state.definition_matrix()
    assert not D or abs(int_det(D)) == 1, "definition matrix is not unimodular"


def _fresh_name(base: str, taken: set[str]) -> str:
    stem = base.split("_")[0]
    k = 1
    while f"{stem}_{k}" in taken:
        k += 1
    return f"{stem}_{k}"


def monoidal_transform(
    state: LocalRingState,
    center: Sequence[str],
    ctx: Context,
    allow_reclassify: bool = True,
) -> LocalRingState:
    """Transform along the valuation with center generated by the named params."""
    if state.dim == 0:
        raise DimensionZero("a field has no monoidal transforms")
    center = list(dict.fromkeys(center))
    if not center:
        raise EmptyCenter("empty center")
    byname = {p.name: p for p in state.params}
    for c in center:
        if c not in byname:
            raise ValueError(f"{c} is not a current param")
    if len(center) == 1:
        return replace(state, history=state.history + (f"principal({center[0]})",))
    # least value, ties broken by name
    x = byname[min(center, key=lambda n: n)]
    for n in sorted(center):
        if ctx.order.compare(byname[n].value.coords, x.value.coords) < 0:
            x = byname[n]
    taken = {p.name for p in state.all_defs} | set(ctx.names)
    params, reclassified = [], list(state.reclassified)
    for p in state.params:
        if p.name not in center or p.name == x.name:
            params.append(p)
            continue
        name = _fresh_name(p.name, taken)
        taken.add(name)
        new = ParamDef(
            name,
            tuple(a - b for a, b in zip(p.definition, x.definition)),
            p.value - x.value,
        )
        if new.value.is_zero():
            if not allow_reclassify:
                raise RationalDependenceUnresolved(
                    f"{p.name}/{x.name} has value 0; the valuation is discrete on the base"
                )
            reclassified.append(new)
        else:
            params.append(new)
    kind = "quadratic" if set(center) == set(state.param_names) else "monoidal"
    entry = f"{kind}({','.join(sorted(center))}; divide by {x.name})"
    out = LocalRingState(state.original, tuple(params), tuple(reclassified), state.history + (entry,))
    _check_invariants(out, ctx)
    return out


def to_state_coords(f: RationalFunction, state: LocalRingState, ctx: Context) -> RationalFunction:
    """Rewrite an element of ``k(original params)`` in the current params."""
    sctx = state.context(ctx)
    E = int_inverse(state.definition_matrix()) if state.all_defs else []
    pos = {n: k for k, n in enumerate(state.original)}
    images = []
    for name in ctx.names:
        if name in pos:
            images.append(tuple(E[pos[name]]))
        else:
            images.append(None)
    for part in (f.num, f.den):
        for e in part.terms:
            for name, x in zip(ctx.names, e):
                if x and name not in pos:
                    raise NotInBaseRing(f"{f} involves {name}, which is not a base param")
    images = [img if img is not None else (0,) * sctx.nvars for img in images]
    return f.substitute(sctx, images)


def try_factor(g: RationalFunction, dim: int) -> tuple[RationalFunction, tuple[int, ...]] | None:
    """``unit, exps`` with ``g = unit * params^exps`` if a single least exponent exists."""
    parts = []
    for poly in (g.num, g.den):
        terms = poly.terms
        emin = tuple(min(e[k] for e in terms) for k in range(dim))
        if not any(e[:dim] == emin for e in terms):
            return None
        parts.append((poly.shift(tuple(-x for x in emin) + (0,) * (g.ctx.nvars - dim)), emin))
    (num, en), (den, ed) = parts
    exps = tuple(a - b for a, b in zip(en, ed))
    if any(x < 0 for x in exps):
        return None
    return RationalFunction(num, den), exps


def establish_nc_v(
    state: LocalRingState,
    coeffs: Sequence[RationalFunction],
    ctx: Context,
    cap: int | None = None,
    allow_reclassify: bool = True,
) -> tuple[LocalRingState, list[FactorizationCert]]:
    """Quadratic transforms until every coefficient is ``unit * monomial``."""
    cap = default_cap() if cap is None else cap
    for c in coeffs:
        if c.is_zero():
            raise ZeroElement("a zero coefficient has no monomial factorization")
        if not c.den.is_constant():
            raise NotInBaseRing(f"{c} is not a polynomial in the params")
    steps = 0
    while True:
        current = [to_state_coords(c, state, ctx) for c in coeffs]
        factored = [try_factor(g, state.dim) for g in current]
        pending = [g for g, fz in zip(current, factored) if fz is None]
        if not pending:
            certs = [FactorizationCert(c, unit, exps) for c, (unit, exps) in zip(coeffs, factored)]
            return state, certs
        if state.dim < 2:
            # unreachable: in dimension <= 1 every non-zero polynomial factors
            raise AssertionError("unfactored element in dimension <= 1")
        if steps >= cap:
            raise IterationCapExceeded(
                f"no normal crossings after {cap} transforms",
                residual=[str(g) for g in pending],
            )
        state = monoidal_transform(state, state.param_names, ctx, allow_reclassify=allow_reclassify)
        steps += 1


def verify_certificate(cert: FactorizationCert, state: LocalRingState, ctx: Context) -> list[str]:
    """Problems with a certificate, recomputed from scratch (empty list = valid)."""
    problems = []
    sctx = state.context(ctx)
    if len(cert.exps) != state.dim or any(e < 0 for e in cert.exps):
        problems.append(f"exponents {cert.exps} are not non-negative over {state.dim} params")
        return problems
    pos = [ctx.index[n] for n in state.original]
    images = []
    for p in state.all_defs:
        e = [0] * ctx.nvars
        for k, x in zip(pos, p.definition):
            e[k] = x
        images.append(tuple(e))
    mono = [0] * ctx.nvars
    for p, x in zip(state.params, cert.exps):
        for k, y in zip(pos, p.definition):
            mono[k] += x * y
    lhs = cert.unit.substitute(ctx, images) * RationalFunction.monomial(ctx, mono)
    if not lhs == cert.element:
        problems.append(f"unit * monomial does not reproduce {cert.element}")
    v = value_ratfun(cert.unit, sctx)
    if v is INF or not v.is_zero():
        problems.append(f"unit has value {v}")
    elif residue(cert.unit, sctx).is_zero():
        problems.append("unit has zero residue")
    return problems


def param_values_matrix(state: LocalRingState) -> list[tuple[int, ...]]:
    return [p.value.coords for p in state.params]


def original_in_current(state: LocalRingState) -> list[list[int]]:
    """Row i: exponents of original param i over (params + reclassified)."""
    return int_inverse(state.definition_matrix())
