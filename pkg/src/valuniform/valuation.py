"""The monomial (Gauss) valuation on a context and its residue map.

The value of a polynomial is the least value of its monomials; a monomial's
value is the sum of its exponents times the variable values, residue-class
variables contributing nothing.  When the param and value variables have
independent values (see :func:`check_setting`) the least value is attained by
a single ``(t, x)``-exponent, which is what makes the residue map purely
combinatorial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ContextInvalid, NonzeroValue
from .funcfield import Context, Polynomial, RationalFunction
from .ordered_group import GroupElement, int_det


class _Infinity:
    """Value of zero; larger than every group element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def compare_values(a, b, ctx_or_order) -> int:
    """Three-way comparison of two values (group elements or ``INF``)."""
    order = getattr(ctx_or_order, "order", ctx_or_order)
    if a is INF:
        return 0 if b is INF else 1
    if b is INF:
        return -1
    return order.compare(a.coords, b.coords)


def value_sign(v, ctx) -> int:
    if v is INF:
        return 1
    return ctx.order.sign(v.coords)


def add_values(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def value_monomial(exps: Sequence[int], ctx: Context) -> GroupElement:
    r = ctx.order.rank
    out = [0] * r
    for i in ctx.tx:
        e = exps[i]
        if e:
            vc = ctx.vars[i].value.coords
            for j in range(r):
                out[j] += e * vc[j]
    return GroupElement(tuple(out))


def group_by_tx(f: Polynomial, ctx: Context) -> dict[tuple, list[tuple[tuple, object]]]:
    """Terms of ``f`` keyed by their ``(t, x)``-exponent."""
    groups: dict = {}
    for e, c in f.terms.items():
        groups.setdefault(ctx.tx_part(e), []).append((e, c))
    return groups


def minimal_tx(f: Polynomial, ctx: Context) -> tuple[GroupElement, list[tuple]]:
    """Least monomial value of non-zero ``f`` and every tx-exponent attaining it."""
    best = None
    attained: list = []
    for tx in group_by_tx(f, ctx):
        v = value_monomial(ctx.embed_tx(tx), ctx)
        if best is None:
            best, attained = v, [tx]
            continue
        c = ctx.order.compare(v.coords, best.coords)
        if c < 0:
            best, attained = v, [tx]
        elif c == 0:
            attained.append(tx)
    return best, sorted(attained, key=lambda t: (sum(t), t))


def value_poly(f: Polynomial, ctx: Context | None = None):
    ctx = ctx or f.ctx
    if f.is_zero():
        return INF
    return minimal_tx(f, ctx)[0]


def value_ratfun(f: RationalFunction, ctx: Context | None = None):
    ctx = ctx or f.ctx
    if f.is_zero():
        return INF
    return value_poly(f.num, ctx) - value_poly(f.den, ctx)


def _leading_part(f: Polynomial, ctx: Context) -> Polynomial:
    _, attained = minimal_tx(f, ctx)
    if len(attained) > 1:
        raise ContextInvalid("least value attained by several (t,x)-monomials; values are not independent")
    tx = attained[0]
    out = {}
    for e, c in f.terms.items():
        if ctx.tx_part(e) == tx:
            e = list(e)
            for i in ctx.tx:
                e[i] = 0
            out[tuple(e)] = c
    return Polynomial(ctx, out)


def residue(f: RationalFunction, ctx: Context | None = None) -> RationalFunction:
    """Image of a value-0 element in the residue field (a function of the residue variables)."""
    ctx = ctx or f.ctx
    v = value_ratfun(f, ctx)
    if v is INF or not v.is_zero():
        raise NonzeroValue(f"residue needs value 0, got {v}")
    return RationalFunction(_leading_part(f.num, ctx), _leading_part(f.den, ctx))


def reduce_element(f: RationalFunction, ctx: Context | None = None) -> RationalFunction:
    """The place applied to ``f``: residue if v(f)=0, zero if v(f)>0."""
    ctx = ctx or f.ctx
    v = value_ratfun(f, ctx)
    s = value_sign(v, ctx)
    if s > 0:
        return RationalFunction.const(ctx, 0)
    if s < 0:
        raise NonzeroValue(f"element of negative value {v} has no residue")
    return residue(f, ctx)


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, len(a)):
            if a[r][col]:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


@dataclass
class SettingReport:
    ok: bool
    clauses: dict[str, tuple[bool, str]] = field(default_factory=dict)
    rho: int = 0
    tau: int = 0
    delta: int = 0
    trdeg: int = 0
    rational_rank: int = 0

    def failed(self) -> list[str]:
        return [k for k, (good, _) in self.clauses.items() if not good]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "rho": self.rho,
            "tau": self.tau,
            "delta": self.delta,
            "trdeg": self.trdeg,
            "rational_rank": self.rational_rank,
            "clauses": {k: {"pass": good, "detail": msg} for k, (good, msg) in self.clauses.items()},
        }


def check_setting(ctx: Context) -> SettingReport:
    """Verify that ``ctx`` describes a valued field the engine can work with.

    Never raises; every violated requirement is a failed clause of the report.
    """
    rep = SettingReport(ok=True)
    rep.delta = len(ctx.of_kind("param"))
    rep.rho = len(ctx.of_kind("value"))
    rep.tau = len(ctx.residues)
    rep.trdeg = ctx.nvars
    V = [list(r) for r in ctx.value_matrix]
    rep.rational_rank = rational_rank(V) if V else 0
    r = ctx.order.rank

    def clause(name, good, detail):
        rep.clauses[name] = (bool(good), detail)

    clause("order_total", ctx.order.is_total(), "forms have full rank over Q(sqrt d)")
    square = len(V) == r
    clause("value_matrix_square", square, f"{len(V)} param/value variables for an order of rank {r}")
    if square:
        det = int_det(V)
        clause("value_matrix_unimodular", abs(det) == 1, f"det = {det}")
    else:
        clause(
            "value_matrix_unimodular",
            False,
            f"rank deficiency: {len(V)} values of rational rank {rep.rational_rank} in Z^{r}",
        )
    bad = [ctx.vars[i].name for i in ctx.of_kind("param") if ctx.order.sign(ctx.vars[i].value.coords) <= 0]
    clause("params_positive", not bad, "non-positive params: " + ", ".join(bad) if bad else "all params > 0")
    abh = rep.trdeg == rep.rational_rank + rep.tau
    clause(
        "abhyankar_equality",
        abh,
        f"trdeg {rep.trdeg} {'=' if abh else '!='} rational rank {rep.rational_rank} + residue trdeg {rep.tau}",
    )
    rep.ok = all(good for good, _ in rep.clauses.values())
    return rep
