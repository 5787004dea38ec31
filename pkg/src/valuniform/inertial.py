"""Ascent of a chart through a standard-etale extension ``E(eta) | E``.

``E`` is the rational function field of a context and ``eta`` a root of a monic
polynomial ``f`` with integral coefficients.  The place on ``E(eta)`` is the one
sending ``eta`` to a declared simple root ``a`` of the reduced polynomial, so
``eta`` lies in the henselization of ``E``.  Nothing henselian is constructed:
the data are verified, and values of elements of ``E(eta)`` are computed from
Newton approximations of ``eta`` inside ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    InertialCheckFailed,
    InvalidPresentation,
    MissingConstant,
    NegativeValue,
    NonUnitDenominator,
    NonzeroValue,
    ParseError,
    ZeroElement,
)
from .funcfield import Context, Polynomial, RationalFunction, VarDecl
from .monomialize import Chart
from .ordered_group import GroupElement, express_in_basis
from .transforms import try_factor
from .valuation import INF, compare_values, reduce_element, value_ratfun, value_sign

NEWTON_STEPS = 8

# ---------------------------------------------------------------------------
# univariate polynomials over a field of rational functions (coefficient lists,
# constant term first)
# ---------------------------------------------------------------------------


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _zero(ctx):
    return RationalFunction.const(ctx, 0)


def upoly_add(p, q, ctx):
    n = max(len(p), len(q))
    z = _zero(ctx)
    return _trim([(p[i] if i < len(p) else z) + (q[i] if i < len(q) else z) for i in range(n)])


def upoly_mul(p, q, ctx):
    if not p or not q:
        return []
    out = [_zero(ctx) for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def upoly_deriv(p, ctx):
    return _trim([p[i] * i for i in range(1, len(p))])


def upoly_eval(p, x, ctx):
    acc = _zero(ctx)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_divmod(p, q, ctx):
    """Division with remainder; ``q`` must have an invertible leading coefficient."""
    q = _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim(p)
    quo = [_zero(ctx) for _ in range(max(len(r) - len(q) + 1, 0))]
    lead_inv = q[-1].inv()
    while len(r) >= len(q):
        k = len(r) - len(q)
        c = r[-1] * lead_inv
        quo[k] = c
        for i, b in enumerate(q):
            r[i + k] = r[i + k] - c * b
        r = _trim(r[:-1]) if r[-1].is_zero() else _trim(r)
    return _trim(quo), r


def upoly_gcd(p, q, ctx):
    p, q = _trim(p), _trim(q)
    while q:
        _, r = upoly_divmod(p, q, ctx)
        p, q = q, r
    return p


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtalePresentation:
    generator: str
    f: tuple[RationalFunction, ...]
    g: tuple[RationalFunction, ...]
    h: tuple[RationalFunction, ...]
    s: int
    residue: RationalFunction

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def ctx(self) -> Context:
        return self.f[0].ctx


@dataclass(frozen=True)
class ExtElement:
    coeffs: tuple[RationalFunction, ...]

    def __eq__(self, other):
        if not isinstance(other, ExtElement) or len(self.coeffs) != len(other.coeffs):
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def scale(self, c: RationalFunction) -> "ExtElement":
        return ExtElement(tuple(x * c for x in self.coeffs))

    def format(self, name: str = "eta") -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            s = str(c)
            if i == 0:
                parts.append(s)
            else:
                mono = name if i == 1 else f"{name}^{i}"
                parts.append(mono if c == 1 else f"({s})*{mono}")
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Representation:
    """``xi = a(eta)/b(eta) * g(eta)^k``."""

    xi: ExtElement
    a: tuple[RationalFunction, ...]
    b: tuple[RationalFunction, ...]
    k: int = 0


@dataclass
class InertialReport:
    ok: bool
    clauses: dict[str, tuple[bool, str]] = field(default_factory=dict)

    def failed(self) -> list[str]:
        return [k for k, (good, _) in self.clauses.items() if not good]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "clauses": {k: {"pass": good, "detail": msg} for k, (good, msg) in self.clauses.items()},
        }


@dataclass(frozen=True)
class AscendedFactorization:
    zeta: ExtElement
    unit: ExtElement  # coefficients over the base chart's context
    exps: tuple[int, ...]


@dataclass(frozen=True)
class AscendedChart:
    base: Chart
    presentation: EtalePresentation
    chart_presentation: EtalePresentation
    factorizations: tuple[AscendedFactorization, ...]
    regular_params: tuple[str, ...]
    dimension: int


# ---------------------------------------------------------------------------
# element arithmetic
# ---------------------------------------------------------------------------


def make_ext(coeffs: Sequence[RationalFunction], pres: EtalePresentation) -> ExtElement:
    """Reduce a polynomial in ``eta`` modulo ``f`` and pad to ``deg f`` coefficients."""
    ctx = pres.ctx
    _, r = upoly_divmod(list(coeffs), list(pres.f), ctx)
    r = r + [_zero(ctx) for _ in range(pres.degree - len(r))]
    return ExtElement(tuple(r))


def ext_mul(a: ExtElement, b: ExtElement, pres: EtalePresentation) -> ExtElement:
    return make_ext(upoly_mul(_trim(a.coeffs), _trim(b.coeffs), pres.ctx), pres)


def ext_add(a: ExtElement, b: ExtElement, pres: EtalePresentation) -> ExtElement:
    return ExtElement(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def ext_pow(a: ExtElement, n: int, pres: EtalePresentation) -> ExtElement:
    out = make_ext([RationalFunction.const(pres.ctx, 1)], pres)
    for _ in range(n):
        out = ext_mul(out, a, pres)
    return out


def eta(pres: EtalePresentation) -> ExtElement:
    one = RationalFunction.const(pres.ctx, 1)
    return make_ext([_zero(pres.ctx), one], pres)


def parse_ext(text: str, pres: EtalePresentation) -> ExtElement:
    """Parse an expression in the base variables and the generator."""
    ctx = pres.ctx
    ext_ctx = Context(
        ctx.field, ctx.vars + (VarDecl(pres.generator, "residue", GroupElement.zero(ctx.order.rank)),), ctx.order
    )
    f = ext_ctx.parse(text)
    gi = ext_ctx.nvars - 1
    if any(e[gi] for e in f.den.terms):
        raise ParseError(f"the generator {pres.generator} may not occur in a denominator")
    den = Polynomial(ctx, {e[:gi]: c for e, c in f.den.terms.items()})
    coeffs: dict[int, dict] = {}
    for e, c in f.num.terms.items():
        coeffs.setdefault(e[gi], {})[e[:gi]] = c
    top = max(coeffs, default=0)
    lst = [RationalFunction(Polynomial(ctx, coeffs.get(i, {})), den) for i in range(top + 1)]
    return make_ext(lst, pres)


def _reduced(p, ctx):
    return _trim([reduce_element(c, ctx) for c in p])


def _residue_ok(pres: EtalePresentation, ctx: Context):
    fbar = _reduced(pres.f, ctx)
    a = pres.residue
    if not upoly_eval(fbar, a, ctx).is_zero():
        raise InvalidPresentation("declared residue is not a root of the reduced polynomial")
    if upoly_eval(upoly_deriv(fbar, ctx), a, ctx).is_zero():
        raise InvalidPresentation("declared residue is a multiple root of the reduced polynomial")


def ext_value(e: ExtElement, pres: EtalePresentation, ctx: Context | None = None):
    """Value of ``sum c_i eta^i`` at the place ``eta -> residue``.

    Newton iterates ``eta_k`` in ``E`` satisfy ``v(eta - eta_k) = v(f(eta_k))``;
    once ``v(e(eta_k))`` is below ``min v(c_i) + v(f(eta_k))`` it equals ``v(e(eta))``.
    """
    ctx = ctx or pres.ctx
    coeffs = _trim(e.coeffs)
    if not coeffs:
        return INF
    _residue_ok(pres, ctx)
    cmin = None
    for c in coeffs:
        if c.is_zero():
            continue
        v = value_ratfun(c, ctx)
        if cmin is None or compare_values(v, cmin, ctx) < 0:
            cmin = v
    f = list(pres.f)
    fprime = upoly_deriv(f, ctx)
    approx = pres.residue
    for _ in range(NEWTON_STEPS):
        fa = upoly_eval(f, approx, ctx)
        val = value_ratfun(upoly_eval(coeffs, approx, ctx), ctx)
        if fa.is_zero():
            if pres.degree > 1:
                raise InvalidPresentation("f has a root in the base field; it is not irreducible")
            return val
        prec = value_ratfun(fa, ctx)
        if val is not INF and compare_values(val, cmin + prec, ctx) < 0:
            return val
        approx = approx - fa / upoly_eval(fprime, approx, ctx)
    raise InvalidPresentation(f"value not determined after {NEWTON_STEPS} Newton steps")


def check_inertial(pres: EtalePresentation, ctx: Context | None = None) -> InertialReport:
    """Verify the presentation clause by clause; never raises."""
    ctx = ctx or pres.ctx
    rep = InertialReport(ok=True)

    def clause(name, fn):
        try:
            good, detail = fn()
        except Exception as exc:  # a failing computation is a failed clause
            good, detail = False, f"{type(exc).__name__}: {exc}"
        rep.clauses[name] = (bool(good), detail)

    f = list(pres.f)

    def monic():
        return pres.degree >= 1 and f[-1] == 1, f"degree {pres.degree}, leading coefficient {f[-1]}"

    def integral():
        bad = [
            str(c)
            for c in list(pres.f) + list(pres.g) + list(pres.h)
            if not c.is_zero() and value_sign(value_ratfun(c, ctx), ctx) < 0
        ]
        return not bad, "coefficients of f, g, h have value >= 0" if not bad else "negative value: " + ", ".join(bad)

    def residue_in_residue_field():
        bad = [
            ctx.names[i]
            for part in (pres.residue.num, pres.residue.den)
            for e in part.terms
            for i in ctx.tx
            if e[i]
        ]
        return not bad, "residue involves only residue variables" if not bad else f"involves {sorted(set(bad))}"

    def separable():
        fbar = _reduced(f, ctx)
        g = upoly_gcd(fbar, upoly_deriv(fbar, ctx), ctx)
        return len(g) == 1, f"gcd(fbar, fbar') has degree {len(g) - 1}"

    def root():
        fbar = _reduced(f, ctx)
        val = upoly_eval(fbar, pres.residue, ctx)
        return val.is_zero(), f"fbar(residue) = {val}"

    def simple():
        fbar = _reduced(f, ctx)
        val = upoly_eval(upoly_deriv(fbar, ctx), pres.residue, ctx)
        return not val.is_zero(), f"fbar'(residue) = {val}"

    def derivative_unit():
        v = ext_value(make_ext(upoly_deriv(f, ctx), pres), pres, ctx)
        return v is not INF and v.is_zero(), f"v(f'(eta)) = {v}"

    def g_unit():
        v = ext_value(make_ext(list(pres.g), pres), pres, ctx)
        return v is not INF and v.is_zero(), f"v(g(eta)) = {v}"

    def inverse_derivative():
        lhs = make_ext(upoly_mul(upoly_deriv(f, ctx), _trim(pres.h), ctx), pres)
        rhs = make_ext([RationalFunction.const(ctx, 1)], pres)
        gext = make_ext(list(pres.g), pres)
        for _ in range(pres.s):
            rhs = ext_mul(rhs, gext, pres)
        return lhs == rhs, "f'(eta) * h(eta) = g(eta)^s"

    clause("monic", monic)
    clause("integral_coefficients", integral)
    clause("residue_in_residue_field", residue_in_residue_field)
    clause("separable_reduction", separable)
    clause("residue_is_root", root)
    clause("residue_is_simple_root", simple)
    clause("derivative_is_unit", derivative_unit)
    clause("g_is_unit", g_unit)
    clause("inverse_derivative", inverse_derivative)
    rep.clauses["irreducible"] = (True, "declared by the caller, not tested")
    rep.ok = all(good for good, _ in rep.clauses.values())
    return rep


# ---------------------------------------------------------------------------
# splitting and structural constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitEntry:
    index: int
    unit: ExtElement
    prime: RationalFunction | None  # None for elements that are units


def split_units(Z: Sequence[ExtElement], pres: EtalePresentation, ctx: Context | None = None):
    """Write each positive-value element as ``unit * (t,x)-monomial``.

    Returns ``(units, primes, entries)``: the unit elements of Z together with
    the unit factors, the monomials (elements of the base field), and one
    :class:`SplitEntry` per element of Z.
    """
    ctx = ctx or pres.ctx
    V = [list(r) for r in ctx.value_matrix]
    units, primes, entries = [], [], []
    for i, z in enumerate(Z):
        v = ext_value(z, pres, ctx)
        if v is INF:
            raise ZeroElement("0 cannot be split")
        s = value_sign(v, ctx)
        if s < 0:
            raise NegativeValue(f"element {i} has negative value {v.coords}")
        if s == 0:
            units.append(z)
            entries.append(SplitEntry(i, z, None))
            continue
        exps = express_in_basis(v, V)
        prime = RationalFunction.monomial(ctx, ctx.embed_tx(exps))
        u = z.scale(prime.inv())
        units.append(u)
        primes.append(prime)
        entries.append(SplitEntry(i, u, prime))
    return units, primes, entries


def _dedupe(items):
    out = []
    for it in items:
        if it.is_zero():
            continue
        if not any(it.same_form(o) or it == o for o in out):
            out.append(it)
    return out


def default_representations(units: Sequence[ExtElement], pres: EtalePresentation) -> list[Representation]:
    one = RationalFunction.const(pres.ctx, 1)
    return [Representation(u, tuple(u.coeffs), (one,), 0) for u in units]


def collect_constants(
    pres: EtalePresentation, reps: Sequence[Representation], ctx: Context | None = None
) -> list[RationalFunction]:
    """Coefficients of f, g, h and of every representation, without duplicates."""
    ctx = ctx or pres.ctx
    gext = make_ext(list(pres.g), pres)
    pool = list(pres.f) + list(pres.g) + list(pres.h)
    for rep in reps:
        b = make_ext(list(rep.b), pres)
        vb = ext_value(b, pres, ctx)
        if vb is INF or not vb.is_zero():
            raise NonUnitDenominator(f"denominator of the representation of {rep.xi} has value {vb}")
        a = make_ext(list(rep.a), pres)
        lhs, rhs = ext_mul(rep.xi, b, pres), a
        gk = ext_pow(gext, abs(rep.k), pres)
        if rep.k >= 0:
            rhs = ext_mul(rhs, gk, pres)
        else:
            lhs = ext_mul(lhs, gk, pres)
        if not lhs == rhs:
            raise InvalidPresentation(f"representation does not reproduce {rep.xi}")
        pool += list(rep.a) + list(rep.b)
    return _dedupe(pool)


# ---------------------------------------------------------------------------
# ascent
# ---------------------------------------------------------------------------


def _find_scaled(chart: Chart, c: RationalFunction):
    """A factorization of a non-zero scalar multiple of ``c``, with the scalar."""
    for fz in chart.factorizations:
        q = c / fz.zeta
        if q.is_constant():
            return fz, q
    return None


def _chart_factor(chart: Chart, c: RationalFunction):
    """``(unit, exps)`` if ``c`` is already unit * monomial in the chart, else None."""
    n = len(chart.new_vars)
    got = try_factor(chart.rewrite(c), n)
    if got is None:
        return None
    unit, exps = got
    v = value_ratfun(unit, chart.context)
    return got if v is not INF and v.is_zero() else None


def _rewrite_pres(pres: EtalePresentation, chart: Chart) -> EtalePresentation:
    rw = chart.rewrite
    return EtalePresentation(
        pres.generator,
        tuple(rw(c) for c in pres.f),
        tuple(rw(c) for c in pres.g),
        tuple(rw(c) for c in pres.h),
        pres.s,
        rw(pres.residue),
    )


def ascend_chart(
    base: Chart,
    pres: EtalePresentation,
    Z: Sequence[ExtElement],
    reps: Sequence[Representation] | None = None,
    ctx: Context | None = None,
) -> AscendedChart:
    ctx = ctx or base.source
    report = check_inertial(pres, ctx)
    if not report.ok:
        raise InertialCheckFailed("presentation fails: " + ", ".join(report.failed()))
    units, primes, entries = split_units(Z, pres, ctx)
    if reps is None:
        reps = default_representations(units, pres)
    required = collect_constants(pres, reps, ctx) + list(primes)
    for c in required:
        if c.is_constant():
            continue
        if _find_scaled(base, c) is None and _chart_factor(base, c) is None:
            raise MissingConstant(f"base chart does not factor {c}")
    cpres = _rewrite_pres(pres, base)
    facts = []
    n = len(base.new_vars)
    for z, entry in zip(Z, entries):
        unit_coeffs = [base.rewrite(c) for c in entry.unit.coeffs]
        if entry.prime is None:
            exps = (0,) * n
        else:
            found = _find_scaled(base, entry.prime)
            if found is not None:
                fz, q = found
                pu, exps = fz.unit * q, fz.exps
            else:
                pu, exps = _chart_factor(base, entry.prime)
            unit_coeffs = [c * pu for c in unit_coeffs]
        facts.append(AscendedFactorization(z, ExtElement(tuple(unit_coeffs)), tuple(exps)))
    return AscendedChart(
        base=base,
        presentation=pres,
        chart_presentation=cpres,
        factorizations=tuple(facts),
        regular_params=base.regular_params,
        dimension=base.dimension,
    )


def verify_ascended(ac: AscendedChart, ctx: Context | None = None) -> dict:
    """Recompute every claim of an ascended chart; returns clause -> (pass, detail)."""
    ctx = ctx or ac.base.source
    base = ac.base
    out = {}
    inert = check_inertial(ac.presentation, ctx)
    out["inertial"] = (inert.ok, ", ".join(inert.failed()) or "all clauses pass")
    out["dimension"] = (ac.dimension == base.dimension, f"{ac.dimension} vs base {base.dimension}")
    out["regular_params"] = (ac.regular_params == base.regular_params, ", ".join(ac.regular_params))
    round_ok, unit_ok, exps_ok = True, True, True
    notes = []
    for k, fz in enumerate(ac.factorizations):
        if any(e < 0 for e in fz.exps) or len(fz.exps) != len(base.new_vars):
            exps_ok = False
            notes.append(f"element {k}: bad exponents {fz.exps}")
            continue
        mono = base.expand(base.monomial(fz.exps))
        back = ExtElement(tuple(base.expand(c) * mono for c in fz.unit.coeffs))
        if not back == fz.zeta:
            round_ok = False
            notes.append(f"element {k}: round trip failed")
        try:
            v = ext_value(fz.unit, ac.chart_presentation, base.context)
        except (InvalidPresentation, NonzeroValue) as exc:
            v = exc
        if v is INF or not isinstance(v, GroupElement) or not v.is_zero():
            unit_ok = False
            notes.append(f"element {k}: unit value {v}")
    out["exponents_non_negative"] = (exps_ok, "; ".join(n for n in notes if "exponents" in n) or "ok")
    out["round_trip_mod_f"] = (round_ok, "; ".join(n for n in notes if "round" in n) or "ok")
    out["units"] = (unit_ok, "; ".join(n for n in notes if "unit" in n) or "ok")
    return out
