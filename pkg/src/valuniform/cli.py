"""Command-line front end: problem file in, certificate report out.

Exit codes: 0 when every recomputed check passes, 1 when a check fails or the
engine rejects the input mathematically (the report is still written), 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Sequence

import jsonschema

from . import __version__
from .errors import (
    DivisionByZero,
    ParseError,
    UnknownVariable,
    ValuniformError,
    WrongCharacteristic,
)
from .funcfield import Context, FieldSpec, RationalFunction, VarDecl
from .inertial import (
    EtalePresentation,
    Representation,
    ascend_chart,
    check_inertial,
    collect_constants,
    default_representations,
    parse_ext,
    split_units,
    verify_ascended,
)
from .monomialize import Chart, chart_report, monomialize_set
from .ordered_group import GroupElement, OrderSpec, QuadraticNumber
from .pipeline import uniformize
from .transforms import verify_certificate
from .valuation import INF, check_setting, value_ratfun

COMMANDS = ("check", "monomialize", "transform", "ascend")
INPUT_ERRORS = (ParseError, UnknownVariable, WrongCharacteristic, DivisionByZero)


class InputError(Exception):
    """Malformed problem or report file (exit code 2)."""


@dataclass
class Problem:
    raw: dict
    ctx: Context
    Z: list[str]


def load_schema() -> dict:
    text = resources.files("valuniform").joinpath("schemas/problem.schema.json").read_text()
    return json.loads(text)


def _quad(entry: Sequence[int], d: int) -> QuadraticNumber:
    a_num, a_den, b_num, b_den = entry
    if a_den == 0 or b_den == 0:
        raise InputError("zero denominator in an order form")
    return QuadraticNumber(Fraction(a_num, a_den), Fraction(b_num, b_den), d)


def build_problem(raw: dict) -> Problem:
    try:
        jsonschema.validate(raw, load_schema())
    except jsonschema.ValidationError as exc:
        raise InputError(f"schema: {exc.message} at {list(exc.absolute_path)}") from None
    d = raw["order"].get("d", 1)
    forms = raw["order"]["forms"]
    rank = len(forms)
    if any(len(row) != len(forms[0]) for row in forms):
        raise InputError("order forms have different lengths")
    try:
        order = OrderSpec(rank, tuple(tuple(_quad(e, d) for e in row) for row in forms), d)
        decls = []
        for v in raw["variables"]:
            coords = tuple(v.get("value", [0] * rank))
            if len(coords) != rank:
                raise InputError(f"value of {v['name']} has {len(coords)} coordinates, order has rank {rank}")
            decls.append(VarDecl(v["name"], v["class"], GroupElement(coords)))
        names = [v.name for v in decls]
        if len(set(names)) != len(names):
            raise InputError("duplicate variable names")
        ctx = Context(FieldSpec(raw["field"]["characteristic"]), tuple(decls), order)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    for p in raw.get("base_ring", {}).get("params", []):
        if p not in ctx.index:
            raise InputError(f"base ring param {p} is not declared")
    return Problem(raw, ctx, list(raw["Z"]))


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def ser_value(v) -> Any:
    return "inf" if v is INF else list(v.coords)


def ser_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
    return "*".join(parts) if parts else "1"


def ser_chart(chart: Chart) -> dict:
    src_tx = [chart.source.names[i] for i in chart.source.tx]
    return {
        "new_vars": [
            {
                "name": nv.name,
                "definition": list(nv.definition),
                "expression": str(RationalFunction.monomial(chart.source, chart.source.embed_tx(nv.definition))),
                "value": ser_value(nv.value),
            }
            for nv in chart.new_vars
        ],
        "source_tx_vars": src_tx,
        "regular_params": list(chart.regular_params),
        "dimension": chart.dimension,
        "factorizations": [
            {
                "zeta": str(fz.zeta),
                "unit": str(fz.unit),
                "exps": list(fz.exps),
                "display": f"{fz.zeta} = ({fz.unit}) * {ser_monomial(fz.exps, chart.context.names)}",
            }
            for fz in chart.factorizations
        ],
    }


def _clauses(prefix: str, clauses: dict) -> dict[str, bool]:
    return {f"{prefix}{k}": bool(good) for k, (good, _) in clauses.items()}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _parse_Z(prob: Problem) -> list[RationalFunction]:
    return [prob.ctx.parse(s) for s in prob.Z]


def _presentation(prob: Problem) -> tuple[EtalePresentation, dict]:
    et = prob.raw.get("etale")
    if et is None:
        raise InputError("this command needs an 'etale' section")
    ctx = prob.ctx
    if et["generator"] in ctx.index:
        raise InputError(f"generator {et['generator']} clashes with a declared variable")

    def coeffs(key, default):
        return tuple(ctx.parse(s) for s in et.get(key, default))

    pres = EtalePresentation(
        et["generator"], coeffs("f", []), coeffs("g", ["1"]), coeffs("h", ["1"]), et.get("s", 0), ctx.parse(et["residue"])
    )
    return pres, et


def cmd_check(prob: Problem) -> dict:
    setting = check_setting(prob.ctx)
    out = {"setting": setting.as_dict(), "checks": _clauses("setting.", setting.clauses)}
    if "etale" in prob.raw:
        pres, _ = _presentation(prob)
        rep = check_inertial(pres, prob.ctx)
        out["inertial"] = rep.as_dict()
        out["checks"].update(_clauses("inertial.", rep.clauses))
    return out


def _struct_checks(prefix: str, report) -> dict[str, bool]:
    keys = ("abhyankar_ok", "basis_ok", "factorization_ok", "unit_ok", "dimension_ok")
    return {f"{prefix}{k}": bool(getattr(report, k)) for k in keys}


def cmd_monomialize(prob: Problem) -> dict:
    setting = check_setting(prob.ctx)
    Z = _parse_Z(prob)
    chart = monomialize_set(Z, prob.ctx)
    report = chart_report(chart, prob.ctx)
    return {
        "setting": setting.as_dict(),
        "chart": ser_chart(chart),
        "struct_report": report.as_dict(),
        "checks": _struct_checks("chart.", report),
    }


def cmd_transform(prob: Problem) -> dict:
    params = prob.raw.get("base_ring", {}).get("params")
    Z = _parse_Z(prob)
    u = uniformize(Z, prob.ctx, params)
    certs = []
    cert_ok = True
    for c in u.certificates:
        problems = verify_certificate(c, u.state, prob.ctx)
        cert_ok = cert_ok and not problems
        certs.append(
            {
                "element": str(c.element),
                "unit": str(c.unit),
                "exps": list(c.exps),
                "display": f"{c.element} = ({c.unit}) * {ser_monomial(c.exps, u.state.param_names)}",
                "problems": problems,
            }
        )
    checks = {"transforms.certificates_verify": cert_ok, "pipeline.composition": u.composition_ok}
    checks.update(_struct_checks("chart.", u.report))
    return {
        "transforms": {
            "history": list(u.state.history),
            "count": u.state.transforms(),
            "params": [
                {"name": p.name, "definition": list(p.definition), "value": ser_value(p.value)} for p in u.state.params
            ],
            "reclassified": [{"name": p.name, "definition": list(p.definition)} for p in u.state.reclassified],
            "original": list(u.state.original),
            "certificates": certs,
        },
        "rewritten_variables": list(u.rewritten_context.names),
        "chart": ser_chart(u.chart),
        "struct_report": u.report.as_dict(),
        "dimension": u.dimension,
        "checks": checks,
    }


def _base_set(items: Sequence[RationalFunction]) -> list[RationalFunction]:
    out = []
    for c in items:
        if c.is_zero() or c.is_constant():
            continue
        if not any(c.same_form(o) for o in out):
            out.append(c)
    return out


def cmd_ascend(prob: Problem) -> dict:
    ctx = prob.ctx
    pres, et = _presentation(prob)
    inert = check_inertial(pres, ctx)
    out = {"inertial": inert.as_dict(), "checks": _clauses("inertial.", inert.clauses)}
    if not inert.ok:
        return out
    Z = [parse_ext(s, pres) for s in prob.Z]
    units, primes, _ = split_units(Z, pres, ctx)
    reps = default_representations(units, pres)
    one = RationalFunction.const(ctx, 1)
    for k, r in enumerate(et.get("reps", [])):
        xi = parse_ext(r["xi"], pres)
        rep = Representation(
            xi, tuple(ctx.parse(s) for s in r["a"]), tuple(ctx.parse(s) for s in r.get("b", ["1"])) or (one,), r.get("k", 0)
        )
        match = [i for i, u in enumerate(units) if u == xi]
        if not match:
            raise InputError(f"representation {k} does not match a unit of Z")
        for i in match:
            reps[i] = rep
    constants = collect_constants(pres, reps, ctx)
    base_Z = _base_set(list(constants) + list(primes))
    base = monomialize_set(base_Z, ctx)
    base_report = chart_report(base, ctx)
    ac = ascend_chart(base, pres, Z, reps, ctx)
    verdicts = verify_ascended(ac, ctx)
    names = base.context.names
    out.update(
        {
            "split": {
                "units": [u.format(pres.generator) for u in units],
                "primes": [str(p) for p in primes],
                "values": [ser_value(value_ratfun(p, ctx)) for p in primes],
            },
            "constants": [str(c) for c in constants],
            "base_chart": ser_chart(base),
            "base_struct_report": base_report.as_dict(),
            "ascended": {
                "dimension": ac.dimension,
                "regular_params": list(ac.regular_params),
                "factorizations": [
                    {
                        "zeta": fz.zeta.format(pres.generator),
                        "unit": fz.unit.format(pres.generator),
                        "exps": list(fz.exps),
                        "display": f"{fz.zeta.format(pres.generator)} = ({fz.unit.format(pres.generator)})"
                        f" * {ser_monomial(fz.exps, names)}",
                    }
                    for fz in ac.factorizations
                ],
                "verification": {k: {"pass": good, "detail": d} for k, (good, d) in verdicts.items()},
            },
        }
    )
    out["checks"].update(_struct_checks("base.", base_report))
    out["checks"].update(_clauses("ascended.", verdicts))
    return out


HANDLERS = {"check": cmd_check, "monomialize": cmd_monomialize, "transform": cmd_transform, "ascend": cmd_ascend}


def run(command: str, raw: dict) -> dict:
    """Run a command on a parsed problem and return the full report.

    Raises :class:`InputError` for malformed input; engine errors become a
    failing report.
    """
    prob = build_problem(raw)
    report: dict[str, Any] = {"tool": "valuniform", "version": __version__, "command": command, "problem": raw}
    try:
        body = HANDLERS[command](prob)
    except INPUT_ERRORS as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    except ValuniformError as exc:
        body = {"checks": {"engine": False}, "error": {"type": type(exc).__name__, "message": str(exc)}}
        residual = getattr(exc, "residual", None)
        if residual:
            body["error"]["residual"] = list(residual)
    report.update(body)
    report["verdict"] = "pass" if all(report["checks"].values()) else "fail"
    return report


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = [f"valuniform {report['version']} {report['command']}: {report['verdict'].upper()}"]
    if "error" in report:
        lines.append(f"error: {report['error']['type']}: {report['error']['message']}")
        for r in report["error"].get("residual", []):
            lines.append(f"  residual: {r}")
    if "setting" in report:
        s = report["setting"]
        lines.append(f"rho = {s['rho']}, tau = {s['tau']}, delta = {s['delta']}, rational rank = {s['rational_rank']}")
    tr = report.get("transforms")
    if tr:
        lines.append(f"transforms: {tr['count']}")
        lines += [f"  {h}" for h in tr["history"]]
        lines += [f"  {c['display']}" for c in tr["certificates"]]

    def chart_lines(title, ch):
        out = [f"{title} (dimension {ch['dimension']}):"]
        out += [f"  {nv['name']} = {nv['expression']}   value {nv['value']}" for nv in ch["new_vars"]]
        out += [f"  {fz['display']}" for fz in ch["factorizations"]]
        return out

    if "chart" in report:
        lines += chart_lines("chart", report["chart"])
    if "base_chart" in report:
        lines += chart_lines("base chart", report["base_chart"])
    if "ascended" in report:
        a = report["ascended"]
        lines.append(f"ascended chart (dimension {a['dimension']}):")
        lines += [f"  {fz['display']}" for fz in a["factorizations"]]
    lines.append("checks:")
    lines += [f"  {'pass' if ok else 'FAIL'}  {k}" for k, ok in sorted(report["checks"].items())]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def verify_report(report: dict) -> tuple[bool, list[str]]:
    """Re-run the command recorded in a report and compare every verdict."""
    for key in ("command", "problem", "checks", "verdict"):
        if key not in report:
            raise InputError(f"report has no '{key}' field")
    if report["command"] not in HANDLERS:
        raise InputError(f"unknown command {report['command']!r} in report")
    fresh = run(report["command"], report["problem"])
    diffs = []
    for k in sorted(set(fresh["checks"]) | set(report["checks"])):
        if fresh["checks"].get(k) != report["checks"].get(k):
            diffs.append(f"{k}: report says {report['checks'].get(k)}, recomputed {fresh['checks'].get(k)}")
    if fresh["verdict"] != report["verdict"]:
        diffs.append(f"verdict: report says {report['verdict']}, recomputed {fresh['verdict']}")
    return not diffs, diffs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valuniform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"valuniform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "validate the valued field (and an etale presentation, if present)",
        "monomialize": "compute a chart making every element of Z unit times monomial",
        "transform": "quadratic transforms of the base ring, then monomialize",
        "ascend": "monomialize the structural constants and ascend through the etale presentation",
        "verify": "recompute the verdicts of a saved JSON report",
    }
    for name in COMMANDS + ("verify",):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("path", help="report file" if name == "verify" else "problem file (JSON)")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            same, diffs = verify_report(load_json(args.path))
            text = "verdicts reproduced\n" if same else "".join(f"{d}\n" for d in diffs)
            _emit(text if args.format == "text" else render_json({"reproduced": same, "differences": diffs}), args.out)
            return 0 if same else 1
        report = run(args.command, load_json(args.path))
    except InputError as exc:
        print(f"valuniform: input error: {exc}", file=sys.stderr)
        return 2
    _emit(render_json(report) if args.format == "json" else render_text(report), args.out)
    if report["verdict"] != "pass":
        failed = [k for k, ok in sorted(report["checks"].items()) if not ok]
        print(f"valuniform: verification failed: {', '.join(failed)}", file=sys.stderr)
        if "error" in report:
            print(f"valuniform: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
        return 1
    return 0
