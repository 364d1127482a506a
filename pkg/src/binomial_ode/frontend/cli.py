"""Command-line entry point: verify, classify, branch, ansatz, char, corpus."""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import mpmath

from ..ball import CBall
from ..equation import aux_pair, residual, theorem1_branch
from ..errors import BinomialODEError, CapabilityExceeded, NumericError, ParseError, UnboundUnit
from ..exppoly import ExpPoly
from ..scalar import EMPTY_TOWER, Tower
from .corpus import check_record, find_record, load_corpus
from .equations import parse_equation
from .parser import parse_expression

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAPABILITY, EXIT_NUMERIC = 0, 1, 2, 3, 4
COMMANDS = ("verify", "classify", "branch", "ansatz", "char", "corpus")


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("radii must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=64, help="working precision in bits for ball checks")
    common.add_argument("--degree-bound", type=int, default=8, help="polynomial ansatz degree bound")
    common.add_argument("--r-grid", type=_float_list, default=None, help="radii for 'char', comma separated")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for the sample point of numeric checks")
    common.add_argument("--tower", default=None, help="tower descriptor: JSON list or path to a JSON file")
    common.add_argument("--record", default=None, help="take equation/candidate from this corpus record id")
    common.add_argument("--degenerate", action="store_true", help="admit a*b*c == 0")

    ap = argparse.ArgumentParser(prog="binomial-ode", description="Exact toolkit for binomial differential equations.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, args, helptext in (
        ("verify", ("equation", "candidate"), "exact residual of a candidate solution"),
        ("classify", ("equation",), "solution families with diagnostics"),
        ("branch", ("equation", "candidate"), "which branch the auxiliary identity selects"),
        ("ansatz", ("equation",), "polynomial solutions P of f = P exp(d)"),
        ("char", ("candidate",), "Nevanlinna characteristic samples and growth fit"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        for a in args:
            p.add_argument(a, nargs="?", default=None)
    p = sub.add_parser("corpus", parents=[common], help="check every corpus record")
    p.add_argument("path", nargs="?", default=None)
    return ap


# -- helpers -------------------------------------------------------------------

def _tower(spec: str | None) -> Tower:
    if not spec:
        return EMPTY_TOWER
    path = Path(spec)
    text = path.read_text() if not spec.lstrip().startswith("[") and path.exists() else spec
    try:
        return Tower.from_descriptor(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"bad tower descriptor: {exc}", None, spec) from None


def _inputs(ns) -> tuple[str | None, str | None, Tower]:
    equation, candidate = getattr(ns, "equation", None), getattr(ns, "candidate", None)
    tower = _tower(ns.tower)
    if ns.record:
        rec = find_record(ns.record)
        equation = equation or rec.equation
        candidate = candidate or rec.candidate
        if rec.tower and not ns.tower:
            tower = rec.tower_obj()
    return equation, candidate, tower


def _need(value: str | None, what: str) -> str:
    if value is None:
        raise ParseError(f"missing {what} (pass it or use --record)", None, "")
    return value


def _sample_point(seed: int) -> Fraction:
    # dyadic, so the point is exact in binary
    rng = random.Random(seed)
    return Fraction(rng.randint(-16, 16), 8)


def _numeric_check(r: ExpPoly, seed: int, precision: int) -> dict | None:
    """Ball enclosure of the residual at a seeded rational point."""
    z0 = _sample_point(seed)
    try:
        point = CBall.exact(mpmath.mpf(z0.numerator) / z0.denominator)
        ball = r.eval(point, precision=precision)
    except UnboundUnit:
        return None
    return {
        "z": str(z0),
        "mid": [float(ball.mid.real), float(ball.mid.imag)],
        "rad": float(ball.rad),
        "contains_zero": bool(ball.contains(0)),
    }


# -- commands ----------------------------------------------------------------

def cmd_verify(ns) -> tuple[int, dict]:
    eq_text, f_text, tower = _inputs(ns)
    eq = parse_equation(_need(eq_text, "equation"), tower, degenerate=ns.degenerate)
    f = parse_expression(_need(f_text, "candidate"), tower)
    r = residual(eq, f)
    report = {
        "command": "verify",
        "equation": eq.text(),
        "candidate": f.text(),
        "residual": r.text(),
        "verified": r.is_zero(),
        "numeric_check": _numeric_check(r, ns.seed, ns.precision),
    }
    if ns.record:
        report["note"] = find_record(ns.record).note
    return (EXIT_OK if r.is_zero() else EXIT_FAIL), report


def cmd_classify(ns) -> tuple[int, dict]:
    from ..classifier import classify

    eq_text, _, tower = _inputs(ns)
    eq = parse_equation(_need(eq_text, "equation"), tower, degenerate=ns.degenerate)
    result = classify(eq, degree_bound=ns.degree_bound, strict=True)
    return EXIT_OK, {"command": "classify", "equation": eq.text(), **result.to_record()}


def cmd_branch(ns) -> tuple[int, dict]:
    eq_text, f_text, tower = _inputs(ns)
    eq = parse_equation(_need(eq_text, "equation"), tower, degenerate=ns.degenerate)
    f = parse_expression(_need(f_text, "candidate"), tower)
    aux = aux_pair(eq)
    branch = theorem1_branch(eq, f)
    return EXIT_OK, {
        "command": "branch", "equation": eq.text(), "candidate": f.text(),
        "h": aux.h.text(), "s": aux.s.text(), "branch": branch.value,
    }


def cmd_ansatz(ns) -> tuple[int, dict]:
    from ..classifier import polynomial_ansatz

    eq_text, _, tower = _inputs(ns)
    eq = parse_equation(_need(eq_text, "equation"), tower, degenerate=ns.degenerate)
    sols = polynomial_ansatz(eq, ns.degree_bound)
    return EXIT_OK, {
        "command": "ansatz", "equation": eq.text(), "degree_bound": ns.degree_bound,
        "solutions": [
            {"P": s.poly.text(), "f": ExpPoly.term(s.poly, eq.d).text(), "residual": s.certificate.text()}
            for s in sols
        ],
    }


def cmd_char(ns) -> tuple[int, dict]:
    from .. import nevanlinna as nv

    _, f_text, tower = _inputs(ns)
    f = parse_expression(_need(f_text, "candidate"), tower)
    grid = tuple(ns.r_grid) if ns.r_grid else nv.DEFAULT_R_GRID
    samples = [nv.characteristic(f, r) for r in grid]
    fit = nv.estimate_growth(f, grid) if len(grid) >= 5 else None
    return EXIT_OK, {
        "command": "char", "candidate": f.text(),
        "samples": [nv.sample_record(s) for s in samples],
        "csv": nv.samples_to_csv(samples),
        "fit": fit.to_record() if fit else None,
    }


def cmd_corpus(ns) -> tuple[int, dict]:
    outcomes = [check_record(rec) for rec in load_corpus(ns.path)]
    passed = sum(o["passed"] for o in outcomes)
    report = {"command": "corpus", "records": outcomes, "passed": passed, "total": len(outcomes)}
    return (EXIT_OK if passed == len(outcomes) else EXIT_FAIL), report


HANDLERS = {"verify": cmd_verify, "classify": cmd_classify, "branch": cmd_branch,
            "ansatz": cmd_ansatz, "char": cmd_char, "corpus": cmd_corpus}


# -- rendering -------------------------------------------------------------------

def render_text(report: dict) -> str:
    cmd = report.get("command")
    if "error" in report:
        err = report["error"]
        span = f" [{err['span'][0]}:{err['span'][1]}]" if err.get("span") else ""
        return f"error ({err['type']}){span}: {err['message']}"
    if cmd == "verify":
        lines = [f"equation:  {report['equation']}", f"candidate: f = {report['candidate']}",
                 f"residual:  {report['residual']}", f"verified:  {str(report['verified']).lower()}"]
        if report.get("note"):
            lines.append(f"note:      {report['note']}")
        return "\n".join(lines)
    if cmd == "classify":
        lines = [f"equation: {report['equation']}"]
        for fam in report["families"]:
            lines.append(f"[{fam['provenance']}] {fam['status']}: {fam['form_text']}")
            for p in fam["parameters"]:
                vals = f" values {{{', '.join(p['values'])}}}" if p["values"] and p["kind"] == "solved" else ""
                lines.append(f"    {p['name']}: {p['relation']}{vals}")
            for inst in fam["instances"]:
                lines.append(f"    instance: f = {inst}")
            if fam["note"]:
                lines.append(f"    note: {fam['note']}")
        for d in report["diagnostics"]:
            mark = {True: "pass", False: "FAIL", None: "n/a"}[d["pass"]]
            lines.append(f"diagnostic {d['name']}: {mark} (expected {d['expected']}; observed {d['observed']})")
        lines.extend(f"note: {n}" for n in report["notes"])
        return "\n".join(lines)
    if cmd == "branch":
        return "\n".join([f"equation: {report['equation']}", f"h = {report['h']}", f"s = {report['s']}",
                          f"branch: {report['branch']}"])
    if cmd == "ansatz":
        lines = [f"equation: {report['equation']}", f"degree bound: {report['degree_bound']}"]
        lines += [f"P = {s['P']}  (f = {s['f']}, residual {s['residual']})" for s in report["solutions"]]
        if not report["solutions"]:
            lines.append("no polynomial solutions")
        return "\n".join(lines)
    if cmd == "char":
        out = report["csv"].rstrip("\n")
        fit = report["fit"]
        if fit:
            out += f"\nrho_hat={fit['rho_hat']:.4f} lambda_hat={fit['lambda_hat']:.4f} residual={fit['residual']:.3g}"
        return out
    lines = [f"{o['id']}: {'ok' if o['passed'] else 'MISMATCH'} expected {o['expected']}, observed {o['observed']}"
             f" (residual {o['residual']})" for o in report["records"]]
    lines.append(f"{report['passed']}/{report['total']} records as expected")
    return "\n".join(lines)


def _error_report(command: str, exc: Exception) -> dict:
    span = getattr(exc, "span", None)
    return {"command": command, "error": {"type": type(exc).__name__,
                                          "message": getattr(exc, "message", str(exc)),
                                          "span": list(span) if span else None}}


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    ns = build_parser().parse_args(argv)
    try:
        with mpmath.workprec(max(ns.precision, 53)):
            return HANDLERS[ns.command](ns)
    except ParseError as exc:
        return EXIT_PARSE, _error_report(ns.command, exc)
    except CapabilityExceeded as exc:
        return EXIT_CAPABILITY, _error_report(ns.command, exc)
    except NumericError as exc:
        return EXIT_NUMERIC, _error_report(ns.command, exc)
    except (BinomialODEError, KeyError) as exc:
        # remaining domain errors are rejected inputs (e.g. vanishing auxiliary pair)
        return EXIT_PARSE, _error_report(ns.command, exc)


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    code, report = run(argv)
    if ns.format == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(report) + "\n")
    return code


def report_schema() -> dict:
    """The JSON schema every ``--format json`` report satisfies."""
    from importlib import resources

    return json.loads((resources.files("binomial_ode.frontend") / "data" / "report.schema.json").read_text())


if __name__ == "__main__":
    sys.exit(main())
