"""Command-line interface: verify / quad / reduce / discover / list.

Reports are emitted in plain text, markdown or JSON.  JSON reports use a
fixed key order {schema, version, config, items[], overall_pass}, carry
all numbers as decimal strings at full working precision, and are
byte-stable: two runs with the same flags and seed differ only in
wall_time_ms fields.

Exit codes: 0 all checks passed, 1 numeric failure, 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

from . import __version__, catalog, exprparse, quad1d, quadnd, recognize, reduction
from .numeric import (
    EvaluationError,
    ConvergenceError,
    PrecisionConfig,
    UsageError,
    format_real,
)
from .quad1d import Finite, Integrand1D, SemiInfinite

EXIT_PASS = 0
EXIT_NUMERIC_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    precision_digits: int = 50
    fast: bool = False
    seed: int = 0
    output_format: str = "plain"
    tol_fast: float | None = None
    tol_high: float | None = None

    def precision(self) -> PrecisionConfig:
        if self.fast:
            return PrecisionConfig(16, fast_mode=True)
        return PrecisionConfig(self.precision_digits)

    def tolerance_override(self) -> float | None:
        return self.tol_fast if self.fast else self.tol_high

    def echo(self) -> dict:
        return {
            "precision_digits": 16 if self.fast else self.precision_digits,
            "fast": self.fast,
            "seed": self.seed,
            "format": self.output_format,
            "tol_fast": self.tol_fast,
            "tol_high": self.tol_high,
        }


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--precision", type=int, default=None, metavar="DIGITS",
                   help="working decimal digits (default 50)")
    p.add_argument("--fast", action="store_true",
                   help="native float precision (~16 digits), vectorized")
    p.add_argument("--seed", type=int, default=0, metavar="U64",
                   help="seed for QMC shifts / Monte Carlo (default 0)")
    p.add_argument("--format", choices=("json", "markdown", "plain"),
                   default="plain", help="report format")
    p.add_argument("--tol-fast", type=float, default=None, metavar="TOL",
                   help="override the fast-mode pass tolerance")
    p.add_argument("--tol-high", type=float, default=None, metavar="TOL",
                   help="override the high-precision pass tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahmedtype",
        description=(
            "Verify the reduction of Gaussian-integral powers to "
            "Ahmed-type arctan integrals and recognize the constants."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify catalog identities")
    p.add_argument("ids", nargs="+",
                   help="registry ids, or 'all' for the whole catalog")
    _common_flags(p)

    p = sub.add_parser("quad", help="integrate an expression in x")
    p.add_argument("expression", help="integrand, e.g. '1/(1+x^2)'")
    p.add_argument("--from", dest="lower", default="0",
                   help="lower bound (expression, default 0)")
    p.add_argument("--to", dest="upper", default="1",
                   help="upper bound (expression or 'inf', default 1)")
    p.add_argument("--recognize", default=None, metavar="BASIS",
                   help="attach recognition vs a constant "
                        "(pi, sqrt_pi, pi_squared, pi_cubed)")
    _common_flags(p)

    p = sub.add_parser("reduce",
                       help="show (and evaluate) the iterated representation")
    p.add_argument("n", type=int, help="power, 2..6")
    p.add_argument("--evaluate", action="store_true",
                   help="evaluate the representation numerically")
    p.add_argument("--g", choices=("gauss", "exp", "x"), default="gauss",
                   help="base integrand g (default gauss)")
    p.add_argument("--alpha", default=None,
                   help="upper limit (number or 'inf'; default inf for "
                        "gauss/exp, 1 for x)")
    _common_flags(p)

    p = sub.add_parser("discover",
                       help="run the discovery pipeline for n = 5 or 6")
    p.add_argument("n", type=int, help="power, 5 or 6")
    p.add_argument("--candidate", default=None, metavar="EXPR",
                   help="1D integrand whose value is recognized against "
                        "pi_squared and pi_cubed")
    _common_flags(p)

    p = sub.add_parser("list", help="list catalog ids")
    _common_flags(p)

    return parser


def _run_config(args) -> RunConfig:
    if args.fast and args.precision is not None and args.precision > 16:
        raise UsageError("--fast and --precision > 16 are mutually exclusive")
    return RunConfig(
        precision_digits=args.precision if args.precision is not None else 50,
        fast=args.fast,
        seed=args.seed,
        output_format=args.format,
        tol_fast=args.tol_fast,
        tol_high=args.tol_high,
    )


# ---------------------------------------------------------------------------
# report assembly


def _recognition_dict(rec: recognize.RecognitionResult | None, cfg, target=""):
    if rec is None:
        return None
    out = {
        "kind": "recognition",
        "target": target,
        "numerator": rec.numerator,
        "denominator": rec.denominator,
        "basis": rec.basis_id,
        "matched_digits": rec.matched_digits,
        "residual": format_real(rec.residual, cfg),
        "confident": rec.confident,
    }
    return out


def _identity_item(check: catalog.IdentityCheck, cfg) -> dict:
    item = {
        "kind": "identity",
        "id": check.id,
        "method": check.method,
        "computed": format_real(check.computed, cfg),
        "expected": None if check.expected is None
        else format_real(check.expected, cfg),
        "abs_error": None if check.abs_error is None
        else format_real(check.abs_error, cfg),
        "error_estimate": format_real(check.error_estimate, cfg),
        "digits_matched": check.digits_matched,
        "evaluations": check.evaluations,
        "pass": check.passed,
        "note": check.note,
        "recognition": _recognition_dict(check.recognition, cfg, check.id),
        "wall_time_ms": round(check.wall_ms, 3),
    }
    return item


def _stage_item(sc: reduction.StageCheck, cfg) -> dict:
    return {
        "kind": "stage",
        "stage": sc.stage,
        "dim": sc.dim,
        "prefactor": sc.prefactor,
        "value": format_real(sc.value, cfg),
        "expected": format_real(sc.expected, cfg),
        "abs_error": format_real(sc.abs_error, cfg),
        "tolerance": sc.tolerance,
        "evaluations": sc.evaluations,
        "pass": sc.passed,
        "note": sc.note,
        "wall_time_ms": round(sc.wall_ms, 3),
    }


def _extraction_item(ex: reduction.ExtractionCheck, cfg) -> dict:
    return {
        "kind": "extraction",
        "name": ex.name,
        "value": format_real(ex.value, cfg),
        "expected": format_real(ex.expected, cfg),
        "abs_error": format_real(ex.abs_error, cfg),
        "tolerance": ex.tolerance,
        "pass": ex.passed,
    }


def _report(run: RunConfig, items: list, overall: bool) -> dict:
    return {
        "schema": 1,
        "version": __version__,
        "config": run.echo(),
        "items": items,
        "overall_pass": overall,
    }


def _print_report(report: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    if fmt == "markdown":
        print(f"# ahmedtype report (v{report['version']})")
        print()
        cfg = report["config"]
        print(f"- precision: {cfg['precision_digits']} digits"
              f"{' (fast)' if cfg['fast'] else ''}; seed {cfg['seed']}")
        print()
        for item in report["items"]:
            print(f"## {item['kind']}: "
                  f"{item.get('id') or item.get('name') or item.get('stage', '')}")
            for k, v in item.items():
                if k == "kind":
                    continue
                print(f"- {k}: {v}")
            print()
        print(f"**overall_pass: {report['overall_pass']}**")
        return
    for item in report["items"]:
        head = item.get("id") or item.get("name") or (
            f"stage {item['stage']}" if "stage" in item else item["kind"])
        status = item.get("pass")
        flag = "PASS" if status else ("----" if status is None else "FAIL")
        main = item.get("summary") or item.get("computed") or item.get("value") \
            or item.get("mean") or item.get("description") or item.get("text", "")
        detail = ""
        if item.get("abs_error") is not None:
            detail = f"  |err|={item['abs_error']}"
        print(f"[{flag}] {head}: {main}{detail}")
        rec = item.get("recognition")
        if isinstance(rec, dict):
            print(f"       recognized: {rec['numerator']}/{rec['denominator']}"
                  f" * {rec['basis']} (matched {rec['matched_digits']} digits,"
                  f" confident={rec['confident']})")
        if item.get("kind") == "recognition":
            print(f"       {item['numerator']}/{item['denominator']} * "
                  f"{item['basis']} (matched {item['matched_digits']} digits,"
                  f" confident={item['confident']})")
    print(f"overall: {'PASS' if report['overall_pass'] else 'FAIL'}")


def _overall(items: list) -> bool:
    passes = [it["pass"] for it in items if it.get("pass") is not None]
    return all(passes) if passes else True


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    run = _run_config(args)
    cfg = run.precision()
    ids = list(args.ids)
    include_chain_extras = False
    if len(ids) == 1 and ids[0] == "all":
        ids = list(catalog.list_ids())
        include_chain_extras = True
    else:
        for eid in ids:
            catalog.lookup(eid)  # unknown id -> exit 2 before any work
    items = []
    override = run.tolerance_override()
    for eid in ids:
        check = catalog.verify_identity(eid, cfg, seed=run.seed)
        if override is not None and check.passed is not None \
                and check.abs_error is not None:
            check.passed = bool(check.abs_error <= override)
        items.append(_identity_item(check, cfg))
    if include_chain_extras:
        chain = reduction.verify_chain(cfg)
        for ex in chain.extractions:
            items.append(_extraction_item(ex, cfg))
    overall = _overall(items)
    _print_report(_report(run, items, overall), run.output_format)
    return EXIT_PASS if overall else EXIT_NUMERIC_FAILURE


def cmd_quad(args) -> int:
    run = _run_config(args)
    cfg = run.precision()
    f = exprparse.compile_integrand(args.expression, cfg)
    lower = exprparse.eval_constant(args.lower, cfg)
    if args.upper.strip().lower() in ("inf", "+inf", "infinity"):
        # bounds keep their full precision (e.g. --to pi/2 at 50 digits)
        integrand = Integrand1D(f, SemiInfinite(lower), name=args.expression)
        domain_text = f"[{format_real(lower, cfg)}, inf)"
    else:
        upper = exprparse.eval_constant(args.upper, cfg)
        integrand = Integrand1D(f, Finite(lower, upper), name=args.expression)
        domain_text = f"[{format_real(lower, cfg)}, {format_real(upper, cfg)}]"
    t0 = time.perf_counter()
    res = quad1d.integrate(integrand, cfg=cfg)
    wall = (time.perf_counter() - t0) * 1e3
    item = {
        "kind": "quadrature",
        "expression": args.expression,
        "domain": domain_text,
        "value": format_real(res.value, cfg),
        "error_estimate": format_real(res.error_estimate, cfg),
        "levels_used": res.levels_used,
        "evaluations": res.evaluations,
        "converged": res.converged,
        "pass": res.converged,
        "wall_time_ms": round(wall, 3),
    }
    items = [item]
    if args.recognize:
        rec = recognize.recognize_rational_multiple(
            res.value, args.recognize, max_den=10**6, cfg=cfg)
        rec_item = _recognition_dict(rec, cfg, args.expression)
        if rec_item is None:
            rec_item = {"kind": "recognition", "target": args.expression,
                        "basis": args.recognize, "result": None}
        items.append(rec_item)
    overall = _overall(items)
    _print_report(_report(run, items, overall), run.output_format)
    return EXIT_PASS if overall else EXIT_NUMERIC_FAILURE


def _g_function(name: str):
    from .numeric import exp as num_exp

    if name == "gauss":
        return lambda t: num_exp(-t * t)
    if name == "exp":
        return lambda t: num_exp(-t)
    return lambda t: t


def cmd_reduce(args) -> int:
    run = _run_config(args)
    cfg = run.precision()
    if not 2 <= args.n <= 6:
        raise UsageError(f"reduce supports n in 2..6, got {args.n}")
    rep = reduction.power_representation(args.n)
    weights = " ".join(
        f"{v}^{e}" for v, e in zip(rep.variables, rep.weight_exponents) if e)
    item = {
        "kind": "representation",
        "n": rep.n,
        "prefactor": rep.factorial_prefactor,
        "weight_exponents": list(rep.weight_exponents),
        "variables": list(rep.variables),
        "arguments": list(rep.arguments()),
        "argument_rule": rep.argument_rule,
        "outer_domain": rep.outer_domain,
        "summary": (
            f"(int_0^alpha g)^{rep.n} = {rep.factorial_prefactor} * iterated "
            f"integral of {weights} g({') g('.join(rep.arguments())})"
        ),
        "pass": None,
    }
    items = [item]
    if args.evaluate:
        g = _g_function(args.g)
        alpha_text = args.alpha
        if alpha_text is None:
            alpha_text = "inf" if args.g in ("gauss", "exp") else "1"
        infinite = alpha_text.strip().lower() in ("inf", "+inf", "infinity")
        alpha = math.inf if infinite else float(
            exprparse.eval_constant(alpha_text, cfg))
        t0 = time.perf_counter()
        if args.g == "gauss" and infinite:
            nd = reduction.gaussian_power_reduced(rep.n)
            if rep.n <= 5:
                res = quadnd.integrate_nested(
                    nd, cfg=PrecisionConfig(16, fast_mode=True)
                    if (not cfg.fast_mode and rep.n - 1 > 2) else cfg)
                value = res.value
                method = "nested (analytic semi-infinite axis)"
            else:
                est = quadnd.integrate_qmc(nd, points=1 << 16, shifts=8,
                                           seed=run.seed)
                value = est.mean
                method = "qmc (analytic semi-infinite axis)"
            expected = catalog.lookup(f"power_identity_{rep.n}") \
                .closed_form.value(cfg)
        else:
            method = "nested" if rep.n <= 4 else "qmc"
            value = reduction.evaluate_representation(
                rep, g, alpha, method=method, cfg=cfg, seed=run.seed)
            dom = SemiInfinite(0.0) if infinite else Finite(0.0, alpha)
            base = quad1d.integrate(Integrand1D(g, dom, name=f"g={args.g}"),
                                    cfg=cfg)
            expected = base.value ** rep.n
        wall = (time.perf_counter() - t0) * 1e3
        with cfg.context():
            err = abs(value - expected)
        tol = 1e-8 if rep.n >= 5 else 1e-9
        items.append({
            "kind": "representation_value",
            "n": rep.n,
            "g": args.g,
            "alpha": alpha_text,
            "method": method,
            "value": format_real(value, cfg),
            "expected": format_real(expected, cfg),
            "abs_error": format_real(err, cfg),
            "tolerance": tol,
            "pass": bool(err <= tol) if rep.n <= 5 else None,
            "wall_time_ms": round(wall, 3),
        })
    overall = _overall(items)
    _print_report(_report(run, items, overall), run.output_format)
    return EXIT_PASS if overall else EXIT_NUMERIC_FAILURE


def cmd_discover(args) -> int:
    run = _run_config(args)
    cfg = run.precision()
    if args.n not in (5, 6):
        raise UsageError(f"discover supports n = 5 or 6, got {args.n}")
    items = []
    if args.n == 5:
        chain = reduction.verify_chain(cfg)
        for sc in chain.stages:
            items.append(_stage_item(sc, cfg))
        for ex in chain.extractions:
            items.append(_extraction_item(ex, cfg))
        companion = next(e for e in chain.extractions
                         if e.name == "companion_from_chain")
        value_digits = 11 if cfg.fast_mode else cfg.working_digits - 20
        rec = recognize.recognize_rational_multiple(
            companion.value, "pi_squared", max_den=10**6,
            value_digits=value_digits, cfg=cfg)
        rec_item = _recognition_dict(rec, cfg, "companion_from_chain")
        if rec_item is not None:
            items.append(rec_item)
        for note in chain.notes:
            items.append({"kind": "note", "text": note, "pass": None})
    else:
        nd = reduction.gaussian_power_reduced(6)
        t0 = time.perf_counter()
        est = quadnd.integrate_qmc(nd, points=1 << 16, shifts=8, seed=run.seed)
        wall = (time.perf_counter() - t0) * 1e3
        with cfg.context():
            expected = catalog.lookup("power_identity_6").closed_form.value(cfg)
            err = abs(est.mean - float(expected))
        items.append({
            "kind": "discovery",
            "n": 6,
            "method": "qmc (Halton, Cranley-Patterson shifts)",
            "points": 1 << 16,
            "shifts": 8,
            "mean": format_real(est.mean, cfg),
            "std_error": format_real(est.std_error, cfg),
            "expected": format_real(expected, cfg),
            "abs_error": format_real(err, cfg),
            "pass": bool(err <= 3 * est.std_error),
            "wall_time_ms": round(wall, 3),
        })
    if args.candidate:
        f = exprparse.compile_integrand(args.candidate, cfg)
        res = quad1d.integrate(
            Integrand1D(f, Finite(0.0, 1.0), name=args.candidate), cfg=cfg)
        for basis in ("pi_squared", "pi_cubed"):
            rec = recognize.recognize_rational_multiple(
                res.value, basis, max_den=10**6, cfg=cfg)
            rec_item = _recognition_dict(rec, cfg, args.candidate)
            if rec_item is None:
                rec_item = {"kind": "recognition", "target": args.candidate,
                            "basis": basis, "result": None}
            items.append(rec_item)
    overall = _overall(items)
    _print_report(_report(run, items, overall), run.output_format)
    return EXIT_PASS if overall else EXIT_NUMERIC_FAILURE


def cmd_list(args) -> int:
    run = _run_config(args)
    items = []
    for eid in catalog.list_ids():
        entry = catalog.lookup(eid)
        items.append({
            "kind": "catalog_entry",
            "id": eid,
            "description": entry.description,
            "provenance": entry.provenance,
            "closed_form": entry.closed_form.text() if entry.closed_form
            else None,
            "pass": None,
        })
    _print_report(_report(run, items, True), run.output_format)
    return EXIT_PASS


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "quad": cmd_quad,
        "reduce": cmd_reduce,
        "discover": cmd_discover,
        "list": cmd_list,
    }
    try:
        return handlers[args.command](args)
    except exprparse.ParseError as exc:
        print(f"parse error: {exc.args[0]}", file=sys.stderr)
        print(exc.diagnostic(), file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc.args[0] if exc.args else exc}",
              file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, ConvergenceError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC_FAILURE


def console_main():
    raise SystemExit(main())
