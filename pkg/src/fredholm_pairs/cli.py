"""Command-line front end.

    fredholm-pairs analyze-pair  --input pair.json
    fredholm-pairs analyze-chain --input chain.json --format text
    fredholm-pairs perturb-pair  --input pair.json --seed 7 --mode finite-rank
    fredholm-pairs perturb-chain --input chain.json --seed 7 --epsilon 0.05
    fredholm-pairs probe --family right-shift --shape rect-up --n-range 1:40

Exit codes: 0 all checks pass, 2 bad input, 3 a check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .chains import (
    analyze_chain,
    chain_scale,
    chain_to_pair,
    dual_chain,
    stitched_euler_operators,
    validate_chain,
    verify_chain,
)
from .checks import Check, InconsistencyError, equal_ints
from .hilbert import ComputationError, DimensionError, Tolerance
from .matrix_json import MatrixParseError, parse_chain_json, parse_pair_json
from .pairs import analyze_pair, compress_pair, euler_index, verify_pair
from .perturbation import MODES, PerturbationPlan, run_chain_experiment, run_pair_experiment
from .truncation import KINDS, RULES, SHAPES, OperatorFamily, stabilization_scan

COMMANDS = ("analyze-pair", "analyze-chain", "perturb-pair", "perturb-chain", "probe")
EXIT_OK, EXIT_INVALID, EXIT_INCONSISTENT = 0, 2, 3


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fredholm-pairs", description="Index and stability checks for Fredholm pairs and chains.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", type=Path, help="pair or chain JSON file")
    ap.add_argument("--tol", type=float, default=1e-10, help="relative rank threshold")
    ap.add_argument("--atol", type=float, default=1e-9, help="residual threshold for identity checks")
    ap.add_argument("--seed", type=int, help="required for perturb commands")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--output", type=Path, help="write the report here instead of stdout")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--mode", choices=MODES, default="dense-small-norm")
    ap.add_argument("--rank-cap", type=int, default=1)
    ap.add_argument("--family", choices=KINDS, default="right-shift")
    ap.add_argument("--partner", choices=KINDS, default="zero", help="family of T (default zero)")
    ap.add_argument("--rule", choices=sorted(RULES), default="1/k", help="weight rule for weighted-shift/diagonal")
    ap.add_argument("--shape", choices=SHAPES, default="square")
    ap.add_argument("--n-range", default="1:40", help="inclusive range A:B")
    ap.add_argument("--window", type=int, default=3, help="stable window for probe")
    return ap


def _load_json(path: Path | None):
    if path is None:
        raise UsageError("--input is required for this command")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError("$", f"invalid JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from exc


def _parse_n_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"--n-range must look like A:B, got {text!r}") from exc
    if lo < 1 or hi < lo:
        raise UsageError(f"--n-range needs 1 <= A <= B, got {text!r}")
    return range(lo, hi + 1)


def _analyze_pair(args, tol):
    pair = parse_pair_json(_load_json(args.input))
    an = analyze_pair(pair, tol)
    ind_fwd, ind_bwd = euler_index(pair, tol)
    result = {"analysis": an.to_dict(), "euler_index": {"S+T*": ind_fwd, "T+S*": ind_bwd}}
    try:
        comp = compress_pair(pair, tol)
        result["compression"] = {
            "dim_F1": comp.F1.dim,
            "dim_F2": comp.F2.dim,
            "compressed_index": analyze_pair(comp.pair, tol, comp.scale).index,
            "product_residual": comp.product_residual,
        }
    except InconsistencyError:
        result["compression"] = None
    return result, verify_pair(pair, tol)


def _analyze_chain(args, tol):
    ch = parse_chain_json(_load_json(args.input))
    scale = chain_scale(ch)
    an = analyze_chain(ch, tol, scale)
    val = validate_chain(ch, tol, scale)
    _, _, ind_even, ind_odd = stitched_euler_operators(ch, tol, scale)
    dual = dual_chain(ch)
    result = {
        "analysis": an.to_dict(),
        "dims": list(ch.dims),
        "minimal_n": ch.minimal_n,
        "non_complex_degrees": list(val.non_complex_degrees),
        "pair_index": analyze_pair(chain_to_pair(ch), tol, scale).index,
        "stitched_index": {"even": ind_even, "odd": ind_odd},
        "dual": {"dims": list(dual.dims), "index": analyze_chain(dual, tol, scale).index},
    }
    return result, verify_chain(ch, tol)


def _plan(args) -> PerturbationPlan:
    if args.seed is None:
        raise UsageError("--seed is required for perturb commands")
    return PerturbationPlan(epsilon=args.epsilon, trials=args.trials, seed=args.seed,
                            mode=args.mode, rank_cap=args.rank_cap)


def _perturb_pair(args, tol):
    plan = _plan(args)
    log = run_pair_experiment(parse_pair_json(_load_json(args.input)), plan, tol)
    return log.to_dict(), log.summary_checks()


def _perturb_chain(args, tol):
    plan = _plan(args)
    log = run_chain_experiment(parse_chain_json(_load_json(args.input)), plan, tol)
    return log.to_dict(), log.summary_checks()


def _probe(args, tol):
    fam = OperatorFamily(args.family, shape=args.shape, rule=args.rule)
    partner = None
    if args.partner != "zero":
        flipped = {"square": "square", "rect-up": "rect-down", "rect-down": "rect-up"}[args.shape]
        partner = OperatorFamily(args.partner, shape=flipped, rule=args.rule)
    report = stabilization_scan(fam, partner, _parse_n_range(args.n_range), args.window, tol)
    checks: list[Check] = [
        equal_ints(f"n={e['n']}: index = dim H1 - dim H2", e["index"], e["cols"] - e["rows"])
        for e in report.per_n
    ]
    return report.to_dict(), checks


HANDLERS = {
    "analyze-pair": _analyze_pair,
    "analyze-chain": _analyze_chain,
    "perturb-pair": _perturb_pair,
    "perturb-chain": _perturb_chain,
    "probe": _probe,
}


def build_report(command: str, tol: Tolerance, result: dict, checks: list[Check]) -> dict:
    return {
        "tool": "fredholm-pairs",
        "version": __version__,
        "command": command,
        "tolerance": {"rank_rtol": tol.rank_rtol, "residual_atol": tol.residual_atol},
        "result": result,
        "checks": [c.to_dict() for c in checks],
        "ok": all(c.passed for c in checks),
    }


def render_text(report: dict) -> str:
    lines = [
        f"{report['tool']} {report['version']}  {report['command']}",
        f"rank_rtol={report['tolerance']['rank_rtol']:g}  residual_atol={report['tolerance']['residual_atol']:g}",
        "",
    ]

    def walk(obj, prefix):
        if isinstance(obj, dict) and obj:
            for k, v in obj.items():
                walk(v, f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
            for i, v in enumerate(obj):
                walk(v, f"{prefix}[{i}]")
        else:
            lines.append(f"{prefix}: {json.dumps(obj)}")

    walk(report["result"], "")
    lines.append("")
    for c in report["checks"]:
        mark = "PASS" if c["passed"] else "FAIL"
        lines.append(f"[{mark}] {c['name']}  residual={c['residual']:.3e}")
    lines.append("")
    lines.append("ok" if report["ok"] else "FAILED")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance(args.tol, args.atol)
        result, checks = HANDLERS[args.command](args, tol)
    except MatrixParseError as exc:
        print(f"error: parse error at {exc}", file=stderr)
        return EXIT_INVALID
    except (UsageError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except (InconsistencyError, ComputationError) as exc:
        print(f"error: internal inconsistency: {exc}", file=stderr)
        return EXIT_INCONSISTENT

    report = build_report(args.command, tol, result, checks)
    text = render(report, args.format)
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    else:
        stdout.write(text)

    bad = [c for c in checks if not c.passed]
    for c in bad:
        print(f"check failed: {c.name} (residual {c.residual:.3e}): {c.detail}", file=stderr)
    return EXIT_INCONSISTENT if bad else EXIT_OK


def main() -> None:
    sys.exit(run())
