"""Command-line front end. Data goes to stdout/files, logs to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage/IO error.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .behavior import (
    behavior_to_csv,
    behavior_to_json,
    check_no_signaling,
    induced_behavior,
    setting_label,
    simulate_rounds,
)
from .bell import bell_expectation, check_inequality, quantum_behavior
from .joint import (
    ORDERINGS,
    build_joint,
    check_ordering_invariance,
    joint_to_csv,
    parse_ordering,
    verify_joint_laws,
)
from .lp import (
    chsh_variant_program,
    fixed_output_bound,
    min_bell_expectation_program,
    solve,
)
from .search import SearchConfig, minimize_bell
from .strategy import load_network, network_to_json, sample_random_network, save_network, validate
from .transform import verify_bound_chain

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _fraction_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return f"{float(v):.7g}"


def _emit_manifest(args: argparse.Namespace, inputs: list[str], outputs: list[str]) -> None:
    from .kernels import backend_name

    manifest = {
        "command": args.command,
        "config": {
            k: v for k, v in vars(args).items() if k not in ("command", "func") and v is not None
        },
        "seed": getattr(args, "seed", None),
        "versions": {
            "prnet": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "kernel_backend": backend_name(),
        },
        "inputs": inputs,
        "outputs": outputs,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    text = json.dumps(manifest, indent=1, default=str)
    out = getattr(args, "out", None)
    if out and Path(out).is_dir():
        path = Path(out) / "manifest.json"
        path.write_text(text + "\n")
        _log(f"manifest: {path}")
    else:
        _log(text)


def _load(path: str):
    try:
        return load_network(path)
    except FileNotFoundError:
        _log(f"file not found: {path}")
        raise SystemExit(EXIT_USAGE)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        _log(f"cannot parse strategy file {path}: {exc}")
        raise SystemExit(EXIT_USAGE)


def _outdir(args) -> Path | None:
    out = getattr(args, "out", None)
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_validate(args) -> int:
    network = _load(args.strategy)
    report = validate(network)
    if report.ok:
        print("valid")
        _emit_manifest(args, [args.strategy], [])
        return EXIT_OK
    for violation in report.violations:
        print(f"violation: {violation}")
    _emit_manifest(args, [args.strategy], [])
    return EXIT_FAIL


def cmd_behavior(args) -> int:
    outputs: list[str] = []
    inputs: list[str] = []
    if args.quantum:
        behavior = quantum_behavior()
        name = "quantum"
    else:
        if not args.strategy:
            _log("a strategy file is required unless --quantum is given")
            return EXIT_USAGE
        network = _load(args.strategy)
        inputs.append(args.strategy)
        ordering = parse_ordering(args.ordering)
        if args.mode == "mc":
            behavior = simulate_rounds(network, ordering, rounds=args.rounds, seed=args.seed)
        else:
            behavior = induced_behavior(network, ordering)
        name = Path(args.strategy).stem
        if args.dump_joint:
            outdir = _outdir(args)
            if outdir is None:
                _log("--dump-joint needs --out")
                return EXIT_USAGE
            for xyz in range(8):
                settings = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
                joint = build_joint(network, settings, ordering)
                path = outdir / f"{name}.joint.{setting_label(xyz).replace(chr(39), 'p')}.csv"
                path.write_text(joint_to_csv(joint))
                outputs.append(str(path))
        if args.check_orderings:
            agree = sum(
                induced_behavior(network, ORDERINGS[label]).table == behavior.table
                for label in sorted(ORDERINGS)
            )
            print(f"{agree}/6 orderings identical")
            if agree != 6:
                return EXIT_FAIL
    outdir = _outdir(args)
    if outdir is not None:
        formats = args.format.split(",")
        if "json" in formats:
            path = outdir / f"{name}.behavior.json"
            path.write_text(json.dumps(behavior_to_json(behavior), indent=1) + "\n")
            outputs.append(str(path))
        if "csv" in formats:
            path = outdir / f"{name}.behavior.csv"
            path.write_text(behavior_to_csv(behavior))
            outputs.append(str(path))
    else:
        print(behavior_to_csv(behavior), end="")
    verdict = check_inequality(behavior)
    print(f"E(F) = {_fraction_str(verdict.value)}")
    if verdict.satisfies_bound:
        tight = " (tight)" if verdict.margin == 0 else ""
        print(f"bound satisfied{tight}")
    else:
        print(f"bound VIOLATED, margin {_fraction_str(verdict.margin)}")
    _emit_manifest(args, inputs, outputs)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str = "") -> None:
        checks.append((name, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail and not ok else ""))

    if not args.lp_only:
        network = _load(args.strategy)
        report = validate(network)
        record("well-formed", report.ok, "; ".join(report.violations))
        if not report.ok:
            _emit_manifest(args, [args.strategy], [])
            return EXIT_FAIL
        law_violations: list[str] = []
        for xyz in range(8):
            settings = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
            law_violations += verify_joint_laws(build_joint(network, settings))
        record("joint-laws", not law_violations, "; ".join(law_violations[:3]))
        ok_orderings = True
        details = []
        for xyz in range(8):
            settings = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
            ok, detail = check_ordering_invariance(network, settings)
            if not ok:
                ok_orderings = False
                details.append(detail or "")
        record("ordering-invariance", ok_orderings, "; ".join(details))
        ns = check_no_signaling(induced_behavior(network))
        record("no-signaling", ns.ok, "; ".join(ns.violations[:3]))
        chain = verify_bound_chain(network)
        failed = [k for k, v in chain.checks.items() if not v]
        record("bound-chain", chain.ok, "; ".join(failed))
        for note in chain.flagged:
            _log(f"note: {note}")
    if args.lp_only or not args.skip_lp:
        for outcome in ("+", "0"):
            sol = fixed_output_bound(outcome)
            ok = sol.status == "optimal" and sol.value == 1
            record(
                f"fixed-output-lp[{outcome}]",
                ok,
                f"status {sol.status}, value {sol.value}",
            )
            if ok and args.lp_only:
                print(f"  optimum: {_fraction_str(sol.value)} (exact)")
    all_ok = all(ok for _, ok, _ in checks)
    _emit_manifest(args, [args.strategy] if args.strategy else [], [])
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_transform(args) -> int:
    network = _load(args.strategy)
    report = verify_bound_chain(network)
    doc = report.to_json()
    outdir = _outdir(args)
    outputs = []
    if outdir is not None:
        path = outdir / "surgery.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        outputs.append(str(path))
        _log(f"surgery report: {path}")
    else:
        print(json.dumps(doc, indent=1))
    _emit_manifest(args, [args.strategy], outputs)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_lp(args) -> int:
    if args.objective == "fixed-output":
        if args.fixed == "none":
            program = chsh_variant_program(None)
        else:
            program = chsh_variant_program(args.fixed)
    else:
        program = min_bell_expectation_program()
    sol = solve(program)
    print(f"status: {sol.status}")
    if sol.status == "optimal":
        print(f"optimum: {_fraction_str(sol.value)} (exact, certificate verified)")
    outputs = []
    outdir = _outdir(args)
    if outdir is not None:
        path = outdir / "lp_solution.json"
        path.write_text(json.dumps(sol.to_json(), indent=1) + "\n")
        outputs.append(str(path))
        _log(f"solution: {path}")
    _emit_manifest(args, [], outputs)
    return EXIT_OK if sol.status == "optimal" else EXIT_FAIL


def cmd_search(args) -> int:
    counts = tuple(int(v) for v in args.counts.split(","))
    config = SearchConfig(
        counts=counts,  # type: ignore[arg-type]
        mode=args.mode,
        budget=args.budget,
        seed=args.seed,
        symmetry_reduction=not args.no_symmetry_reduction,
    )
    result = minimize_bell(config)
    print(f"mode: {result.label}")
    print(f"best E(F) = {_fraction_str(result.best_value)} over {result.evaluations} evaluations")
    for violation in result.violations:
        print(f"BOUND VIOLATION: {violation}")
    outputs = []
    outdir = _outdir(args)
    if outdir is not None:
        best_path = outdir / "best_network.json"
        save_network(result.best_network, best_path)
        behavior = induced_behavior(result.best_network)
        behavior_path = outdir / "best_behavior.json"
        behavior_path.write_text(json.dumps(behavior_to_json(behavior), indent=1) + "\n")
        hist_path = outdir / "histogram.csv"
        rows = ["value,count"] + [
            f"{_fraction_str(value)},{count}"
            for value, count in sorted(result.histogram.items())
        ]
        hist_path.write_text("\n".join(rows) + "\n")
        outputs += [str(best_path), str(behavior_path), str(hist_path)]
        _log(f"wrote {', '.join(outputs)}")
    _emit_manifest(args, [], outputs)
    return EXIT_OK if result.bound_holds else EXIT_FAIL


def cmd_sample(args) -> int:
    counts = tuple(int(v) for v in args.counts.split(","))
    network = sample_random_network(counts, args.seed)  # type: ignore[arg-type]
    if args.out:
        save_network(network, args.out)
        _log(f"wrote {args.out}")
        outputs = [args.out]
    else:
        print(json.dumps(network_to_json(network), indent=1))
        outputs = []
    _emit_manifest(args, [], outputs)
    return EXIT_OK


def cmd_simulate(args) -> int:
    network = _load(args.strategy)
    ordering = parse_ordering(args.ordering)
    empirical = simulate_rounds(network, ordering, rounds=args.rounds, seed=args.seed)
    exact = induced_behavior(network, ordering)
    worst = 0.0
    for xyz in range(8):
        for abc in range(8):
            worst = max(worst, abs(float(exact.table[xyz][abc]) - empirical.table[xyz][abc]))
    print(f"empirical E(F) = {_fraction_str(bell_expectation(empirical))}")
    print(f"exact     E(F) = {_fraction_str(bell_expectation(exact))}")
    print(f"max |empirical - exact| cell deviation = {worst:.6f}")
    outputs = []
    outdir = _outdir(args)
    if outdir is not None:
        path = outdir / "empirical.behavior.json"
        path.write_text(json.dumps(behavior_to_json(empirical), indent=1) + "\n")
        outputs.append(str(path))
        _log(f"wrote {path}")
    _emit_manifest(args, [args.strategy], outputs)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prnet",
        description="PR-box network simulator and Bell-bound verifier for the (3,2,2) scenario",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a strategy file for well-formedness")
    p.add_argument("strategy")
    p.add_argument("--out", help="directory for the run manifest")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("behavior", help="exact induced behavior and E(F)")
    p.add_argument("strategy", nargs="?")
    p.add_argument("--quantum", action="store_true", help="use the GHZ quantum table instead of a network")
    p.add_argument("--ordering", default="CAB", choices=sorted(ORDERINGS))
    p.add_argument("--check-orderings", action="store_true")
    p.add_argument("--mode", default="exact", choices=("exact", "mc"))
    p.add_argument("--rounds", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-joint", action="store_true",
                   help="also write the 8 per-setting joint supports as CSV")
    p.add_argument("--out")
    p.add_argument("--format", default="json,csv")
    p.set_defaults(func=cmd_behavior)

    p = sub.add_parser("verify", help="full verification report for a network")
    p.add_argument("strategy", nargs="?")
    p.add_argument("--lp-only", action="store_true")
    p.add_argument("--skip-lp", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transform", help="strategy surgeries and the bound chain report")
    p.add_argument("strategy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("lp", help="exact LPs over the no-signaling set")
    p.add_argument("--objective", default="fixed-output", choices=("fixed-output", "min-ef"))
    p.add_argument("--fixed", default="+", choices=("+", "0", "none"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("search", help="minimize E(F) over strategy space")
    p.add_argument("--counts", default="1,1,1")
    p.add_argument("--mode", default="exhaustive", choices=("exhaustive", "random", "local"))
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-symmetry-reduction", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sample", help="write a random well-formed network")
    p.add_argument("--counts", default="1,1,1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate", help="sequential Monte Carlo rounds")
    p.add_argument("strategy")
    p.add_argument("--rounds", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ordering", default="CAB", choices=sorted(ORDERINGS))
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "verify" and not args.lp_only and not args.strategy:
        _log("a strategy file is required unless --lp-only is given")
        return EXIT_USAGE
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    except ValueError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
