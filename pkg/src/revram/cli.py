"""Command-line entry point: ``revram <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import kernels
from .gates import CatalogError, builtin_gate, index_to_bits, is_bijective
from .netlist import Netlist, NetlistError, check_reversibility, metrics
from .qalgebra import search_min_decomposition, verify_decomposition
from .report import report_improvements
from .revfmt import NetlistParseError, parse, serialize
from .sim import differential_test, parse_script, run_script, validate_script
from .synth import RamConfig, build_decoder, build_dff, build_msdff_we, build_rram


class CliError(Exception):
    pass


def _emit(args, payload) -> None:
    if args.format == "json" and not isinstance(payload, str):
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = payload if isinstance(payload, str) else json.dumps(payload) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def metrics_report(netlist: Netlist, n=None, m=None, delay_model: str = "depth") -> dict:
    r = metrics(netlist, delay_model)
    out = {"name": netlist.name, "n": n, "m": m}
    out.update(r.as_dict())
    return out


def _read_netlist(path: str) -> Netlist:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"file not found: {path}")
    try:
        return parse(p.read_text())
    except NetlistParseError as exc:
        raise CliError(f"{path}:{exc}") from None


# --- gate -------------------------------------------------------------------

def cmd_gate(args) -> None:
    spec = builtin_gate(args.name)
    if args.action == "verify":
        verdict = verify_decomposition(spec)
        if args.format == "json":
            _emit(args, {"gate": spec.name, "verdict": verdict})
        else:
            _emit(args, f"{spec.name}: {verdict}\n")
        return
    rows = []
    for i, o in enumerate(spec.permutation):
        rows.append(("".join(map(str, index_to_bits(i, spec.width))),
                     "".join(map(str, index_to_bits(o, spec.width)))))
    info = {
        "gate": spec.name,
        "mnemonic": spec.mnemonic,
        "width": spec.width,
        "quantum_cost": spec.quantum_cost,
        "delay": spec.delay,
        "bijective": is_bijective(spec),
        "truth_table": [list(r) for r in rows],
    }
    if args.format == "json":
        _emit(args, info)
        return
    lines = [
        f"gate: {spec.name} ({spec.mnemonic or '-'})",
        f"width: {spec.width}",
        f"cost: {spec.quantum_cost}",
        f"delay: {spec.delay}",
        f"bijective: {'yes' if info['bijective'] else 'no'}",
    ]
    if spec.note:
        lines.append(f"note: {spec.note}")
    lines.append("truth table:")
    lines.extend(f"  {a} -> {b}" for a, b in rows)
    _emit(args, "\n".join(lines) + "\n")


# --- search -----------------------------------------------------------------

def cmd_search(args) -> None:
    spec = builtin_gate(args.name)
    start = time.perf_counter()
    try:
        seq = search_min_decomposition(spec, args.max_len)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    elapsed = time.perf_counter() - start
    if args.format == "json":
        _emit(args, {
            "gate": spec.name,
            "max_len": args.max_len,
            "found": seq is not None,
            "length": None if seq is None else len(seq),
            "sequence": None if seq is None else [str(op) for op in seq],
            "seconds": round(elapsed, 3),
        })
        return
    body = "NONE" if seq is None else " ".join(str(op) for op in seq) or "(identity)"
    _emit(args, f"{spec.name} max_len={args.max_len}: {body}\ntime: {elapsed:.3f}s\n")


# --- synth / metrics / check --------------------------------------------------

def cmd_synth(args) -> None:
    n = m = None
    if args.what == "decoder":
        n = args.n
        netlist = build_decoder(args.n)
    elif args.what == "dff":
        netlist = build_dff()
    elif args.what == "msdff":
        netlist = build_msdff_we(for_ram=args.for_ram)
    else:
        n, m = args.n, args.m
        netlist = build_rram(RamConfig(args.n, args.m, args.variant))
    report = metrics_report(netlist, n, m, args.delay_model)
    if args.metrics:
        Path(args.metrics).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    _emit(args, report if args.format == "json" else serialize(netlist))


def cmd_metrics(args) -> None:
    netlist = _read_netlist(args.file)
    report = metrics_report(netlist, delay_model=args.delay_model)
    if args.format == "json":
        _emit(args, report)
    else:
        _emit(args, "".join(f"{k}: {v}\n" for k, v in report.items()))


def cmd_check(args) -> Optional[int]:
    netlist = _read_netlist(args.file)
    try:
        verdict = check_reversibility(netlist)
    except NetlistError as exc:
        raise CliError(str(exc)) from None
    if args.format == "json":
        _emit(args, {
            "name": netlist.name,
            "reversible": verdict.reversible,
            "free_lines": verdict.free_lines,
            "assignments": verdict.assignments,
            "collision": None if verdict.collision is None else list(verdict.collision),
        })
    else:
        word = "reversible" if verdict.reversible else f"NOT reversible (collision {verdict.collision})"
        _emit(args, f"{netlist.name}: {word} over {verdict.assignments} assignments\n")
    if not verdict.reversible:
        return 1


# --- sim / improvements -------------------------------------------------------

def cmd_sim(args) -> None:
    config = RamConfig(args.n, args.m, args.variant)
    if args.what == "ram":
        p = Path(args.script)
        if not p.is_file():
            raise CliError(f"file not found: {args.script}")
        script = validate_script(config, parse_script(p.read_text(), config.m))
        reads = run_script(config, script)
        if args.format == "json":
            _emit(args, {"reads": ["".join(map(str, r)) for r in reads]})
        else:
            _emit(args, "".join("".join(map(str, r)) + "\n" for r in reads))
        return
    rep = differential_test(config, args.scripts, args.ops, args.seed)
    summary = {
        "variant": config.variant,
        "n": config.n,
        "m": config.m,
        "scripts": rep.scripts,
        "ops": rep.ops,
        "seed": args.seed,
        "read_divergences": rep.read_divergences,
        "state_divergences": rep.state_divergences,
        "refresh_violations": rep.refresh_violations,
        "first_divergence": rep.first_divergence,
        "ok": rep.ok,
    }
    if args.format == "json":
        _emit(args, summary)
    else:
        status = "OK" if rep.ok else "DIVERGED"
        _emit(args, "".join(f"{k}: {v}\n" for k, v in summary.items()) + status + "\n")


def cmd_improvements(args) -> Optional[int]:
    rows = report_improvements()
    if args.format == "json":
        _emit(args, [
            {"design": r.design, "reference": r.reference, "metric": r.metric,
             "ours": r.ours, "baseline": r.baseline, "percent": r.percent,
             "printed": r.printed, "matches": r.matches}
            for r in rows
        ])
    else:
        out = [f"{'design':<14}{'ref':<6}{'metric':<14}{'ours':>5}{'base':>6}{'%':>5}{'printed':>9}"]
        for r in rows:
            flag = "" if r.matches else "  MISMATCH"
            out.append(f"{r.design:<14}{r.reference:<6}{r.metric:<14}{r.ours:>5}{r.baseline:>6}"
                       f"{r.percent:>5}{str(r.printed):>9}{flag}")
        _emit(args, "\n".join(out) + "\n")
    if not all(r.matches for r in rows):
        return 1


def cmd_backend(args) -> None:
    _emit(args, f"{kernels.BACKEND}\n")


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    delay = argparse.ArgumentParser(add_help=False)
    delay.add_argument("--delay-model", choices=("depth", "unit"), default="depth",
                       help="'unit' counts gates on the longest path, for comparison only")

    parser = argparse.ArgumentParser(prog="revram", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gate = sub.add_parser("gate", help="gate catalog queries")
    gsub = gate.add_subparsers(dest="action", required=True)
    for action in ("info", "verify"):
        p = gsub.add_parser(action, parents=[common])
        p.add_argument("name")
        p.set_defaults(func=cmd_gate)

    search = sub.add_parser("search", help="minimal decomposition search")
    ssub = search.add_subparsers(dest="action", required=True)
    p = ssub.add_parser("decomposition", parents=[common])
    p.add_argument("name")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_search)

    synth = sub.add_parser("synth", help="generate a netlist")
    ysub = synth.add_subparsers(dest="what", required=True)
    p = ysub.add_parser("decoder", parents=[common, delay])
    p.add_argument("-n", type=int, required=True)
    ysub.add_parser("dff", parents=[common, delay])
    p2 = ysub.add_parser("msdff", parents=[common, delay])
    p2.add_argument("--for-ram", action="store_true")
    p3 = ysub.add_parser("ram", parents=[common, delay])
    p3.add_argument("-n", type=int, required=True)
    p3.add_argument("-m", type=int, required=True)
    p3.add_argument("--variant", choices=("paper", "functional"), default="paper")
    for sp in ysub.choices.values():
        sp.add_argument("--metrics", metavar="FILE", help="also write the JSON metrics report")
        sp.set_defaults(func=cmd_synth)

    p = sub.add_parser("metrics", parents=[common, delay], help="metrics of a netlist file")
    p.add_argument("file")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("check", parents=[common], help="exhaustive reversibility check")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    sim = sub.add_parser("sim", help="clocked RAM simulation")
    msub = sim.add_subparsers(dest="what", required=True)
    for what in ("ram", "fuzz"):
        p = msub.add_parser(what, parents=[common])
        p.add_argument("-n", type=int, required=True)
        p.add_argument("-m", type=int, required=True)
        p.add_argument("--variant", choices=("paper", "functional"), default="functional")
        if what == "ram":
            p.add_argument("--script", required=True, metavar="FILE")
        else:
            p.add_argument("--scripts", type=int, default=100)
            p.add_argument("--ops", type=int, default=32)
            p.add_argument("--seed", type=int, default=7)
        p.set_defaults(func=cmd_sim)

    p = sub.add_parser("improvements", parents=[common], help="recompute improvement table")
    p.set_defaults(func=cmd_improvements)

    p = sub.add_parser("backend", parents=[common], help="show the active kernel backend")
    p.set_defaults(func=cmd_backend)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args)
    except (CliError, CatalogError, ValueError, NetlistError) as exc:
        msg = exc.args[0] if isinstance(exc, CatalogError) and exc.args else str(exc)
        print(f"revram: error: {msg}", file=sys.stderr)
        return 2
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
