"""Command-line front end: chase runs, branch exploration, class
analysis, dependency transforms, cores, and the word-rewriting
reduction.

Exit codes: 0 success/terminated, 2 fuel exhausted or undecided,
3 constraint failure, 1 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .model import Instance, NULL, apply_atoms, core, null, render_atom
from .dsl import (
    DslError, parse_dependencies, parse_instance, parse_srs,
    render_dependency,
)
from .chase import ChaseConfig, explore_branches, run
from .rewrite import egds_to_tgds, enrich, semi_enrich, skolemize
from .classes import (
    is_ra, is_sd, is_sw, is_swa, is_wa, uniform_termination_semidecision,
)
from .strat import CycleCapExceeded, is_c_stratified, is_ir, is_stratified
from .srs import derivation_tree, rewrite_steps
from .srs import reduce as srs_reduce

DEFAULT_FUEL = 10_000
ALL_CLASSES = ("sw", "ra", "wa", "sd", "swa", "str", "cstr", "ir")


def _default_fuel() -> int:
    try:
        return int(os.environ["CHASEKIT_FUEL"])
    except (KeyError, ValueError):
        return DEFAULT_FUEL


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; we reserve 2 for fuel."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


### input/output helpers

def _usage_error(message: str):
    sys.stderr.write(f"error: {message}\n")
    raise SystemExit(1)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _usage_error(str(exc))


def _load_deps(path: str):
    try:
        return list(parse_dependencies(_read(path)))
    except DslError as exc:
        _usage_error(f"{path}: {exc}")


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except DslError as exc:
        _usage_error(f"{path}: {exc}")


def _load_srs(path: str):
    try:
        return parse_srs(_read(path))
    except DslError as exc:
        _usage_error(f"{path}: {exc}")


def _canonical(instance: Instance) -> Instance:
    """Renumber nulls ?n1, ?n2, ... in order of appearance so reports
    never leak internal null counters."""
    mapping: dict = {}

    def walk(t):
        if t.kind == NULL and t not in mapping:
            mapping[t] = null(f"n{len(mapping) + 1}")
        for s in getattr(t, "args", ()):
            walk(s)

    for a in instance:
        for t in a.args:
            walk(t)
    return Instance(apply_atoms(mapping, instance.atoms()))


def _rendered(instance: Instance) -> list:
    return [render_atom(a) for a in _canonical(instance)]


def _emit(args, report: dict, text: str):
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


def _trace_line(entry: dict) -> str:
    return "  ".join(f"{k}={v}" for k, v in entry.items())


### chase and branches

def _cmd_chase(args) -> int:
    deps = _load_deps(args.deps)
    inst = _load_instance(args.instance)
    try:
        cfg = ChaseConfig(variant=args.variant, strategy=args.strategy,
                          fuel=args.fuel)
    except ValueError as exc:
        _usage_error(str(exc))
    outcome = run(inst, deps, cfg)
    report = {
        "command": "chase",
        "variant": args.variant,
        "status": outcome.status,
        "steps": outcome.steps,
        "instance": _rendered(outcome.result),
    }
    if outcome.failure is not None:
        report["failure"] = outcome.failure.reason
    if args.trace:
        report["trace"] = outcome.trace
    lines = [f"status: {report['status']}", f"steps: {report['steps']}"]
    if "failure" in report:
        lines.append(f"failure: {report['failure']}")
    lines.append("instance:")
    lines += [f"  {a}" for a in report["instance"]]
    if args.trace:
        lines.append("trace:")
        lines += [f"  {_trace_line(e)}" for e in report["trace"]]
    _emit(args, report, "\n".join(lines))
    return {"terminated": 0, "fuel_exhausted": 2, "failed": 3}[outcome.status]


def _cmd_branches(args) -> int:
    deps = _load_deps(args.deps)
    inst = _load_instance(args.instance)
    summary = explore_branches(inst, deps, variant=args.variant,
                               fuel=args.fuel,
                               max_branches=args.max_branches)
    report = {
        "command": "branches",
        "variant": args.variant,
        "total": summary.total,
        "terminated": summary.terminated,
        "failed": summary.failed,
        "fuel_exhausted": summary.fuel_exhausted,
        "truncated": summary.truncated,
    }
    lines = [f"branches: {summary.total}"
             + (" (truncated)" if summary.truncated else ""),
             f"terminated: {summary.terminated}",
             f"failed: {summary.failed}",
             f"fuel_exhausted: {summary.fuel_exhausted}"]
    _emit(args, report, "\n".join(lines))
    return 0


### class analysis

def _run_class(name: str, deps):
    if name == "sw":
        return is_sw(deps)
    if name == "ra":
        return is_ra(deps)
    if name == "wa":
        return is_wa(deps)
    if name == "sd":
        return is_sd(deps)
    if name == "swa":
        return is_swa(deps)
    if name == "str":
        return is_stratified(deps)
    if name == "cstr":
        return is_c_stratified(deps)
    return is_ir(deps)


def _fmt_positions(cycle) -> list:
    return [f"{rel}.{idx}" for rel, idx in cycle]


def _fmt_cert(name: str, cert, deps):
    labels = [d.label for d in deps]
    if name in ("sw", "ra", "wa", "sd"):
        return {"cycle": _fmt_positions(cert)}
    if name == "swa":
        return {"cycle": [labels[i] for i in cert]}
    if name in ("str", "cstr"):
        return {"cycle": [labels[i] for i in cert["cycle"]],
                "stratum": [labels[i] for i in cert["stratum"]],
                "wa_cycle": _fmt_positions(cert["wa_cycle"])}
    return {"part": list(cert["part"]),
            "sd_cycle": _fmt_positions(cert["sd_cycle"])}


def _cert_text(cert: dict) -> str:
    if "cycle" in cert:
        return "cycle: " + " -> ".join(cert["cycle"])
    return "part: " + ", ".join(cert["part"])


def _cmd_analyze(args) -> int:
    deps = _load_deps(args.deps)
    if args.rewrite_egds:
        try:
            deps = list(egds_to_tgds(deps))
        except ValueError as exc:
            _usage_error(str(exc))
    selected = ([c.strip() for c in args.classes.split(",")]
                if args.classes else list(ALL_CLASSES))
    for name in selected:
        if name not in ALL_CLASSES:
            _usage_error(f"unknown class {name!r} "
                         f"(choose from {', '.join(ALL_CLASSES)})")
    results: dict = {}
    lines = []
    code = 0
    for name in selected:
        try:
            ok, cert = _run_class(name, deps)
        except CycleCapExceeded as exc:
            results[name] = {"result": "undecided", "reason": str(exc)}
            lines.append(f"{name}: UNDECIDED ({exc})")
            code = 2
            continue
        except ValueError as exc:
            _usage_error(str(exc))
        entry: dict = {"result": ok}
        line = f"{name}: {'YES' if ok else 'NO'}"
        if cert is not None:
            entry["certificate"] = _fmt_cert(name, cert, deps)
            line += f"  ({_cert_text(entry['certificate'])})"
        results[name] = entry
        lines.append(line)
    _emit(args, {"command": "analyze", "classes": results}, "\n".join(lines))
    return code


### transforms

def _prov_text(prov: dict, labels) -> str:
    rule = prov.get("rule")
    src = prov.get("source")
    origin = None
    if isinstance(src, int):
        origin = labels[src] if labels is not None else f"rule {src + 1}"
    if rule == "copy":
        return f"copy of {origin}"
    if rule == "egd-encoding":
        return f"equality encoding of {origin}"
    if rule == "substitution":
        return (f"substitution for {prov['relation']} "
                f"position {prov['position']}")
    if rule in ("enrich", "semi-enrich"):
        return f"{rule} of {origin} via {prov['marker']}"
    if rule and rule.startswith("skolem"):
        return f"{rule} of {origin}"
    if rule == "theta":
        txt = f"simulation of rewrite {origin}"
        if prov.get("degenerate"):
            txt += " (empty right-hand side)"
        return txt
    if rule == "lr":
        return f"context copy {prov['name']}"
    if rule == "ad":
        return "domain collection"
    if rule == "tc":
        return "transitive closure"
    if rule == "sat":
        return "cycle saturation"
    if rule == "denial":
        return "cycle failure"
    return ", ".join(f"{k}={v}" for k, v in prov.items())


def _render_transformed(out, labels) -> str:
    lines = []
    for dep, prov in zip(out.deps, out.provenance):
        lines.append("# " + _prov_text(prov, labels))
        lines.append(render_dependency(dep))
    return "\n".join(lines)


def _cmd_rewrite(args) -> int:
    deps = _load_deps(args.deps)
    try:
        if args.mode == "egd2tgd":
            out = egds_to_tgds(deps)
        elif args.mode == "enrich":
            out = enrich(deps)
        elif args.mode == "semienrich":
            out = semi_enrich(deps)
        elif args.mode == "skolem-obl":
            out = skolemize(deps, "obl")
        else:
            out = skolemize(deps, "sobl")
    except ValueError as exc:
        _usage_error(str(exc))
    labels = [d.label for d in deps]
    report = {"command": "rewrite", "mode": args.mode,
              "deps": [render_dependency(d) for d in out.deps],
              "provenance": out.provenance}
    _emit(args, report, _render_transformed(out, labels))
    return 0


def _cmd_core(args) -> int:
    inst = _load_instance(args.instance)
    result = core(inst)
    report = {"command": "core", "size": len(result),
              "instance": _rendered(result)}
    _emit(args, report, "\n".join(report["instance"]))
    return 0


def _cmd_critical(args) -> int:
    deps = _load_deps(args.deps)
    try:
        verdict = uniform_termination_semidecision(deps, variant=args.variant,
                                                   fuel=args.fuel)
    except ValueError as exc:
        _usage_error(str(exc))
    _emit(args, {"command": "critical", "variant": args.variant,
                 "verdict": verdict}, verdict)
    return 0 if verdict == "terminates_all" else 2


### word rewriting

def _cmd_reduce(args) -> int:
    srs = _load_srs(args.srs)
    try:
        out = srs_reduce(srs, args.mode)
    except ValueError as exc:
        _usage_error(str(exc))
    report = {"command": "reduce", "mode": args.mode,
              "deps": [render_dependency(d) for d in out.deps],
              "provenance": out.provenance}
    _emit(args, report, _render_transformed(out, None))
    return 0


def _cmd_derive(args) -> int:
    srs = _load_srs(args.srs)
    tree, status = derivation_tree(args.word, srs, args.depth,
                                   node_cap=args.node_cap)
    normal_forms = sorted({leaf.word for leaf in tree.leaves()
                           if not rewrite_steps(leaf.word, srs)})
    report = {"command": "derive", "word": args.word, "depth": args.depth,
              "nodes": tree.size(), "status": status,
              "normal_forms": normal_forms}
    lines = [f"word: {args.word}", f"nodes: {tree.size()}",
             f"status: {status}",
             "normal forms: " + (", ".join(normal_forms) or "(none)")]
    _emit(args, report, "\n".join(lines))
    return 0 if status == "complete" else 2


### wiring

def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="chasekit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--json", action="store_true",
                       help="machine-readable report")
        p.set_defaults(func=fn)
        return p

    p = add("chase", _cmd_chase, help="run a chase variant to completion")
    p.add_argument("--deps", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--variant", choices=("std", "obl", "sobl", "core"),
                   default="std")
    p.add_argument("--strategy", default="fifo",
                   help="fifo or random:SEED")
    p.add_argument("--fuel", type=int, default=_default_fuel())
    p.add_argument("--trace", action="store_true")

    p = add("branches", _cmd_branches,
            help="explore all trigger orders of a nondeterministic chase")
    p.add_argument("--deps", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--variant", choices=("std", "obl", "sobl"),
                   default="std")
    p.add_argument("--fuel", type=int, default=20)
    p.add_argument("--max-branches", type=int, default=1000)

    p = add("analyze", _cmd_analyze,
            help="decide membership in termination classes")
    p.add_argument("--deps", required=True)
    p.add_argument("--classes",
                   help="comma list from " + ",".join(ALL_CLASSES))
    p.add_argument("--rewrite-egds", action="store_true",
                   help="encode equality constraints as tgds first")

    p = add("rewrite", _cmd_rewrite, help="transform a dependency set")
    p.add_argument("--deps", required=True)
    p.add_argument("--mode", required=True,
                   choices=("egd2tgd", "enrich", "semienrich",
                            "skolem-obl", "skolem-sobl"))

    p = add("core", _cmd_core, help="compute the core of an instance")
    p.add_argument("--instance", required=True)

    p = add("critical", _cmd_critical,
            help="semi-decide uniform termination on the critical instance")
    p.add_argument("--deps", required=True)
    p.add_argument("--variant", choices=("obl", "sobl"), default="sobl")
    p.add_argument("--fuel", type=int, default=_default_fuel())

    p = add("reduce", _cmd_reduce,
            help="compile a word rewriting system into dependencies")
    p.add_argument("--srs", required=True)
    p.add_argument("--mode", choices=("basic", "full", "denial"),
                   default="basic")

    p = add("derive", _cmd_derive,
            help="explore a bounded derivation tree of a word")
    p.add_argument("--srs", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--node-cap", type=int, default=10_000)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return 0 if code in (0, None) else int(code)


if __name__ == "__main__":
    sys.exit(main())
