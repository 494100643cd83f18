"""Command-line front end.

    absynth synthesize task.json [--engine afta|cfta|enum] [...]
    absynth suite benchmarks/dir [--report out.csv] [...]

A task file is JSON with "domain", "examples" (input/output pairs in the
domain's value encoding), and optional per-task overrides: max_ast_size,
strengthen_k, engine, timeout_ms, and cost (operator_costs /
terminal_costs).  Command-line flags win over task-file overrides.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .domains import get_domain
from .enumeration import enum_synthesize
from .fta import construct_cfta
from .grammar import Example, ast_size, render_program
from .ranking import rank
from .refinement import LearnConfig, learn

CSV_COLUMNS = (
    "benchmark", "engine", "status", "T_syn_ms", "T_A_ms", "T_rank_ms",
    "T_I_ms", "T_other_ms", "iters", "Q_final", "Delta_final", "prog_size",
    "program",
)
NUMERIC_COLUMNS = (
    "T_syn_ms", "T_A_ms", "T_rank_ms", "T_I_ms", "T_other_ms", "iters",
    "Q_final", "Delta_final", "prog_size",
)
TERMINAL_STATUSES = {"solved", "no-program"}


@dataclass
class RunReport:
    benchmark: str
    engine: str
    status: str
    t_syn_ms: float = 0.0
    t_a_ms: float = 0.0
    t_rank_ms: float = 0.0
    t_i_ms: float = 0.0
    iters: int = 0
    q_final: int = 0
    delta_final: int = 0
    prog_size: Optional[int] = None
    program: str = ""

    @property
    def t_other_ms(self) -> float:
        return max(0.0, self.t_syn_ms - self.t_a_ms - self.t_rank_ms - self.t_i_ms)

    def row(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "engine": self.engine,
            "status": self.status,
            "T_syn_ms": f"{self.t_syn_ms:.1f}",
            "T_A_ms": f"{self.t_a_ms:.1f}",
            "T_rank_ms": f"{self.t_rank_ms:.1f}",
            "T_I_ms": f"{self.t_i_ms:.1f}",
            "T_other_ms": f"{self.t_other_ms:.1f}",
            "iters": self.iters,
            "Q_final": self.q_final,
            "Delta_final": self.delta_final,
            "prog_size": "" if self.prog_size is None else self.prog_size,
            "program": self.program,
        }


class BenchmarkError(ValueError):
    pass


def load_benchmark(path):
    """Parse and validate one task file; returns (domain, examples, overrides)."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BenchmarkError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict) or "domain" not in raw or "examples" not in raw:
        raise BenchmarkError(f"{path}: task files need 'domain' and 'examples'")
    try:
        # two passes: raw pairs to build the domain, then domain parsing
        pairs = [(ex["input"], ex["output"]) for ex in raw["examples"]]
    except (TypeError, KeyError) as exc:
        raise BenchmarkError(f"{path}: each example needs input and output") from exc
    if not pairs:
        raise BenchmarkError(f"{path}: at least one example is required")

    name = raw["domain"]
    try:
        probe = get_domain(name, [])
        examples = tuple(
            Example(probe.parse_value(i), probe.parse_value(o)) for i, o in pairs
        )
        domain = get_domain(name, examples)
    except ValueError as exc:
        raise BenchmarkError(f"{path}: {exc}") from exc

    overrides = {
        k: raw[k]
        for k in ("max_ast_size", "strengthen_k", "engine", "timeout_ms", "cost")
        if k in raw
    }
    return domain, examples, overrides


def run_benchmark(path, args) -> RunReport:
    domain, examples, overrides = load_benchmark(path)
    engine = args.engine or overrides.get("engine", "afta")
    if engine not in ("afta", "cfta", "enum"):
        raise BenchmarkError(f"{path}: unknown engine {engine!r}")

    cfg = LearnConfig(
        max_ast_size=(
            args.max_size if args.max_size is not None
            else overrides.get("max_ast_size", LearnConfig.max_ast_size)
        ),
        strengthen_k=(
            args.strengthen_k if args.strengthen_k is not None
            else overrides.get("strengthen_k", LearnConfig.strengthen_k)
        ),
        timeout_ms=(
            args.timeout_ms if args.timeout_ms is not None
            else overrides.get("timeout_ms")
        ),
        trace=args.trace,
    )
    cost_model = domain.cost_model()
    for attr in ("operator_costs", "terminal_costs"):
        getattr(cost_model, attr).update(overrides.get("cost", {}).get(attr, {}))

    name = Path(path).stem
    report = RunReport(benchmark=name, engine=engine, status="error")
    started = time.monotonic()
    deadline = (
        started + cfg.timeout_ms / 1000.0 if cfg.timeout_ms is not None else None
    )

    if engine == "afta":
        res = learn(examples, domain, cfg, cost_model=cost_model)
        report.status = res.status
        report.t_a_ms = res.t_afta * 1000
        report.t_rank_ms = res.t_rank * 1000
        report.t_i_ms = res.t_proof * 1000
        report.iters = len(res.iterations)
        report.q_final = res.num_states
        report.delta_final = res.num_transitions
        if res.program is not None:
            report.prog_size = ast_size(res.program)
            report.program = render_program(res.program)
    elif engine == "cfta":
        report.iters = 1
        try:
            t0 = time.monotonic()
            fta = construct_cfta(
                examples, domain.grammar, cfg.max_ast_size, domain,
                deadline=deadline,
            )
            report.t_a_ms = (time.monotonic() - t0) * 1000
            report.q_final = fta.num_states
            report.delta_final = fta.num_transitions
            t0 = time.monotonic()
            prog = rank(fta, cost_model)
            report.t_rank_ms = (time.monotonic() - t0) * 1000
            if prog is None:
                report.status = "no-program"
            else:
                report.status = "solved"
                report.prog_size = ast_size(prog)
                report.program = render_program(prog)
        except TimeoutError:
            report.status = "timeout"
    else:  # enum
        report.iters = 1
        try:
            prog, stats = enum_synthesize(
                examples, domain.grammar, cfg.max_ast_size, domain,
                cost_model=cost_model, deadline=deadline,
            )
            # no automaton here: Q counts equivalence classes, Delta the
            # programs enumerated
            report.q_final = stats.equivalence_classes
            report.delta_final = stats.programs_enumerated
            if prog is None:
                report.status = "no-program"
            else:
                report.status = "solved"
                report.prog_size = ast_size(prog)
                report.program = render_program(prog)
        except TimeoutError:
            report.status = "timeout"

    report.t_syn_ms = (time.monotonic() - started) * 1000
    return report


def _summary_rows(rows):
    out = []
    for label, agg in (("Median", statistics.median), ("Average", statistics.fmean)):
        row = {c: "" for c in CSV_COLUMNS}
        row["benchmark"] = label
        for col in NUMERIC_COLUMNS:
            vals = [float(r[col]) for r in rows if r[col] != ""]
            if vals:
                row[col] = f"{agg(vals):.1f}"
        out.append(row)
    return out


def write_report(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        for r in _summary_rows(rows):
            writer.writerow(r)


def _print_report(report: RunReport):
    print(f"{report.benchmark}: {report.status} [{report.engine}]")
    if report.program:
        print(f"  program: {report.program}")
        print(f"  size:    {report.prog_size}")
    print(
        f"  time:    {report.t_syn_ms:.1f} ms"
        f" (automata {report.t_a_ms:.1f}, ranking {report.t_rank_ms:.1f},"
        f" proofs {report.t_i_ms:.1f}, other {report.t_other_ms:.1f})"
    )
    print(
        f"  search:  {report.iters} iteration(s),"
        f" |Q|={report.q_final} |Delta|={report.delta_final}"
    )


def cmd_synthesize(args) -> int:
    try:
        report = run_benchmark(args.file, args)
    except BenchmarkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_report(report)
    if args.report:
        write_report([report.row()], args.report)
    return 0 if report.status in TERMINAL_STATUSES else 1


def cmd_suite(args) -> int:
    root = Path(args.dir)
    files = sorted(root.rglob("*.json"))
    if not files:
        print(f"error: no .json benchmarks under {root}", file=sys.stderr)
        return 2
    rows, ok = [], True
    for path in files:
        try:
            report = run_benchmark(path, args)
        except BenchmarkError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        _print_report(report)
        rows.append(report.row())
        ok = ok and report.status in TERMINAL_STATUSES
    if args.report:
        write_report(rows, args.report)
        print(f"report written to {args.report}")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="absynth",
        description="Example-driven program synthesis over tree automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--engine", choices=("afta", "cfta", "enum"))
        p.add_argument("--max-size", type=int, dest="max_size", metavar="N")
        p.add_argument("--strengthen-k", type=int, dest="strengthen_k", metavar="K")
        p.add_argument("--timeout-ms", type=int, dest="timeout_ms", metavar="T")
        p.add_argument("--trace", action="store_true")
        p.add_argument("--report", metavar="OUT.CSV")

    p_syn = sub.add_parser("synthesize", help="run one task file")
    p_syn.add_argument("file")
    common(p_syn)
    p_syn.set_defaults(func=cmd_synthesize)

    p_suite = sub.add_parser("suite", help="run every task file in a directory")
    p_suite.add_argument("dir")
    common(p_suite)
    p_suite.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.trace else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
