"""Command-line entry point: encode, plan, validate, oracle, stats, solve, fixture."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .cnf import TRANSITION, CliqueMode, Status, read_dimacs, write_dimacs
from .errors import EncodingError, OracleOverflow, SasePlanError, SolverUnknownError, UnsatisfiableEncoding
from .fixtures import FIXTURES
from .planner import PE, SASE, PeOptions, encode, oracle_makespan, plan, validate_plan, write_telemetry
from .plans import read_plan, write_plan
from .sas_model import read_sas_file, write_sas
from .sase import SaseOptions
from .solver import SolverConfig, format_solver_output, read_decision_log, solve_clauses, write_decision_log
from .stats import (
    DEFAULT_PERCENTILES,
    branching_frequency,
    h_values,
    summary_rows,
    transition_index,
    write_branching_csv,
    write_counters_csv,
    write_summary_csv,
    write_transition_index_csv,
)
from .transitions import extract_transitions

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_UNSOLVABLE = 10
EXIT_INPUT = 20
EXIT_UNKNOWN = 30

log = logging.getLogger("sasesat")


class InputError(Exception):
    pass


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _percentiles(text):
    try:
        values = [float(p) if "." in p else int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad percentile list {text!r}")
    if not values or any(not 0 < p <= 100 for p in values):
        raise argparse.ArgumentTypeError("percentiles must lie in (0, 100]")
    return values


def _add_encoding_flags(p):
    p.add_argument("--sas", required=True, help="SAS+ task file (translator output format)")
    p.add_argument("--encoding", choices=(SASE, PE), default=SASE)
    p.add_argument("--clique", choices=[m.value for m in CliqueMode], default=CliqueMode.BINARY.value)
    p.add_argument("--no-reduce-subsumed", action="store_true")
    p.add_argument("--no-reduce-unary-transition", action="store_true")
    p.add_argument("--no-reduce-unary-difference", action="store_true")
    p.add_argument("--fact-mutex", action="store_true", help="pe only: add fact mutex clauses")
    p.add_argument("--competing-needs", action="store_true", help="pe only: add competing-needs action mutexes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sasesat", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write the CNF for one horizon")
    _add_encoding_flags(p)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-comments", action="store_true", help="omit the variable key-map comments")

    p = sub.add_parser("plan", help="search horizons 1..N for a plan")
    _add_encoding_flags(p)
    p.add_argument("--max-horizon", type=_positive, default=50)
    p.add_argument("--solver", default="embedded", help='"embedded" or external:"CMD {cnf}"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plan-out", required=True)
    p.add_argument("--telemetry")

    p = sub.add_parser("validate", help="check a parallel plan against a task")
    p.add_argument("--sas", required=True)
    p.add_argument("--plan", required=True)

    p = sub.add_parser("oracle", help="brute-force optimal makespan (small tasks only)")
    p.add_argument("--sas", required=True)
    p.add_argument("--max-horizon", type=_positive, default=20)

    p = sub.add_parser("stats", help="h-value, transition-index and branching statistics")
    _add_encoding_flags(p)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--percentiles", type=_percentiles, default=list(DEFAULT_PERCENTILES))
    p.add_argument("--branch-log", help="solve the instance and write its decision log here")
    p.add_argument("--epoch", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("solve", help="solve a DIMACS file, printing SAT-competition output")
    p.add_argument("cnf")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fixture", help="export a built-in task as a SAS+ file")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--out", required=True)
    return parser


def _load_task(path):
    try:
        return read_sas_file(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")


def _options(args):
    if args.encoding == SASE:
        return SaseOptions(
            CliqueMode(args.clique),
            not args.no_reduce_subsumed,
            not args.no_reduce_unary_transition,
            not args.no_reduce_unary_difference,
        )
    return PeOptions(args.fact_mutex, args.competing_needs)


def _solver_config(spec, seed):
    if spec == "embedded":
        return SolverConfig(seed=seed)
    if spec.startswith("external:"):
        command = spec[len("external:") :].strip()
        if "{cnf}" not in command:
            command += " {cnf}"
        return SolverConfig(engine="external", command=command, seed=seed)
    raise InputError(f"--solver must be 'embedded' or 'external:CMD', got {spec!r}")


def _cmd_encode(args):
    if args.horizon < 1:
        raise InputError(f"--horizon must be >= 1, got {args.horizon}")
    task = _load_task(args.sas)
    table = extract_transitions(task)
    try:
        inst = encode(task, table, args.horizon, args.encoding, _options(args))
    except UnsatisfiableEncoding as exc:
        print(f"unsatisfiable at every horizon: {exc}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    with open(args.out, "w", encoding="ascii", newline="\n") as fh:
        write_dimacs(inst, fh, comments=not args.no_comments)
    print(f"{inst.var_count} variables, {len(inst.clauses)} clauses", file=sys.stderr)
    return EXIT_OK


def _cmd_plan(args):
    task = _load_task(args.sas)
    cfg = _solver_config(args.solver, args.seed)
    outcome = plan(task, args.encoding, _options(args), cfg, n_max=args.max_horizon)
    if args.telemetry:
        with open(args.telemetry, "w", encoding="utf-8", newline="\n") as fh:
            write_telemetry(outcome, fh)
    if not outcome.solved:
        print(f"no plan with makespan <= {args.max_horizon}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    with open(args.plan_out, "w", encoding="utf-8", newline="\n") as fh:
        write_plan(outcome.plan, task, fh)
    print(f"plan found: makespan {outcome.makespan}, {outcome.plan.action_count} actions", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args):
    task = _load_task(args.sas)
    try:
        text = Path(args.plan).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.plan}: {exc.strerror}")
    verdict = validate_plan(task, extract_transitions(task), read_plan(text, task))
    if not verdict:
        print(f"plan rejected: {verdict.diagnostic}", file=sys.stderr)
        return EXIT_REJECTED
    print("plan valid", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args):
    task = _load_task(args.sas)
    try:
        n = oracle_makespan(task, n_bound=args.max_horizon)
    except OracleOverflow as exc:
        raise InputError(str(exc))
    if n is None:
        print(f"no plan with makespan <= {args.max_horizon}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    print(n)
    return EXIT_OK


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _cmd_stats(args):
    if args.horizon < 1:
        raise InputError(f"--horizon must be >= 1, got {args.horizon}")
    task = _load_task(args.sas)
    table = extract_transitions(task)
    try:
        inst = encode(task, table, args.horizon, args.encoding, _options(args))
    except UnsatisfiableEncoding as exc:
        print(f"unsatisfiable at every horizon: {exc}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    profile = h_values(inst)
    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        write_summary_csv(summary_rows(profile, args.percentiles), fh)
    series = []
    if profile.of_role(TRANSITION):
        series = [(p, transition_index(profile, p)) for p in args.percentiles]
        with open(_sibling(out, ".tindex.csv"), "w", encoding="utf-8", newline="\n") as fh:
            write_transition_index_csv(series, fh)
    else:
        print("no transition variables; transition index skipped", file=sys.stderr)
    counters = dict(inst.meta)
    counters.update(variables=inst.var_count, clauses=len(inst.clauses))
    counters.update({f"class_{c}": len(ix) for c, ix in sorted(inst.classes.items())})

    counts = None
    if args.branch_log:
        result = solve_clauses(inst.var_count, inst.clauses, SolverConfig(seed=args.seed, decision_log=True))
        with open(args.branch_log, "w", encoding="utf-8", newline="\n") as fh:
            write_decision_log(result, inst, fh)
        counters.update(status=result.status.value, decisions=result.stats.decisions, conflicts=result.stats.conflicts)
        with open(args.branch_log, encoding="utf-8") as fh:
            decisions = read_decision_log(fh)
        if decisions:
            counts = branching_frequency(decisions, profile.roles, args.epoch)
            with open(_sibling(out, ".branching.csv"), "w", encoding="utf-8", newline="\n") as fh:
                write_branching_csv(counts, fh)
        else:
            print("solver made no decisions; branching statistics skipped", file=sys.stderr)

    with open(_sibling(out, ".counters.csv"), "w", encoding="utf-8", newline="\n") as fh:
        write_counters_csv(counters, fh)

    if not args.no_figures:
        from .plotting import plot_branching, plot_h_distribution, plot_transition_index

        plot_h_distribution(profile, _sibling(out, ".h.png"))
        if series:
            plot_transition_index(series, _sibling(out, ".tindex.png"))
        if counts is not None and counts.epochs:
            plot_branching(counts, _sibling(out, ".branching.png"))
    return EXIT_OK


def _cmd_solve(args):
    try:
        inst = read_dimacs(Path(args.cnf).read_text(encoding="ascii"))
    except OSError as exc:
        raise InputError(f"cannot read {args.cnf}: {exc.strerror}")
    result = solve_clauses(inst.var_count, inst.clauses, SolverConfig(seed=args.seed))
    sys.stdout.write(format_solver_output(result, inst.var_count))
    return {Status.SAT: 10, Status.UNSAT: 20}.get(result.status, 0)


def _cmd_fixture(args):
    Path(args.out).write_text(write_sas(FIXTURES[args.name]()), encoding="utf-8")
    return EXIT_OK


COMMANDS = {
    "encode": _cmd_encode,
    "plan": _cmd_plan,
    "validate": _cmd_validate,
    "oracle": _cmd_oracle,
    "stats": _cmd_stats,
    "solve": _cmd_solve,
    "fixture": _cmd_fixture,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except SolverUnknownError as exc:
        print(f"solver UNKNOWN: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (InputError, EncodingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SasePlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())
