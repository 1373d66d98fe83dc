"""Incremental-horizon planning loop, plan validation and a brute-force makespan oracle."""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, TextIO

from .cnf import CnfInstance, Status
from .errors import OracleOverflow, SolverUnknownError, UnsatisfiableEncoding
from .pe import decode_pe, derive_strips, encode_pe
from .plans import ParallelPlan
from .sas_model import SasTask
from .sase import SaseOptions, decode_sase, encode_sase
from .solver import SolverConfig, SolveResult, solve
from .transitions import (
    TransitionTable,
    action_applicable,
    apply_actions,
    extract_transitions,
    s_mutex,
    s_mutex_matrix,
)

log = logging.getLogger(__name__)

SASE = "sase"
PE = "pe"


@dataclass
class PeOptions:
    fact_mutex: bool = False
    competing_needs: bool = False


@dataclass
class HorizonRecord:
    horizon: int
    variables: int
    clauses: int
    decisions: int
    conflicts: int
    status: Status
    wall_time_ms: float


@dataclass
class PlanOutcome:
    plan: ParallelPlan | None
    n_max: int
    records: list[HorizonRecord] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.plan is not None

    @property
    def makespan(self) -> int | None:
        return None if self.plan is None else self.plan.makespan

    @property
    def status(self) -> str:
        return "PLAN" if self.solved else "UNSOLVABLE_WITHIN"


def encode(task: SasTask, table: TransitionTable, horizon: int, encoding: str = SASE, opts=None) -> CnfInstance:
    """Encode ``task`` at ``horizon`` under either scheme."""
    if encoding == SASE:
        return encode_sase(task, table, horizon, opts if isinstance(opts, SaseOptions) else None)
    if encoding == PE:
        opts = opts if isinstance(opts, PeOptions) else PeOptions()
        return encode_pe(derive_strips(task, table), table, horizon, opts.fact_mutex, opts.competing_needs)
    raise ValueError(f"unknown encoding {encoding!r}")


def decode(result: SolveResult, inst: CnfInstance) -> ParallelPlan:
    if inst.meta.get("encoding") == PE:
        return decode_pe(result.assignment, inst)
    return decode_sase(result.assignment, inst)


def solve_horizon(task, table, horizon, encoding=SASE, opts=None, solver_cfg=None):
    """Encode and solve a single horizon; returns (instance or None, result)."""
    try:
        inst = encode(task, table, horizon, encoding, opts)
    except UnsatisfiableEncoding as exc:
        return None, SolveResult(Status.UNSAT, diagnostic=str(exc))
    return inst, solve(inst, solver_cfg)


def plan(
    task: SasTask,
    encoding: str = SASE,
    opts=None,
    solver_cfg: SolverConfig | None = None,
    n_max: int = 50,
    table: TransitionTable | None = None,
) -> PlanOutcome:
    """Try horizons 1, 2, ... n_max and return the first plan found."""
    table = table or extract_transitions(task)
    outcome = PlanOutcome(None, n_max)
    if task.goal_satisfied(task.initial):
        outcome.plan = ParallelPlan(())
        return outcome
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        inst, result = solve_horizon(task, table, n, encoding, opts, solver_cfg)
        elapsed = (time.perf_counter() - start) * 1000.0
        outcome.records.append(
            HorizonRecord(
                n,
                inst.var_count if inst else 0,
                len(inst.clauses) if inst else 0,
                result.stats.decisions,
                result.stats.conflicts,
                result.status,
                elapsed,
            )
        )
        log.info("horizon %d: %s", n, result.status.value)
        if result.status is Status.UNKNOWN:
            raise SolverUnknownError(f"solver returned UNKNOWN at horizon {n}: {result.diagnostic}")
        if result.status is Status.SAT:
            outcome.plan = decode(result, inst)
            return outcome
    return outcome


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    diagnostic: str = ""

    def __bool__(self):
        return self.accepted


def validate_plan(task: SasTask, table: TransitionTable, plan: ParallelPlan) -> Verdict:
    state = task.initial
    for t, step in enumerate(plan.steps, 1):
        for a, b in combinations(sorted(step), 2):
            if s_mutex(a, b, table):
                return Verdict(
                    False, f"step {t}: {task.operators[a].name} and {task.operators[b].name} are S-mutex"
                )
        for a in sorted(step):
            if not action_applicable(task, a, state):
                return Verdict(False, f"step {t}: {task.operators[a].name} is not applicable")
        state = apply_actions(task, state, step)
    if not task.goal_satisfied(state):
        missing = [task.fact_name(v, d) for v, d in task.goal if state[v] != d]
        return Verdict(False, f"goal not reached: {', '.join(missing)}")
    return Verdict(True)


def _independent_sets(candidates: Sequence[int], mutex) -> list[tuple[int, ...]]:
    """All non-empty subsets of ``candidates`` with no mutex pair."""
    out = []

    def extend(chosen, start):
        for k in range(start, len(candidates)):
            a = candidates[k]
            if all(not mutex[a][b] for b in chosen):
                chosen.append(a)
                out.append(tuple(chosen))
                extend(chosen, k + 1)
                chosen.pop()

    extend([], 0)
    return out


def oracle_makespan(
    task: SasTask,
    table: TransitionTable | None = None,
    n_bound: int = 20,
    max_actions: int = 12,
    max_states: int = 100_000,
) -> int | None:
    """Minimum number of parallel steps to a goal state, by layered search over
    every applicable, pairwise non-S-mutex action set; None if above ``n_bound``."""
    if len(task.operators) > max_actions:
        raise OracleOverflow(f"{len(task.operators)} actions exceed the oracle limit of {max_actions}")
    table = table or extract_transitions(task)
    mutex = s_mutex_matrix(table)
    if task.goal_satisfied(task.initial):
        return 0
    seen = {task.initial}
    frontier = [task.initial]
    for depth in range(1, n_bound + 1):
        nxt = []
        for state in frontier:
            applicable = [a for a in range(len(task.operators)) if action_applicable(task, a, state)]
            for subset in _independent_sets(applicable, mutex):
                succ = apply_actions(task, state, subset)
                if succ in seen:
                    continue
                if task.goal_satisfied(succ):
                    return depth
                seen.add(succ)
                if len(seen) > max_states:
                    raise OracleOverflow(f"more than {max_states} states explored")
                nxt.append(succ)
        if not nxt:
            return None
        frontier = nxt
    return None


def write_telemetry(outcome: PlanOutcome, sink: TextIO) -> None:
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["N", "vars", "clauses", "decisions", "conflicts", "status", "wall_time_ms"])
    for r in outcome.records:
        w.writerow([r.horizon, r.variables, r.clauses, r.decisions, r.conflicts, r.status.value, f"{r.wall_time_ms:.3f}"])
