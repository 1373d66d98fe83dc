"""Embedded CDCL solver with decision logging, and an adapter for external DIMACS solvers."""

from __future__ import annotations

import csv
import os
import random
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from .cnf import CnfInstance, Status, first_falsified, parse_solver_output, write_dimacs
from .errors import IntegrityError, SolverOutputError


@dataclass
class SolverConfig:
    engine: str = "embedded"  # "embedded" or "external"
    command: str | None = None  # external command template containing "{cnf}"
    decay_interval: int = 256
    decay_factor: float = 0.5
    restart_interval: int = 512
    seed: int = 0
    decision_log: bool = False
    max_conflicts: int | None = None
    timeout: float | None = None

    def __post_init__(self):
        if not 0 < self.decay_factor <= 1:
            raise ValueError("decay_factor must lie in (0, 1]")
        if self.decay_interval < 1 or self.restart_interval < 1:
            raise ValueError("intervals must be >= 1")
        if self.engine not in ("embedded", "external"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine == "external" and not self.command:
            raise ValueError("external engine needs a command template")


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0


@dataclass
class SolveResult:
    status: Status
    assignment: dict[int, bool] | None = None
    stats: SolveStats = field(default_factory=SolveStats)
    decision_log: list[int] = field(default_factory=list)
    diagnostic: str = ""

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def occurrence_counts(clauses: Sequence[Sequence[int]], var_count: int) -> list[int]:
    """Number of clauses each variable occurs in (index 0 unused)."""
    h = [0] * (var_count + 1)
    for clause in clauses:
        for v in {abs(l) for l in clause}:
            h[v] += 1
    return h


class _Cdcl:
    def __init__(self, n: int, clauses: Sequence[Sequence[int]], cfg: SolverConfig):
        self.n = n
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.value = [0] * (n + 1)  # +1 true, -1 false, 0 unassigned
        self.level = [0] * (n + 1)
        self.reason: list[int | None] = [None] * (n + 1)
        self.saved = [False] * (n + 1)
        self.activity = [float(h) for h in occurrence_counts(clauses, n)]
        self.watches: list[list[int]] = [[] for _ in range(2 * n + 2)]
        self.clauses: list[list[int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.stats = SolveStats()
        self.log: list[int] = []
        self.empty = False
        self.units: list[int] = []
        for clause in clauses:
            lits = list(dict.fromkeys(clause))
            if any(-l in lits for l in lits):
                continue
            if not lits:
                self.empty = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                self._attach(lits)

    @staticmethod
    def _w(lit):
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _attach(self, lits) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[self._w(lits[0])].append(ci)
        self.watches[self._w(lits[1])].append(ci)
        return ci

    def _val(self, lit):
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit, reason):
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> int | None:
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.stats.propagations += 1
            false_lit = -p
            wl = self.watches[self._w(false_lit)]
            keep = []
            conflict = None
            i = 0
            while i < len(wl):
                ci = wl[i]
                i += 1
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._val(c[0]) == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    if self._val(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches[self._w(c[1])].append(ci)
                        break
                else:
                    keep.append(ci)
                    if self._val(c[0]) == -1:
                        conflict = ci
                        keep.extend(wl[i:])
                        break
                    self._enqueue(c[0], ci)
            self.watches[self._w(false_lit)] = keep
            if conflict is not None:
                return conflict
        return None

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        current = len(self.trail_lim)
        clause = self.clauses[conflict]
        while True:
            for q in clause:
                v = abs(q)
                if p is not None and v == abs(p):
                    continue
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self.activity[v] += 1.0
                    if self.level[v] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(p)]]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backtrack(self, level: int):
        if len(self.trail_lim) <= level:
            return
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            v = abs(lit)
            self.saved[v] = lit > 0
            self.value[v] = 0
            self.reason[v] = None
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _pick(self) -> int | None:
        best = -1.0
        ties: list[int] = []
        act, val = self.activity, self.value
        for v in range(1, self.n + 1):
            if val[v] == 0:
                a = act[v]
                if a > best:
                    best, ties = a, [v]
                elif a == best:
                    ties.append(v)
        if not ties:
            return None
        return ties[0] if len(ties) == 1 else self.rng.choice(ties)

    def solve(self) -> Status:
        if self.empty:
            return Status.UNSAT
        for lit in self.units:
            if self._val(lit) == -1:
                return Status.UNSAT
            if self._val(lit) == 0:
                self._enqueue(lit, None)
        since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.stats.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    return Status.UNSAT
                learnt, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    ci = self._attach(learnt)
                    self._enqueue(learnt[0], ci)
                self.stats.learned += 1
                if self.cfg.max_conflicts is not None and self.stats.conflicts >= self.cfg.max_conflicts:
                    return Status.UNKNOWN
                continue
            if since_restart >= self.cfg.restart_interval:
                since_restart = 0
                self.stats.restarts += 1
                self._backtrack(0)
                continue
            v = self._pick()
            if v is None:
                return Status.SAT
            self.stats.decisions += 1
            if self.cfg.decision_log:
                self.log.append(v)
            if self.stats.decisions % self.cfg.decay_interval == 0:
                f = self.cfg.decay_factor
                self.activity = [a * f for a in self.activity]
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.saved[v] else -v, None)

    def model(self) -> dict[int, bool]:
        return {v: self.value[v] > 0 for v in range(1, self.n + 1)}


def solve_clauses(var_count: int, clauses: Sequence[Sequence[int]], cfg: SolverConfig | None = None) -> SolveResult:
    cfg = cfg or SolverConfig()
    engine = _Cdcl(var_count, clauses, cfg)
    status = engine.solve()
    result = SolveResult(status, stats=engine.stats, decision_log=engine.log)
    if status is Status.SAT:
        model = engine.model()
        bad = first_falsified(clauses, model)
        if bad is not None:
            raise IntegrityError(f"embedded solver model falsifies clause {bad}")
        result.assignment = model
    elif status is Status.UNKNOWN:
        result.diagnostic = f"conflict budget of {cfg.max_conflicts} exhausted"
    return result


def solve(instance: CnfInstance, cfg: SolverConfig | None = None) -> SolveResult:
    cfg = cfg or SolverConfig()
    if cfg.engine == "external":
        return solve_external(instance, cfg.command, timeout=cfg.timeout)
    return solve_clauses(instance.var_count, instance.clauses, cfg)


def solve_external(
    instance: CnfInstance, command_template: str, workdir: str | os.PathLike | None = None, timeout: float | None = None
) -> SolveResult:
    """Run an external solver on ``instance`` written as DIMACS.

    ``command_template`` must contain ``{cnf}``. Exit codes are ignored in
    favour of the status line, since solvers conventionally exit 10/20.
    """
    if "{cnf}" not in command_template:
        raise ValueError("command template must contain a {cnf} placeholder")
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        path = Path(tmp) / "instance.cnf"
        with open(path, "w", encoding="ascii") as fh:
            write_dimacs(instance, fh, comments=False)
        argv = shlex.split(command_template.replace("{cnf}", shlex.quote(str(path))))
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except (OSError, subprocess.SubprocessError) as exc:
            return SolveResult(Status.UNKNOWN, diagnostic=f"could not run solver: {exc}")
    try:
        out = parse_solver_output(proc.stdout)
    except (SolverOutputError, ValueError) as exc:
        return SolveResult(Status.UNKNOWN, diagnostic=f"unparseable solver output: {exc}")
    if out.status is Status.UNKNOWN:
        detail = proc.stderr.strip().splitlines()[-1:] if proc.stderr else []
        return SolveResult(
            Status.UNKNOWN, diagnostic=f"no status line (exit code {proc.returncode}) {' '.join(detail)}".strip()
        )
    result = SolveResult(out.status)
    if out.status is Status.SAT:
        model = {v: out.assignment.get(v, False) for v in range(1, instance.var_count + 1)}
        bad = first_falsified(instance.clauses, model)
        if bad is not None:
            raise IntegrityError(f"external solver model falsifies clause {bad}")
        result.assignment = model
    return result


def format_solver_output(result: SolveResult, var_count: int) -> str:
    """Render a result in SAT-competition output conventions."""
    if result.status is Status.UNSAT:
        return "s UNSATISFIABLE\n"
    if result.status is not Status.SAT:
        return "s UNKNOWN\n"
    lits = [v if result.assignment.get(v, False) else -v for v in range(1, var_count + 1)]
    lines = ["s SATISFIABLE"]
    for i in range(0, len(lits), 20):
        lines.append("v " + " ".join(map(str, lits[i : i + 20])))
    lines.append("v 0")
    return "\n".join(lines) + "\n"


def write_decision_log(result: SolveResult, instance: CnfInstance, sink: TextIO) -> None:
    """CSV with columns decision_ordinal, variable_id, role."""
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["decision_ordinal", "variable_id", "role"])
    for k, v in enumerate(result.decision_log, 1):
        w.writerow([k, v, instance.role_of(v)])


def read_decision_log(source: TextIO) -> list[int]:
    return [int(row["variable_id"]) for row in csv.DictReader(source)]
