"""STRIPS view of a SAS+ task and the action/fact baseline encoding built on it."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .cnf import ACTION, FACT, CnfInstance, VarKey
from .errors import EncodingError
from .plans import ParallelPlan
from .sas_model import SasTask
from .transitions import TransitionTable, s_mutex


@dataclass(frozen=True)
class StripsAction:
    name: str
    pre: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]
    dummy: bool = False


@dataclass(frozen=True)
class StripsView:
    """One fact per (variable, value); real actions first, then one dummy per fact."""

    facts: tuple[tuple[int, int], ...]
    fact_names: tuple[str, ...]
    actions: tuple[StripsAction, ...]
    n_real: int
    initial: frozenset[int]
    goal: frozenset[int]
    offsets: tuple[int, ...]

    def fact(self, var: int, value: int) -> int:
        return self.offsets[var] + value

    def dummy(self, fact: int) -> int:
        return self.n_real + fact

    @property
    def real_actions(self):
        return self.actions[: self.n_real]

    @property
    def dummy_actions(self):
        return self.actions[self.n_real :]

    def adders(self, f: int) -> list[int]:
        return [i for i, a in enumerate(self.actions) if f in a.add]

    def deleters(self, f: int) -> list[int]:
        return [i for i, a in enumerate(self.actions) if f in a.delete]

    def needers(self, f: int) -> list[int]:
        return [i for i, a in enumerate(self.actions) if f in a.pre]


def derive_strips(task: SasTask, table: TransitionTable) -> StripsView:
    offsets, facts, names = [], [], []
    for x, var in enumerate(task.variables):
        offsets.append(len(facts))
        for v in range(len(var.domain)):
            facts.append((x, v))
            names.append(task.fact_name(x, v))

    def fid(x, v):
        return offsets[x] + v

    actions = []
    for a, op in enumerate(task.operators):
        pre, add, dele = set(), set(), set()
        for d in table.transitions_of(a):
            if d.prevailing:
                pre.add(fid(d.var, d.source))
            elif d.mechanical:
                add.add(fid(d.var, d.target))
                dele.update(fid(d.var, v) for v in range(len(task.variables[d.var].domain)) if v != d.target)
            else:
                pre.add(fid(d.var, d.source))
                add.add(fid(d.var, d.target))
                dele.add(fid(d.var, d.source))
        actions.append(StripsAction(op.name, frozenset(pre), frozenset(add), frozenset(dele)))
    n_real = len(actions)
    for f, name in enumerate(names):
        actions.append(StripsAction(f"dum[{name}]", frozenset([f]), frozenset([f]), frozenset(), dummy=True))
    return StripsView(
        facts=tuple(facts),
        fact_names=tuple(names),
        actions=tuple(actions),
        n_real=n_real,
        initial=frozenset(fid(x, v) for x, v in enumerate(task.initial)),
        goal=frozenset(fid(x, v) for x, v in task.goal),
        offsets=tuple(offsets),
    )


def facts_mutex(view: StripsView, f: int, g: int) -> bool:
    """Static fact mutex: two values of one SAS+ variable."""
    return f != g and view.facts[f][0] == view.facts[g][0]


def competing_needs(view: StripsView, a: int, b: int) -> bool:
    pa, pb = view.actions[a].pre, view.actions[b].pre
    return any(facts_mutex(view, f, g) for f in pa for g in pb)


def p_mutex(view: StripsView, a: int, b: int, with_competing_needs: bool = True) -> bool:
    """Planning-graph action mutex computed from fact sets alone.

    Competing needs uses the static same-variable fact mutex rather than a
    leveled planning graph.
    """
    x, y = view.actions[a], view.actions[b]
    if x.delete & y.add or y.delete & x.add:
        return True
    if x.delete & y.pre or y.delete & x.pre:
        return True
    return with_competing_needs and competing_needs(view, a, b)


def p_mutex_matrix(view: StripsView, with_competing_needs: bool = True) -> list[list[bool]]:
    n = view.n_real
    m = [[False] * n for _ in range(n)]
    for a, b in combinations(range(n), 2):
        m[a][b] = m[b][a] = p_mutex(view, a, b, with_competing_needs)
    return m


def action_mutex_pairs(view: StripsView, table: TransitionTable) -> list[tuple[int, int]]:
    """Class V pairs: S-mutex between real actions, and dummy vs real deleters."""
    pairs = [(a, b) for a, b in combinations(range(view.n_real), 2) if s_mutex(a, b, table)]
    for f in range(len(view.facts)):
        d = view.dummy(f)
        pairs += [(a, d) for a in view.deleters(f) if a < view.n_real]
    return pairs


def encode_pe(
    view: StripsView,
    table: TransitionTable,
    horizon: int,
    fact_mutex: bool = False,
    competing_needs_mutex: bool = False,
) -> CnfInstance:
    N = horizon
    if N < 1:
        raise EncodingError(f"horizon must be >= 1, got {N}")
    inst = CnfInstance(names={FACT: view.fact_names, ACTION: [a.name for a in view.actions]})
    inst.horizon = N
    nf, na = len(view.facts), len(view.actions)
    W = {}
    for t in range(1, N + 2):
        for f in range(nf):
            W[FACT, f, t] = inst.alloc(VarKey(FACT, f, t))
        if t <= N:
            for a in range(na):
                W[ACTION, a, t] = inst.alloc(VarKey(ACTION, a, t))

    def wf(f, t):
        return W[FACT, f, t]

    def wa(a, t):
        return W[ACTION, a, t]

    # I: closed-world initial layer
    for f in range(nf):
        inst.add_clause([wf(f, 1) if f in view.initial else -wf(f, 1)], "I")
    for f in sorted(view.goal):
        inst.add_clause([wf(f, N + 1)], "II")
    adders = [view.adders(f) for f in range(nf)]
    for t in range(1, N + 1):
        for f in range(nf):
            inst.add_clause([-wf(f, t + 1)] + [wa(a, t) for a in adders[f]], "III")
        for a, act in enumerate(view.actions):
            for f in sorted(act.pre):
                inst.add_clause([-wa(a, t), wf(f, t)], "IV")

    pairs = action_mutex_pairs(view, table)
    if competing_needs_mutex:
        known = set(pairs)
        pairs += [
            (a, b)
            for a, b in combinations(range(na), 2)
            if (a, b) not in known and competing_needs(view, a, b)
        ]
    for t in range(1, N + 1):
        for a, b in pairs:
            inst.add_clause([-wa(a, t), -wa(b, t)], "V")
    if fact_mutex:
        fpairs = [(f, g) for f, g in combinations(range(nf), 2) if facts_mutex(view, f, g)]
        for t in range(1, N + 2):
            for f, g in fpairs:
                inst.add_clause([-wf(f, t), -wf(g, t)], "VI")

    inst.meta.update(encoding="pe", n_real=view.n_real, fact_vars=nf * (N + 1), action_vars=na * N, mutex_pairs=len(pairs))
    return inst


def decode_pe(assignment: Mapping[int, bool], inst: CnfInstance, n_real: int | None = None) -> ParallelPlan:
    """Real actions true at each step; dummy actions are dropped."""
    if n_real is None:
        n_real = inst.meta["n_real"]
    steps = [set() for _ in range(inst.horizon)]
    for var, key in inst.keys.items():
        if key.role == ACTION and key.obj < n_real and assignment.get(var, False):
            steps[key.time - 1].add(key.obj)
    return ParallelPlan.of(steps)
