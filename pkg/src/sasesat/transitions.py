"""Transitions, supporting-action sets and the two mutex relations on SAS+ tasks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ApplicabilityError
from .sas_model import UNKNOWN, SasTask


class Kind(enum.Enum):
    REGULAR = "regular"
    PREVAILING = "prevailing"
    MECHANICAL = "mechanical"


@dataclass(frozen=True, order=True)
class Transition:
    var: int
    source: int  # UNKNOWN for mechanical transitions
    target: int

    @property
    def kind(self) -> Kind:
        if self.source == UNKNOWN:
            return Kind.MECHANICAL
        if self.source == self.target:
            return Kind.PREVAILING
        return Kind.REGULAR

    @property
    def mechanical(self) -> bool:
        return self.source == UNKNOWN

    @property
    def prevailing(self) -> bool:
        return self.source == self.target

    def applicable(self, state: Sequence[int]) -> bool:
        return self.mechanical or state[self.var] == self.source

    def label(self, task: SasTask) -> str:
        var = task.variables[self.var]
        src = "*" if self.mechanical else var.domain[self.source]
        return f"{var.name}:{src}->{var.domain[self.target]}"


def transition_mutex(d1: Transition, d2: Transition) -> bool:
    """Two distinct transitions on one variable that cannot fire together."""
    if d1 == d2 or d1.var != d2.var:
        return False
    if not d1.mechanical and not d2.mechanical:
        return True
    return d1.target != d2.target


@dataclass(frozen=True)
class TransitionTable:
    """Interned transitions of a task; everything else refers to them by index.

    ``all`` holds every transition some action performs plus every prevailing
    transition of every variable. Unsupported regular or mechanical
    transitions are never instantiated.
    """

    all: tuple[Transition, ...]
    per_variable: tuple[tuple[int, ...], ...]
    prevailing: frozenset[int]
    supporters: tuple[frozenset[int], ...]
    trans_of: tuple[frozenset[int], ...]

    def index(self, t: Transition) -> int:
        return self._index[t]

    def find(self, var: int, source: int, target: int) -> int:
        return self._index[Transition(var, source, target)]

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.all)})

    def non_prevailing(self) -> list[int]:
        return [i for i in range(len(self.all)) if i not in self.prevailing]

    def transitions_of(self, action: int) -> list[Transition]:
        return [self.all[i] for i in sorted(self.trans_of[action])]


def _order_key(t: Transition):
    # Mechanical transitions sort after every known source.
    return (t.var, t.mechanical, t.source, t.target)


def action_transitions(task: SasTask, action: int) -> list[Transition]:
    op = task.operators[action]
    out = [Transition(v, d, d) for v, d in op.prevails]
    out += [Transition(v, p, q) for v, p, q in op.effects]
    return out


def extract_transitions(task: SasTask) -> TransitionTable:
    found = set()
    per_action = []
    for a in range(len(task.operators)):
        ts = action_transitions(task, a)
        per_action.append(ts)
        found.update(ts)
    for x, var in enumerate(task.variables):
        found.update(Transition(x, f, f) for f in range(len(var.domain)))

    ordered = tuple(sorted(found, key=_order_key))
    index = {t: i for i, t in enumerate(ordered)}
    per_variable = tuple(
        tuple(i for i, t in enumerate(ordered) if t.var == x) for x in range(len(task.variables))
    )
    supporters = [set() for _ in ordered]
    trans_of = []
    for a, ts in enumerate(per_action):
        ids = frozenset(index[t] for t in ts)
        trans_of.append(ids)
        for i in ids:
            supporters[i].add(a)
    return TransitionTable(
        all=ordered,
        per_variable=per_variable,
        prevailing=frozenset(i for i, t in enumerate(ordered) if t.prevailing),
        supporters=tuple(frozenset(s) for s in supporters),
        trans_of=tuple(trans_of),
    )


def s_mutex(a1: int, a2: int, table: TransitionTable) -> bool:
    """Actions that share a non-prevailing transition or hold mutex transitions."""
    t1, t2 = table.trans_of[a1], table.trans_of[a2]
    if any(i not in table.prevailing for i in t1 & t2):
        return True
    return any(transition_mutex(table.all[i], table.all[j]) for i in t1 for j in t2)


def s_mutex_matrix(table: TransitionTable) -> list[list[bool]]:
    n = len(table.trans_of)
    m = [[False] * n for _ in range(n)]
    for a, b in combinations(range(n), 2):
        m[a][b] = m[b][a] = s_mutex(a, b, table)
    return m


def apply_transition_set(state: Sequence[int], ts: Iterable[Transition]) -> tuple[int, ...]:
    ts = list(ts)
    bad = [t for t in ts if not t.applicable(state)]
    if bad:
        raise ApplicabilityError(f"transition(s) not applicable: {bad}")
    for d1, d2 in combinations(ts, 2):
        if transition_mutex(d1, d2):
            raise ApplicabilityError(f"mutex transitions in one set: {d1}, {d2}")
    new = list(state)
    for t in ts:
        new[t.var] = t.target
    return tuple(new)


def action_applicable(task: SasTask, action: int, state: Sequence[int]) -> bool:
    return all(state[v] == d for v, d in task.operators[action].precondition.items())


def apply_actions(task: SasTask, state: Sequence[int], actions: Iterable[int]) -> tuple[int, ...]:
    """Apply a set of actions in parallel (applicability and mutex are not checked)."""
    new = list(state)
    for a in actions:
        for v, q in task.operators[a].postcondition.items():
            new[v] = q
    return tuple(new)
