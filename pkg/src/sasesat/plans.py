"""Parallel plans and their text format."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import SasParseError
from .sas_model import SasTask


@dataclass(frozen=True)
class ParallelPlan:
    steps: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(frozenset(s) for s in self.steps))

    @classmethod
    def of(cls, steps: Iterable[Iterable[int]]) -> "ParallelPlan":
        return cls(tuple(frozenset(s) for s in steps))

    @property
    def makespan(self) -> int:
        return len(self.steps)

    @property
    def action_count(self) -> int:
        return sum(len(s) for s in self.steps)

    def names(self, task: SasTask) -> list[list[str]]:
        return [sorted(task.operators[a].name for a in step) for step in self.steps]


def _quote(name: str) -> str:
    return f"({name})" if re.search(r"\s", name) else name


def format_plan(plan: ParallelPlan, task: SasTask) -> str:
    lines = []
    for t, names in enumerate(plan.names(task), 1):
        lines.append(" ".join([f"step {t}:", *map(_quote, names)]))
    lines.append(f";; makespan {plan.makespan}")
    return "\n".join(lines) + "\n"


def write_plan(plan: ParallelPlan, task: SasTask, sink: TextIO) -> None:
    """One line per step, ``step <t>: <name> ...``; names containing spaces are parenthesized."""
    sink.write(format_plan(plan, task))


_STEP = re.compile(r"^step\s+(\d+)\s*:(.*)$")
_TOKEN = re.compile(r"\(([^()]*)\)|(\S+)")


def read_plan(text: str | TextIO, task: SasTask) -> ParallelPlan:
    if not isinstance(text, str):
        text = text.read()
    index = {op.name: i for i, op in enumerate(task.operators)}
    steps: list[frozenset[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        m = _STEP.match(line)
        if not m:
            raise SasParseError(f"not a plan step: {line!r}", lineno)
        t = int(m.group(1))
        if t != len(steps) + 1:
            raise SasParseError(f"expected step {len(steps) + 1}, found step {t}", lineno)
        actions = set()
        for quoted, bare in _TOKEN.findall(m.group(2)):
            name = quoted if quoted else bare
            if name not in index:
                raise SasParseError(f"unknown action {name!r}", lineno)
            actions.add(index[name])
        steps.append(frozenset(actions))
    return ParallelPlan(tuple(steps))
