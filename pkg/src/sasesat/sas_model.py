"""SAS+ planning tasks and the Fast Downward translator file format (version 3)."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import SasParseError, SasValidationError, UnsupportedFeatureError

# Pre-value of an effect whose source value is not constrained (a mechanical effect).
UNKNOWN = -1

SAS_VERSION = 3


@dataclass(frozen=True)
class StateVariable:
    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise SasValidationError(f"variable {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise SasValidationError(f"variable {self.name!r} repeats a value name")

    def __len__(self):
        return len(self.domain)


@dataclass(frozen=True)
class Operator:
    """An action as prevail conditions plus (var, pre, post) effects.

    ``pre`` is ``UNKNOWN`` for effects that do not constrain the old value.
    """

    name: str
    prevails: tuple[tuple[int, int], ...] = ()
    effects: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prevails", tuple(sorted((int(v), int(d)) for v, d in self.prevails)))
        object.__setattr__(
            self, "effects", tuple(sorted((int(v), int(p), int(q)) for v, p, q in self.effects))
        )
        prevail_vars = [v for v, _ in self.prevails]
        effect_vars = [v for v, _, _ in self.effects]
        if len(set(prevail_vars)) != len(prevail_vars):
            raise SasValidationError(f"operator {self.name!r} has two prevails on one variable")
        if len(set(effect_vars)) != len(effect_vars):
            raise SasValidationError(f"operator {self.name!r} has two effects on one variable")
        if set(prevail_vars) & set(effect_vars):
            raise SasValidationError(f"operator {self.name!r} both prevails and changes a variable")
        for var, pre, post in self.effects:
            if pre == post:
                raise SasValidationError(
                    f"operator {self.name!r}: effect on var {var} keeps its value; use a prevail"
                )

    @property
    def precondition(self) -> dict[int, int]:
        pre = dict(self.prevails)
        pre.update((v, p) for v, p, _ in self.effects if p != UNKNOWN)
        return pre

    @property
    def postcondition(self) -> dict[int, int]:
        return {v: q for v, _, q in self.effects}


@dataclass(frozen=True)
class SasTask:
    variables: tuple[StateVariable, ...]
    operators: tuple[Operator, ...]
    initial: tuple[int, ...]
    goal: tuple[tuple[int, int], ...]
    mutex_groups: tuple[tuple[tuple[int, int], ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "operators", tuple(self.operators))
        object.__setattr__(self, "initial", tuple(int(v) for v in self.initial))
        object.__setattr__(self, "goal", tuple(sorted((int(v), int(d)) for v, d in self.goal)))
        object.__setattr__(
            self, "mutex_groups", tuple(tuple((int(v), int(d)) for v, d in g) for g in self.mutex_groups)
        )
        self._validate()

    def _check_value(self, var, value, where):
        if not 0 <= var < len(self.variables):
            raise SasValidationError(f"{where}: variable index {var} out of range")
        if not 0 <= value < len(self.variables[var]):
            raise SasValidationError(
                f"{where}: value {value} outside domain of {self.variables[var].name!r}"
            )

    def _validate(self):
        if len(self.initial) != len(self.variables):
            raise SasValidationError("initial state must assign every variable exactly once")
        for var, value in enumerate(self.initial):
            self._check_value(var, value, "initial state")
        goal_vars = [v for v, _ in self.goal]
        if len(set(goal_vars)) != len(goal_vars):
            raise SasValidationError("goal assigns a variable twice")
        for var, value in self.goal:
            self._check_value(var, value, "goal")
        names = [op.name for op in self.operators]
        if len(set(names)) != len(names):
            raise SasValidationError("operator names must be unique")
        for op in self.operators:
            for var, value in op.prevails:
                self._check_value(var, value, f"operator {op.name!r}")
            for var, pre, post in op.effects:
                if pre != UNKNOWN:
                    self._check_value(var, pre, f"operator {op.name!r}")
                self._check_value(var, post, f"operator {op.name!r}")
        for group in self.mutex_groups:
            for var, value in group:
                self._check_value(var, value, "mutex group")

    def operator_index(self, name: str) -> int:
        for i, op in enumerate(self.operators):
            if op.name == name:
                return i
        raise KeyError(name)

    def goal_satisfied(self, state: Sequence[int]) -> bool:
        return all(state[v] == d for v, d in self.goal)

    def fact_name(self, var: int, value: int) -> str:
        return f"{self.variables[var].name}={self.variables[var].domain[value]}"


def make_task(
    variables: Mapping[str, Sequence[str]],
    operators: Iterable[tuple[str, Mapping[str, str], Mapping[str, tuple[str | None, str]]]],
    initial: Mapping[str, str],
    goal: Mapping[str, str],
) -> SasTask:
    """Build a task from value names instead of indices.

    ``operators`` yields ``(name, prevails, effects)`` where an effect maps a
    variable to ``(pre, post)`` and ``pre`` may be ``None`` for a mechanical
    effect. An effect whose pre equals its post is turned into a prevail.
    """
    var_names = list(variables)
    var_index = {n: i for i, n in enumerate(var_names)}
    value_index = [{d: j for j, d in enumerate(variables[n])} for n in var_names]

    def fact(var, value):
        i = var_index[var]
        return i, value_index[i][value]

    ops = []
    for name, prevails, effects in operators:
        prv = [fact(v, d) for v, d in prevails.items()]
        eff = []
        for v, (pre, post) in effects.items():
            i, q = fact(v, post)
            if pre is None:
                eff.append((i, UNKNOWN, q))
            elif pre == post:
                prv.append((i, q))
            else:
                eff.append((i, value_index[i][pre], q))
        ops.append(Operator(name, tuple(prv), tuple(eff)))
    return SasTask(
        variables=tuple(StateVariable(n, tuple(variables[n])) for n in var_names),
        operators=tuple(ops),
        initial=tuple(value_index[i][initial[n]] for i, n in enumerate(var_names)),
        goal=tuple(fact(v, d) for v, d in goal.items()),
    )


def toy_fixture() -> SasTask:
    """Two variables x, y and three actions; step-optimal makespan is 2."""
    return make_task(
        variables={"x": ("f", "g", "h"), "y": ("d", "e")},
        operators=[
            ("a1", {}, {"x": ("f", "g"), "y": ("d", "e")}),
            ("a2", {}, {"x": ("f", "g"), "y": ("e", "d")}),
            ("a3", {}, {"x": ("g", "h"), "y": ("e", "d")}),
        ],
        initial={"x": "f", "y": "d"},
        goal={"x": "h", "y": "d"},
    )


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    @property
    def lineno(self):
        return self.pos

    def next(self) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line
        raise SasParseError("unexpected end of file", self.pos)

    def at_end(self) -> bool:
        return all(not line.strip() for line in self.lines[self.pos:])

    def expect(self, sentinel: str):
        line = self.next()
        if line != sentinel:
            if line == "begin_rule":
                raise UnsupportedFeatureError("axiom rules are not supported", self.pos)
            raise SasParseError(f"expected {sentinel!r}, found {line!r}", self.pos)

    def ints(self, count: int | None = None) -> list[int]:
        line = self.next()
        if line == "begin_rule":
            raise UnsupportedFeatureError("axiom rules are not supported", self.pos)
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise SasParseError(f"expected integers, found {line!r}", self.pos) from None
        if count is not None and len(values) != count:
            raise SasParseError(f"expected {count} integers, found {line!r}", self.pos)
        return values

    def int(self) -> int:
        return self.ints(1)[0]


def parse_sas(text: str | io.TextIOBase) -> SasTask:
    """Parse Fast Downward translator output (``output.sas``, version 3).

    Action costs and the metric flag are read and dropped. Axioms, derived
    variables and conditional effects raise ``UnsupportedFeatureError``.
    """
    if not isinstance(text, str):
        text = text.read()
    r = _Lines(text)

    r.expect("begin_version")
    version = r.int()
    if version != SAS_VERSION:
        raise SasParseError(f"unsupported SAS version {version}", r.lineno)
    r.expect("end_version")
    r.expect("begin_metric")
    r.int()
    r.expect("end_metric")

    variables = []
    for _ in range(r.int()):
        r.expect("begin_variable")
        name = r.next()
        layer = r.int()
        if layer != -1:
            raise UnsupportedFeatureError(f"derived variable {name!r} (axiom layer {layer})", r.lineno)
        size = r.int()
        domain = tuple(r.next() for _ in range(size))
        r.expect("end_variable")
        variables.append(StateVariable(name, domain))

    groups = []
    for _ in range(r.int()):
        r.expect("begin_mutex_group")
        groups.append(tuple(tuple(r.ints(2)) for _ in range(r.int())))
        r.expect("end_mutex_group")

    r.expect("begin_state")
    initial = tuple(r.int() for _ in variables)
    r.expect("end_state")

    r.expect("begin_goal")
    goal = tuple(tuple(r.ints(2)) for _ in range(r.int()))
    r.expect("end_goal")

    operators = []
    for _ in range(r.int()):
        r.expect("begin_operator")
        name = r.next()
        prevails = [tuple(r.ints(2)) for _ in range(r.int())]
        effects = []
        for _ in range(r.int()):
            line_no = r.lineno + 1
            fields = r.ints()
            if not fields:
                raise SasParseError("empty effect line", line_no)
            if fields[0] != 0:
                raise UnsupportedFeatureError("conditional effects are not supported", line_no)
            if len(fields) != 4:
                raise SasParseError("effect line must read '0 var pre post'", line_no)
            _, var, pre, post = fields
            if pre == post:
                prevails.append((var, pre))
            else:
                effects.append((var, pre, post))
        r.int()  # action cost, unused
        r.expect("end_operator")
        try:
            operators.append(Operator(name, tuple(prevails), tuple(effects)))
        except SasValidationError as exc:
            raise SasValidationError(f"line {r.lineno}: {exc}") from None

    axioms = r.int()
    if axioms:
        raise UnsupportedFeatureError(f"{axioms} axiom rule(s) present", r.lineno)
    if not r.at_end():
        raise SasParseError("trailing content after axiom section", r.lineno + 1)
    return SasTask(tuple(variables), tuple(operators), initial, goal, tuple(groups))


def write_sas(task: SasTask) -> str:
    """Serialize ``task`` in translator format; ``parse_sas`` inverts it."""
    out = ["begin_version", str(SAS_VERSION), "end_version", "begin_metric", "0", "end_metric"]
    out.append(str(len(task.variables)))
    for var in task.variables:
        out += ["begin_variable", var.name, "-1", str(len(var.domain)), *var.domain, "end_variable"]
    out.append(str(len(task.mutex_groups)))
    for group in task.mutex_groups:
        out += ["begin_mutex_group", str(len(group)), *(f"{v} {d}" for v, d in group), "end_mutex_group"]
    out += ["begin_state", *(str(v) for v in task.initial), "end_state"]
    out += ["begin_goal", str(len(task.goal)), *(f"{v} {d}" for v, d in task.goal), "end_goal"]
    out.append(str(len(task.operators)))
    for op in task.operators:
        out += ["begin_operator", op.name, str(len(op.prevails))]
        out += [f"{v} {d}" for v, d in op.prevails]
        out.append(str(len(op.effects)))
        out += [f"0 {v} {p} {q}" for v, p, q in op.effects]
        out += ["1", "end_operator"]
    out.append("0")
    return "\n".join(out) + "\n"


def read_sas_file(path) -> SasTask:
    with open(path, encoding="utf-8") as fh:
        return parse_sas(fh.read())
