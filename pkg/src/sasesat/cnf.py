"""CNF construction: variable keys, clause storage, at-most-one encodings, DIMACS I/O."""

from __future__ import annotations

import enum
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, NamedTuple, Sequence, TextIO

from .errors import AllocationError, DimacsError, EncodingError, SolverOutputError

ACTION = "action"
TRANSITION = "transition"
FACT = "fact"
AUX = "aux"
ROLES = (ACTION, TRANSITION, FACT, AUX)


class VarKey(NamedTuple):
    role: str
    obj: int
    time: int | None = None


class CnfInstance:
    """Clauses over dense variable ids 1..var_count with a key <-> id bijection.

    Clauses are stored as tuples of signed ints. ``add_clause`` drops
    duplicate literals and silently skips tautologies, so stored clauses are
    never tautological. ``classes`` maps a clause-class label to the indices
    of the clauses emitted under it.
    """

    def __init__(self, names: dict[str, Sequence[str]] | None = None):
        self.var_count = 0
        self.clauses: list[tuple[int, ...]] = []
        self.keys: dict[int, VarKey] = {}
        self.ids: dict[VarKey, int] = {}
        self.names = dict(names or {})
        self.classes: dict[str, list[int]] = defaultdict(list)
        self.horizon: int | None = None
        self.meta: dict = {}
        self._aux_serial = 0

    def alloc(self, key: VarKey) -> int:
        if key in self.ids:
            raise AllocationError(f"variable key already allocated: {key}")
        self.var_count += 1
        self.ids[key] = self.var_count
        self.keys[self.var_count] = key
        return self.var_count

    def lookup(self, key: VarKey) -> int:
        try:
            return self.ids[key]
        except KeyError:
            raise AllocationError(f"no variable allocated for {key}") from None

    def get(self, key: VarKey) -> int | None:
        return self.ids.get(key)

    def key_of(self, var: int) -> VarKey | None:
        return self.keys.get(var)

    def new_aux(self) -> int:
        self._aux_serial += 1
        return self.alloc(VarKey(AUX, self._aux_serial))

    def add_clause(self, lits: Iterable[int], cls: str | None = None) -> bool:
        clause = tuple(dict.fromkeys(int(l) for l in lits))
        if not clause:
            raise EncodingError(f"empty clause in class {cls}")
        seen = set(clause)
        if any(-l in seen for l in clause):
            return False
        if any(l == 0 or abs(l) > self.var_count for l in clause):
            raise EncodingError(f"clause {clause} references an unallocated variable")
        if cls is not None:
            self.classes[cls].append(len(self.clauses))
        self.clauses.append(clause)
        return True

    def add_clauses(self, clauses: Iterable[Iterable[int]], cls: str | None = None) -> int:
        return sum(self.add_clause(c, cls) for c in clauses)

    def class_clauses(self, cls: str) -> list[tuple[int, ...]]:
        return [self.clauses[i] for i in self.classes.get(cls, ())]

    def role_of(self, var: int) -> str:
        key = self.keys.get(var)
        return key.role if key is not None else AUX

    def describe(self, var: int) -> str:
        key = self.keys.get(var)
        if key is None:
            return f"v{var}"
        if key.role == AUX:
            return f"aux:b{key.obj}"
        names = self.names.get(key.role)
        obj = names[key.obj] if names is not None else str(key.obj)
        return f"{key.role}:{obj}@{key.time}"

    def literal_count(self) -> int:
        return sum(len(c) for c in self.clauses)

    def satisfied_by(self, assignment) -> bool:
        return first_falsified(self.clauses, assignment) is None


def first_falsified(clauses, assignment):
    """Return the first clause not satisfied by ``assignment`` (var -> bool), else None."""
    for clause in clauses:
        if not any(assignment.get(abs(l), False) == (l > 0) for l in clause):
            return clause
    return None


class CliqueMode(str, enum.Enum):
    PAIRWISE = "pairwise"
    BINARY = "binary"


def at_most_one(vars: Sequence[int], mode: CliqueMode | str, alloc: Callable[[], int]) -> list[list[int]]:
    """Clauses allowing at most one of ``vars`` to be true.

    Binary mode gives every member a distinct codeword over ceil(log2 n)
    fresh bits and emits member -> codeword only, so every member may still be
    false.
    """
    vars = list(vars)
    if not vars:
        raise EncodingError("at_most_one over an empty set")
    if len(set(vars)) != len(vars):
        raise EncodingError("at_most_one members must be distinct")
    mode = CliqueMode(mode)
    n = len(vars)
    if mode is CliqueMode.PAIRWISE:
        return [[-a, -b] for a, b in combinations(vars, 2)]
    width = math.ceil(math.log2(n)) if n > 1 else 0
    bits = [alloc() for _ in range(width)]
    clauses = []
    for code, v in enumerate(vars):
        for j, b in enumerate(bits):
            clauses.append([-v, b if (code >> j) & 1 else -b])
    return clauses


def write_dimacs(instance: CnfInstance, sink: TextIO, comments: bool = True) -> None:
    if comments:
        for var in range(1, instance.var_count + 1):
            if var in instance.keys:
                sink.write(f"c var {var} = {instance.describe(var)}\n")
    sink.write(f"p cnf {instance.var_count} {len(instance.clauses)}\n")
    for clause in instance.clauses:
        sink.write(" ".join(map(str, clause)) + " 0\n")


def dimacs_text(instance: CnfInstance, comments: bool = True) -> str:
    buf = io.StringIO()
    write_dimacs(instance, buf, comments)
    return buf.getvalue()


def read_dimacs(text: str | TextIO) -> CnfInstance:
    """Read a DIMACS CNF; variable keys are not reconstructed."""
    if not isinstance(text, str):
        text = text.read()
    inst = CnfInstance()
    declared = None
    pending: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad problem line {line!r}")
            inst.var_count = int(parts[2])
            declared = int(parts[3])
            continue
        if declared is None:
            raise DimacsError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if not pending:
                    raise DimacsError(f"line {lineno}: empty clause")
                inst.clauses.append(tuple(pending))
                pending = []
            elif abs(lit) > inst.var_count:
                raise DimacsError(f"line {lineno}: literal {lit} exceeds declared variable count")
            else:
                pending.append(lit)
    if pending:
        inst.clauses.append(tuple(pending))
    if declared is None:
        raise DimacsError("missing problem line")
    if declared != len(inst.clauses):
        raise DimacsError(f"header declares {declared} clauses, found {len(inst.clauses)}")
    return inst


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolverOutput:
    status: Status
    assignment: dict[int, bool] = field(default_factory=dict)


def parse_solver_output(text: str | TextIO) -> SolverOutput:
    """Parse SAT-competition output ("s ..." status plus "v ..." literal lines)."""
    if not isinstance(text, str):
        text = text.read()
    status = Status.UNKNOWN
    assignment: dict[int, bool] = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = Status.SAT
            elif word == "UNSATISFIABLE":
                status = Status.UNSAT
            else:
                status = Status.UNKNOWN
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                lit = int(tok)
                if lit == 0:
                    continue
                value = lit > 0
                if assignment.get(abs(lit), value) != value:
                    raise SolverOutputError(f"contradictory value lines for variable {abs(lit)}")
                assignment[abs(lit)] = value
    if status is not Status.SAT:
        assignment = {}
    return SolverOutput(status, assignment)
