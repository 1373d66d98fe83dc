"""Transition-based CNF encoding of SAS+ tasks, with clique and action-elimination reductions."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping

from .cnf import ACTION, AUX, TRANSITION, CliqueMode, CnfInstance, VarKey, at_most_one
from .errors import EncodingError, UnsatisfiableEncoding
from .plans import ParallelPlan
from .sas_model import SasTask
from .transitions import TransitionTable, transition_mutex

# Above this many factored groups a class-G clause is split with auxiliaries
# instead of being multiplied out.
_MAX_PRODUCT_GROUPS = 4


@dataclass(frozen=True)
class SaseOptions:
    clique_mode: CliqueMode = CliqueMode.BINARY
    reduce_subsumed: bool = True
    reduce_unary_transition: bool = True
    reduce_unary_difference: bool = True

    def __post_init__(self):
        object.__setattr__(self, "clique_mode", CliqueMode(self.clique_mode))

    @classmethod
    def plain(cls, clique_mode=CliqueMode.PAIRWISE) -> "SaseOptions":
        return cls(clique_mode, False, False, False)


UNARY_TRANSITION = "unary_transition"
UNARY_DIFFERENCE = "unary_difference"


@dataclass(frozen=True)
class ActionSubstitution:
    """Action -> transitions whose conjunction stands in for the action variable."""

    conj: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    rule: Mapping[int, str] = field(default_factory=dict)

    def __contains__(self, action):
        return action in self.conj

    def __len__(self):
        return len(self.conj)

    def count(self, rule: str) -> int:
        return sum(1 for r in self.rule.values() if r == rule)


def find_subsumed_cliques(table: TransitionTable) -> frozenset[int]:
    """Non-prevailing transitions whose action clique need not be encoded.

    A clique is skipped when it is strictly contained in another; among equal
    cliques only the first transition in table order is kept.
    """
    groups: dict[frozenset[int], list[int]] = {}
    for i in table.non_prevailing():
        groups.setdefault(table.supporters[i], []).append(i)
    sets = list(groups)
    skipped = set()
    for s, members in groups.items():
        if any(s < other for other in sets):
            skipped.update(members)
        else:
            skipped.update(members[1:])
    return frozenset(skipped)


def unary_difference_thetas(table: TransitionTable, d1: int) -> dict[int, int] | None:
    """Map each supporter of ``d1`` to its single differing transition, if ``A(d1)``
    is a unary difference set whose differing transitions are pairwise mutex."""
    acts = sorted(table.supporters[d1])
    if len(acts) < 2:
        return None
    common = frozenset.intersection(*(table.trans_of[a] for a in acts))
    thetas = {}
    for a in acts:
        rest = table.trans_of[a] - common
        if len(rest) != 1:
            return None
        thetas[a] = next(iter(rest))
    for a, b in combinations(acts, 2):
        if not transition_mutex(table.all[thetas[a]], table.all[thetas[b]]):
            return None
    return thetas


def find_action_substitutions(table: TransitionTable, opts: SaseOptions) -> ActionSubstitution:
    conj: dict[int, tuple[int, ...]] = {}
    rule: dict[int, str] = {}
    candidates = table.non_prevailing()
    if opts.reduce_unary_transition:
        for d in candidates:
            if len(table.supporters[d]) == 1:
                (a,) = table.supporters[d]
                if a not in conj:
                    conj[a] = (d,)
                    rule[a] = UNARY_TRANSITION
    if opts.reduce_unary_difference:
        for d in candidates:
            thetas = unary_difference_thetas(table, d)
            if thetas is None:
                continue
            for a, theta in thetas.items():
                if a not in conj:
                    conj[a] = (d, theta)
                    rule[a] = UNARY_DIFFERENCE
    return ActionSubstitution(conj, rule)


def clique_stats(table: TransitionTable, skipped: frozenset[int] = frozenset()) -> dict:
    before = [len(table.supporters[i]) for i in table.non_prevailing()]
    after = [len(table.supporters[i]) for i in table.non_prevailing() if i not in skipped]
    return {
        "cliques_before": len(before),
        "size_before": sum(before) / len(before) if before else 0.0,
        "cliques_after": len(after),
        "size_after": sum(after) / len(after) if after else 0.0,
    }


def reduction_stats(task: SasTask, sub: ActionSubstitution) -> dict:
    n = len(task.operators)
    r1, r2 = sub.count(UNARY_TRANSITION), sub.count(UNARY_DIFFERENCE)
    return {"actions": n, "r1": r1, "r2": r2, "percent": 100.0 * (r1 + r2) / n if n else 0.0}


def _or_of_conjunctions(inst: CnfInstance, prefix: list[int], conjs: list[tuple[int, ...]], cls: str):
    """Add CNF clauses for ``OR(prefix) or OR(AND(c) for c in conjs)``.

    Conjunctions have at most two literals. Those sharing a first literal are
    factored as ``l and OR(rest)`` before distributing.
    """
    singles = [c[0] for c in conjs if len(c) == 1]
    grouped: dict[int, list[int]] = {}
    for c in conjs:
        if len(c) == 2:
            grouped.setdefault(c[0], []).append(c[1])
    groups = list(grouped.items())
    base = prefix + singles
    if len(groups) <= _MAX_PRODUCT_GROUPS:
        options = [[[head], rest] for head, rest in groups]
        for choice in product(*options):
            inst.add_clause(base + [l for part in choice for l in part], cls)
        return
    zs = []
    for head, rest in groups:
        z = inst.new_aux()
        inst.add_clause([-z, head], cls)
        inst.add_clause([-z, *rest], cls)
        zs.append(z)
    inst.add_clause(base + zs, cls)


def encode_sase(
    task: SasTask,
    table: TransitionTable,
    horizon: int,
    opts: SaseOptions | None = None,
    substitution: ActionSubstitution | None = None,
) -> CnfInstance:
    """SASE clause classes A-H over transition and (non-substituted) action variables.

    ``substitution`` overrides the one derived from ``opts``.
    """
    opts = opts or SaseOptions()
    N = horizon
    if N < 1:
        raise EncodingError(f"horizon must be >= 1, got {N}")
    if not task.goal:
        raise EncodingError("goal is empty")

    skipped = find_subsumed_cliques(table) if opts.reduce_subsumed else frozenset()
    sub = substitution if substitution is not None else find_action_substitutions(table, opts)

    inst = CnfInstance(
        names={
            TRANSITION: [t.label(task) for t in table.all],
            ACTION: [op.name for op in task.operators],
        }
    )
    inst.horizon = N
    U = {}
    A = {}
    for t in range(1, N + 1):
        for i in range(len(table.all)):
            U[i, t] = inst.alloc(VarKey(TRANSITION, i, t))
        for a in range(len(task.operators)):
            if a not in sub:
                A[a, t] = inst.alloc(VarKey(ACTION, a, t))

    def action_lit(a, t) -> tuple[int, ...]:
        if a in sub:
            return tuple(U[d, t] for d in sub.conj[a])
        return (A[a, t],)

    T = table.all
    nvars = len(task.variables)
    has_mech = [any(T[i].mechanical for i in table.per_variable[x]) for x in range(nvars)]

    # A: some transition leaves the initial value at step 1
    for x in range(nvars):
        f0 = task.initial[x]
        inst.add_clause(
            [U[i, 1] for i in table.per_variable[x] if T[i].mechanical or T[i].source == f0], "A"
        )
        if has_mech[x]:
            # a mechanical transition alone satisfies the disjunction above, so
            # wrong-source transitions must be excluded explicitly
            for i in table.per_variable[x]:
                if not T[i].mechanical and T[i].source != f0:
                    inst.add_clause([-U[i, 1]], "A")

    # B: goal values reached at step N
    for x, g in task.goal:
        lits = [U[i, N] for i in table.per_variable[x] if T[i].target == g]
        if not lits:
            raise UnsatisfiableEncoding(f"no transition reaches goal {task.fact_name(x, g)}")
        inst.add_clause(lits, "B")

    succ = {}
    pred = {}
    for x in range(nvars):
        for i in table.per_variable[x]:
            f = T[i].target
            succ[i] = [j for j in table.per_variable[x] if T[j].mechanical or T[j].source == f]
            if not T[i].mechanical:
                pred[i] = [j for j in table.per_variable[x] if T[j].target == T[i].source]

    for t in range(1, N):
        for i, nxt in succ.items():
            inst.add_clause([-U[i, t]] + [U[j, t + 1] for j in nxt], "C")
    for t in range(2, N + 1):
        for i, prv in pred.items():
            inst.add_clause([-U[i, t]] + [U[j, t - 1] for j in prv], "D")

    # E: transition mutex per variable
    mutex_pairs = []
    for x in range(nvars):
        members = table.per_variable[x]
        pairs = [(i, j) for i, j in combinations(members, 2) if transition_mutex(T[i], T[j])]
        complete = len(pairs) == len(members) * (len(members) - 1) // 2
        mutex_pairs.append((members, pairs, complete))
    for t in range(1, N + 1):
        for members, pairs, complete in mutex_pairs:
            if complete:
                inst.add_clauses(at_most_one([U[i, t] for i in members], opts.clique_mode, inst.new_aux), "E")
            else:
                inst.add_clauses([[-U[i, t], -U[j, t]] for i, j in pairs], "E")

    non_prev = table.non_prevailing()
    cliques = [d for d in non_prev if d not in skipped and len(table.supporters[d]) > 1]
    conj_aux: dict[tuple[int, int], int] = {}

    def single_literal(a, t):
        lits = action_lit(a, t)
        if len(lits) == 1:
            return lits[0]
        if (a, t) not in conj_aux:
            z = inst.new_aux()
            inst.add_clause([-l for l in lits] + [z], "H")
            conj_aux[a, t] = z
        return conj_aux[a, t]

    for t in range(1, N + 1):
        # F: an action implies each of its transitions
        for a in range(len(task.operators)):
            neg = [-l for l in action_lit(a, t)]
            for d in sorted(table.trans_of[a]):
                inst.add_clause(neg + [U[d, t]], "F")
        # G: a non-prevailing transition needs a supporting action
        for d in non_prev:
            u = U[d, t]
            conjs = []
            for a in sorted(table.supporters[d]):
                c = tuple(l for l in action_lit(a, t) if l != u)
                if not c:
                    break
                conjs.append(c)
            else:
                _or_of_conjunctions(inst, [-u], conjs, "G")
        # H: actions sharing a non-prevailing transition are mutex
        for d in cliques:
            acts = sorted(table.supporters[d])
            if opts.clique_mode is CliqueMode.PAIRWISE:
                for a, b in combinations(acts, 2):
                    inst.add_clause([-l for l in action_lit(a, t) + action_lit(b, t)], "H")
            else:
                members = [single_literal(a, t) for a in acts]
                inst.add_clauses(at_most_one(members, opts.clique_mode, inst.new_aux), "H")

    inst.meta.update(
        encoding="sase",
        substitution=sub,
        skipped_cliques=skipped,
        transition_vars=len(table.all) * N,
        action_vars=len(A),
        aux_vars=sum(1 for k in inst.keys.values() if k.role == AUX),
        **clique_stats(table, skipped),
        **{f"reduce_{k}": v for k, v in reduction_stats(task, sub).items()},
    )
    return inst


def decode_sase(assignment: Mapping[int, bool], inst: CnfInstance, sub: ActionSubstitution | None = None) -> ParallelPlan:
    """Read the parallel plan off a model of an ``encode_sase`` instance."""
    if sub is None:
        sub = inst.meta.get("substitution", ActionSubstitution())
    N = inst.horizon
    steps = [set() for _ in range(N)]
    for var, key in inst.keys.items():
        if key.role == ACTION and assignment.get(var, False):
            steps[key.time - 1].add(key.obj)
    for a, ds in sub.conj.items():
        for t in range(1, N + 1):
            if all(assignment.get(inst.lookup(VarKey(TRANSITION, d, t)), False) for d in ds):
                steps[t - 1].add(a)
    return ParallelPlan.of(steps)
