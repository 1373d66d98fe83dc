import io
import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sasesat.cnf import (
    ACTION,
    AUX,
    TRANSITION,
    CliqueMode,
    CnfInstance,
    Status,
    VarKey,
    at_most_one,
    dimacs_text,
    parse_solver_output,
    read_dimacs,
)
from sasesat.errors import AllocationError, DimacsError, EncodingError, SolverOutputError


def _amo_instance(n, mode):
    inst = CnfInstance()
    xs = [inst.alloc(VarKey(ACTION, i)) for i in range(n)]
    inst.add_clauses(at_most_one(xs, mode, inst.new_aux))
    return inst, xs


def _projections(inst, xs):
    """Member assignments that extend to a full model."""
    aux = [v for v in range(1, inst.var_count + 1) if v not in xs]
    feasible = set()
    for bits in product((False, True), repeat=len(xs)):
        for extra in product((False, True), repeat=len(aux)):
            a = dict(zip(xs, bits)) | dict(zip(aux, extra))
            if inst.satisfied_by(a):
                feasible.add(bits)
                break
    return feasible


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("mode", list(CliqueMode))
def test_at_most_one_exhaustive(n, mode):
    inst, xs = _amo_instance(n, mode)
    expected = {bits for bits in product((False, True), repeat=n) if sum(bits) <= 1}
    assert _projections(inst, xs) == expected


@pytest.mark.parametrize("n", range(1, 9))
def test_binary_sizes(n):
    inst, xs = _amo_instance(n, CliqueMode.BINARY)
    width = math.ceil(math.log2(n)) if n > 1 else 0
    assert inst.var_count - n == width
    assert len(inst.clauses) == n * width


def test_pairwise_sizes():
    inst, _ = _amo_instance(6, CliqueMode.PAIRWISE)
    assert len(inst.clauses) == 15
    assert inst.var_count == 6


def test_at_most_one_rejects_bad_input():
    with pytest.raises(EncodingError):
        at_most_one([], CliqueMode.BINARY, lambda: 0)
    with pytest.raises(EncodingError):
        at_most_one([1, 1], CliqueMode.PAIRWISE, lambda: 0)


def test_alloc_and_lookup():
    inst = CnfInstance(names={TRANSITION: ["x:f->g"]})
    v = inst.alloc(VarKey(TRANSITION, 0, 3))
    assert inst.lookup(VarKey(TRANSITION, 0, 3)) == v
    assert inst.get(VarKey(TRANSITION, 0, 4)) is None
    assert inst.describe(v) == "transition:x:f->g@3"
    z = inst.new_aux()
    assert inst.role_of(z) == AUX
    assert inst.describe(z).startswith("aux:")
    with pytest.raises(AllocationError):
        inst.alloc(VarKey(TRANSITION, 0, 3))
    with pytest.raises(AllocationError):
        inst.lookup(VarKey(ACTION, 9, 1))


def test_add_clause_hygiene():
    inst = CnfInstance()
    a, b = inst.new_aux(), inst.new_aux()
    assert inst.add_clause([a, a, -b], "X")
    assert inst.clauses[-1] == (a, -b)
    assert not inst.add_clause([a, -a])
    assert len(inst.clauses) == 1
    assert inst.class_clauses("X") == [(a, -b)]
    with pytest.raises(EncodingError):
        inst.add_clause([])
    with pytest.raises(EncodingError):
        inst.add_clause([a, 7])


def test_dimacs_round_trip_with_comments():
    inst, xs = _amo_instance(5, CliqueMode.BINARY)
    text = dimacs_text(inst)
    assert text.startswith("c var 1 = action:")
    assert "p cnf 8 15" in text
    back = read_dimacs(io.StringIO(text))
    assert back.var_count == inst.var_count
    assert back.clauses == inst.clauses


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(1, 12).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=5),
        max_size=30,
    )
)
def test_dimacs_round_trip_random(clauses):
    inst = CnfInstance()
    for _ in range(12):
        inst.new_aux()
    for c in clauses:
        inst.add_clause(c)
    back = read_dimacs(dimacs_text(inst, comments=False))
    assert back.clauses == inst.clauses
    assert back.var_count == 12


@pytest.mark.parametrize(
    "text,err",
    [
        ("1 2 0\n", "before problem line"),
        ("p cnf 2 1\n1 3 0\n", "exceeds"),
        ("p cnf 2 2\n1 2 0\n", "declares 2"),
        ("p dnf 2 1\n1 0\n", "bad problem line"),
        ("", "missing problem line"),
    ],
)
def test_dimacs_errors(text, err):
    with pytest.raises(DimacsError, match=err):
        read_dimacs(text)


def test_parse_solver_output():
    out = parse_solver_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n")
    assert out.status is Status.SAT
    assert out.assignment == {1: True, 2: False, 3: True}
    assert parse_solver_output("s UNSATISFIABLE\n").status is Status.UNSAT
    assert parse_solver_output("c nothing\n").status is Status.UNKNOWN
    with pytest.raises(SolverOutputError):
        parse_solver_output("s SATISFIABLE\nv 1 -1 0\n")
