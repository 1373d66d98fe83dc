import pytest
from hypothesis import given, settings

from sasesat.errors import ApplicabilityError
from sasesat.fixtures import all_fixtures
from sasesat.sas_model import UNKNOWN, toy_fixture
from sasesat.transitions import (
    Kind,
    Transition,
    action_applicable,
    apply_actions,
    apply_transition_set,
    extract_transitions,
    s_mutex,
    s_mutex_matrix,
    transition_mutex,
)

from .conftest import tasks


def test_toy_transitions():
    task = toy_fixture()
    table = extract_transitions(task)
    labels = sorted(t.label(task) for t in table.all)
    assert labels == sorted(
        ["x:f->f", "x:g->g", "x:h->h", "x:f->g", "x:g->h", "y:d->d", "y:e->e", "y:d->e", "y:e->d"]
    )
    assert len(table.all) == 9
    fg = table.find(0, 0, 1)
    ed = table.find(1, 1, 0)
    assert table.supporters[fg] == {0, 1}
    assert table.supporters[ed] == {1, 2}
    assert table.supporters[table.find(0, 0, 0)] == frozenset()
    assert table.trans_of[0] == {fg, table.find(1, 0, 1)}


def test_kinds():
    assert Transition(0, 1, 2).kind is Kind.REGULAR
    assert Transition(0, 1, 1).kind is Kind.PREVAILING
    assert Transition(0, UNKNOWN, 1).kind is Kind.MECHANICAL


@pytest.mark.parametrize(
    "d1,d2,expected",
    [
        (Transition(0, 0, 1), Transition(0, 1, 2), True),
        (Transition(0, 0, 1), Transition(0, 0, 2), True),
        (Transition(0, 0, 0), Transition(0, 1, 1), True),
        (Transition(0, 0, 1), Transition(1, 0, 1), False),
        (Transition(0, 0, 1), Transition(0, 0, 1), False),
        (Transition(0, UNKNOWN, 1), Transition(0, 0, 1), False),
        (Transition(0, UNKNOWN, 1), Transition(0, 0, 2), True),
        (Transition(0, UNKNOWN, 1), Transition(0, UNKNOWN, 2), True),
    ],
)
def test_transition_mutex(d1, d2, expected):
    assert transition_mutex(d1, d2) is expected
    assert transition_mutex(d2, d1) is expected


def test_toy_s_mutex():
    table = extract_transitions(toy_fixture())
    m = s_mutex_matrix(table)
    # every pair of TOY actions touches x with different transitions
    assert m[0][1] and m[0][2] and m[1][2]
    assert not m[0][0]


def test_independent_actions_are_not_s_mutex():
    task = all_fixtures()["rovers"]
    table = extract_transitions(task)
    assert not s_mutex(task.operator_index("r1_ab"), task.operator_index("r2_ab"), table)
    assert s_mutex(task.operator_index("r1_bc"), task.operator_index("snap"), table)


def test_apply_transition_set():
    assert apply_transition_set((0, 0), [Transition(0, 0, 1), Transition(1, UNKNOWN, 1)]) == (1, 1)
    with pytest.raises(ApplicabilityError):
        apply_transition_set((0, 0), [Transition(0, 1, 2)])
    with pytest.raises(ApplicabilityError):
        apply_transition_set((0, 0), [Transition(0, 0, 1), Transition(0, 0, 0)])


def test_apply_actions_toy():
    task = toy_fixture()
    s1 = apply_actions(task, task.initial, [0])
    assert s1 == (1, 1)
    assert action_applicable(task, 2, s1)
    assert task.goal_satisfied(apply_actions(task, s1, [2]))


@settings(max_examples=80, deadline=None)
@given(tasks())
def test_s_mutex_symmetric_and_irreflexive(task):
    table = extract_transitions(task)
    m = s_mutex_matrix(table)
    n = len(task.operators)
    for a in range(n):
        assert not m[a][a]
        for b in range(n):
            assert m[a][b] == m[b][a]


@settings(max_examples=80, deadline=None)
@given(tasks())
def test_non_mutex_sets_apply_in_any_order(task):
    """Applying a pairwise non-S-mutex applicable set equals applying it sequentially in either order."""
    table = extract_transitions(task)
    state = task.initial
    app = [a for a in range(len(task.operators)) if action_applicable(task, a, state)]
    for i, a in enumerate(app):
        for b in app[i + 1 :]:
            if s_mutex(a, b, table):
                continue
            both = apply_actions(task, state, [a, b])
            ab = apply_actions(task, apply_actions(task, state, [a]), [b])
            ba = apply_actions(task, apply_actions(task, state, [b]), [a])
            assert both == ab == ba
