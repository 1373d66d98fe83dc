from itertools import chain
from itertools import combinations as subsets

import pytest
from hypothesis import given, settings

from sasesat.cnf import ACTION, FACT, VarKey
from sasesat.errors import EncodingError
from sasesat.fixtures import all_fixtures
from sasesat.pe import (
    StripsAction,
    StripsView,
    action_mutex_pairs,
    competing_needs,
    decode_pe,
    derive_strips,
    encode_pe,
    facts_mutex,
    p_mutex,
)
from sasesat.planner import validate_plan
from sasesat.sas_model import make_task, toy_fixture
from sasesat.solver import solve
from sasesat.transitions import extract_transitions, s_mutex

from .conftest import tasks


def _view(task):
    table = extract_transitions(task)
    return derive_strips(task, table), table


def test_toy_strips_view():
    task = toy_fixture()
    view, _ = _view(task)
    assert view.fact_names == ("x=f", "x=g", "x=h", "y=d", "y=e")
    a1 = view.actions[0]
    assert a1.pre == {view.fact(0, 0), view.fact(1, 0)}
    assert a1.add == {view.fact(0, 1), view.fact(1, 1)}
    assert a1.delete == {view.fact(0, 0), view.fact(1, 0)}
    assert len(view.actions) == 3 + 5
    assert view.actions[view.dummy(2)].name == "dum[x=h]"
    assert view.initial == {0, 3}
    assert view.goal == {2, 3}


def test_mechanical_effect_deletes_other_values():
    task = all_fixtures()["lamp"]
    view, _ = _view(task)
    reset = view.actions[task.operator_index("reset")]
    assert reset.pre == frozenset()
    assert reset.add == {view.fact(0, 0)}
    assert reset.delete == {view.fact(0, 1)}


def test_static_fact_mutex():
    view, _ = _view(toy_fixture())
    assert facts_mutex(view, 0, 1)
    assert not facts_mutex(view, 0, 3)
    assert not facts_mutex(view, 2, 2)


def test_p_mutex_on_toy():
    view, _ = _view(toy_fixture())
    # a1 deletes x=f, which a2 needs
    assert p_mutex(view, 0, 1, with_competing_needs=False)
    # a1 needs x=f and a3 needs x=g
    assert competing_needs(view, 0, 2)


def test_class_five_pairs_include_dummies():
    task = toy_fixture()
    view, table = _view(task)
    pairs = set(action_mutex_pairs(view, table))
    assert (0, view.dummy(view.fact(0, 0))) in pairs
    assert (0, view.dummy(view.fact(0, 2))) not in pairs


def test_toy_solution():
    task = toy_fixture()
    view, table = _view(task)
    assert not solve(encode_pe(view, table, 1)).sat
    inst = encode_pe(view, table, 2)
    res = solve(inst)
    assert decode_pe(res.assignment, inst).names(task) == [["a1"], ["a3"]]


def test_closed_world_initial_layer():
    task = toy_fixture()
    view, table = _view(task)
    inst = encode_pe(view, table, 1)
    init = {c[0] for c in inst.class_clauses("I")}
    for f in range(len(view.facts)):
        w = inst.lookup(VarKey(FACT, f, 1))
        assert (w if f in view.initial else -w) in init


def test_optional_classes():
    task = toy_fixture()
    view, table = _view(task)
    base = encode_pe(view, table, 2)
    rich = encode_pe(view, table, 2, fact_mutex=True, competing_needs_mutex=True)
    assert "VI" not in base.classes
    assert len(rich.class_clauses("VI")) == 3 * 4  # 4 same-variable pairs per layer, 3 layers
    assert rich.meta["mutex_pairs"] >= base.meta["mutex_pairs"]


def test_horizon_must_be_positive():
    view, table = _view(toy_fixture())
    with pytest.raises(EncodingError):
        encode_pe(view, table, 0)


def _flip_checks(task, n, fact_mutex):
    view, table = _view(task)
    inst = encode_pe(view, table, n, fact_mutex=fact_mutex)
    res = solve(inst)
    if not res.sat:
        return 0
    model = res.assignment
    checked = 0
    W = inst.lookup
    for t in range(1, n + 1):
        for f in range(len(view.facts)):
            # a true fact with no deleter firing can carry its no-op
            dum = W(VarKey(ACTION, view.dummy(f), t))
            if (
                not model[dum]
                and model[W(VarKey(FACT, f, t))]
                and not any(model[W(VarKey(ACTION, a, t))] for a in view.deleters(f))
            ):
                assert inst.satisfied_by(model | {dum: True})
                checked += 1
    for t in range(2, n + 2):
        for f in range(len(view.facts)):
            # a false fact added at the previous step may be set true
            w = W(VarKey(FACT, f, t))
            if not model[w] and any(model[W(VarKey(ACTION, a, t - 1))] for a in view.adders(f)):
                assert inst.satisfied_by(model | {w: True})
                checked += 1
    return checked


@pytest.mark.parametrize("fact_mutex", [False, True])
def test_free_variable_flips_on_fixtures(fact_mutex):
    total = 0
    for task in all_fixtures().values():
        for n in (2, 3, 4):
            total += _flip_checks(task, n, fact_mutex)
    assert total > 0


@settings(max_examples=60, deadline=None)
@given(tasks())
def test_free_variable_flips_random(task):
    for n in (1, 2, 3):
        _flip_checks(task, n, fact_mutex=True)


@settings(max_examples=60, deadline=None)
@given(tasks())
def test_decoded_plans_validate(task):
    view, table = _view(task)
    for n in (1, 2, 3):
        inst = encode_pe(view, table, n)
        res = solve(inst)
        if res.sat:
            assert validate_plan(task, table, decode_pe(res.assignment, inst))
            break


def test_shared_mechanical_effect_has_no_strips_counterpart():
    """Two actions with the same *->g effect share a non-prevailing transition, so they
    are S-mutex; no delete set for a sourceless effect makes them P-mutex."""
    task = make_task(
        {"x": ("f", "g", "h")},
        [("m1", {}, {"x": (None, "g")}), ("m2", {}, {"x": (None, "g")})],
        {"x": "f"},
        {"x": "g"},
    )
    assert s_mutex(0, 1, extract_transitions(task))
    others = (0, 2)
    for dels in chain.from_iterable(subsets(others, r) for r in range(len(others) + 1)):
        act = StripsAction("m", frozenset(), frozenset({1}), frozenset(dels))
        view = StripsView(((0, 0), (0, 1), (0, 2)), ("f", "g", "h"), (act, act), 2, frozenset({0}), frozenset({1}), (0,))
        assert not p_mutex(view, 0, 1)
