import io

import pytest
from hypothesis import given, settings

from sasesat.cnf import CliqueMode
from sasesat.errors import OracleOverflow, SasParseError, SolverUnknownError
from sasesat.fixtures import all_fixtures
from sasesat.planner import PE, SASE, PeOptions, oracle_makespan, plan, validate_plan, write_telemetry
from sasesat.plans import ParallelPlan, format_plan, read_plan
from sasesat.sas_model import make_task, toy_fixture
from sasesat.sase import SaseOptions
from sasesat.solver import SolverConfig
from sasesat.transitions import extract_transitions

from .conftest import tasks

EXPECTED_MAKESPAN = {
    "toy": 2,
    "toy_goal_ye": None,
    "toy_unreachable": None,
    "toy_trivial": 0,
    "lamp": 3,
    "logistics_fuel": 4,
    "rovers": 3,
    "door": 4,
    "split_difference": 1,
    "mechanical_guard": None,
}


def test_expected_table_covers_fixtures():
    assert set(EXPECTED_MAKESPAN) == set(all_fixtures())


@pytest.mark.parametrize("name", sorted(EXPECTED_MAKESPAN))
def test_oracle_on_fixtures(name):
    assert oracle_makespan(all_fixtures()[name]) == EXPECTED_MAKESPAN[name]


@pytest.mark.parametrize("name", sorted(EXPECTED_MAKESPAN))
@pytest.mark.parametrize(
    "encoding,opts",
    [(SASE, SaseOptions()), (SASE, SaseOptions.plain()), (PE, PeOptions()), (PE, PeOptions(True, True))],
    ids=["sase", "sase-plain", "pe", "pe-mutex"],
)
def test_plan_matches_oracle(name, encoding, opts):
    task = all_fixtures()[name]
    table = extract_transitions(task)
    out = plan(task, encoding, opts, n_max=6, table=table)
    assert out.makespan == EXPECTED_MAKESPAN[name]
    if out.solved:
        assert validate_plan(task, table, out.plan)
    else:
        assert len(out.records) == 6


@settings(max_examples=120, deadline=None)
@given(tasks())
def test_random_tasks_match_oracle(task):
    table = extract_transitions(task)
    expected = oracle_makespan(task, table, n_bound=5)
    for encoding, opts in ((SASE, SaseOptions()), (SASE, SaseOptions.plain(CliqueMode.BINARY)), (PE, None)):
        out = plan(task, encoding, opts, n_max=5, table=table)
        assert out.makespan == expected, (encoding, opts)
        if out.solved:
            assert validate_plan(task, table, out.plan)


def test_trivial_goal_gives_empty_plan():
    out = plan(all_fixtures()["toy_trivial"])
    assert out.solved and out.makespan == 0 and out.records == []


def test_validate_rejections():
    task = toy_fixture()
    table = extract_transitions(task)
    assert validate_plan(task, table, ParallelPlan.of([{0}, {2}]))
    v = validate_plan(task, table, ParallelPlan.of([{0, 2}]))
    assert not v and "S-mutex" in v.diagnostic
    v = validate_plan(task, table, ParallelPlan.of([{2}]))
    assert not v and "not applicable" in v.diagnostic
    v = validate_plan(task, table, ParallelPlan.of([{0}]))
    assert not v and "goal not reached" in v.diagnostic


def test_unknown_status_raises():
    task = all_fixtures()["logistics_fuel"]
    with pytest.raises(SolverUnknownError):
        plan(task, SASE, SaseOptions.plain(), SolverConfig(max_conflicts=1), n_max=4)


def test_oracle_limits():
    ops = [(f"o{i}", {}, {"x": ("a", "b")}) for i in range(13)]
    task = make_task({"x": ("a", "b")}, ops, {"x": "a"}, {"x": "b"})
    with pytest.raises(OracleOverflow):
        oracle_makespan(task)
    assert oracle_makespan(toy_fixture(), n_bound=1) is None


def test_telemetry_columns():
    out = plan(toy_fixture())
    buf = io.StringIO()
    write_telemetry(out, buf)
    rows = buf.getvalue().splitlines()
    assert rows[0] == "N,vars,clauses,decisions,conflicts,status,wall_time_ms"
    assert [r.split(",")[5] for r in rows[1:]] == ["UNSAT", "SAT"]


def test_plan_text_round_trip():
    task = make_task(
        {"x": ("a", "b")},
        [("move a b", {}, {"x": ("a", "b")}), ("noop", {"x": "a"}, {})],
        {"x": "a"},
        {"x": "b"},
    )
    p = ParallelPlan.of([{0, 1}, set()])
    text = format_plan(p, task)
    assert text.splitlines()[0] == "step 1: (move a b) noop"
    assert read_plan(text, task) == p


def test_read_plan_errors():
    task = toy_fixture()
    with pytest.raises(SasParseError):
        read_plan("step 1: a9\n", task)
    with pytest.raises(SasParseError):
        read_plan("step 2: a1\n", task)
