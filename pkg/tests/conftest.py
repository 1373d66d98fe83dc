import random

import pytest
from hypothesis import strategies as st

from sasesat.fixtures import FIXTURES
from sasesat.sas_model import make_task


def random_task(rng: random.Random, max_vars=3, max_ops=6, mechanical=0.15):
    """Small random SAS+ task; small enough for the brute-force oracle."""
    nvars = rng.randint(1, max_vars)
    variables = {f"v{i}": tuple(f"d{j}" for j in range(rng.randint(2, 3))) for i in range(nvars)}
    names = list(variables)
    ops = []
    for k in range(rng.randint(1, max_ops)):
        touched = rng.sample(names, rng.randint(1, min(2, nvars)))
        effects = {}
        for v in touched:
            dom = variables[v]
            if rng.random() < mechanical:
                effects[v] = (None, rng.choice(dom))
            else:
                pre, post = rng.sample(dom, 2)
                effects[v] = (pre, post)
        prevails = {}
        for v in names:
            if v not in effects and rng.random() < 0.3:
                prevails[v] = rng.choice(variables[v])
        ops.append((f"o{k}", prevails, effects))
    initial = {v: rng.choice(variables[v]) for v in names}
    goal_vars = rng.sample(names, rng.randint(1, nvars))
    goal = {v: rng.choice(variables[v]) for v in goal_vars}
    return make_task(variables, ops, initial, goal)


@st.composite
def tasks(draw, **kwargs):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_task(random.Random(seed), **kwargs)


@pytest.fixture(params=sorted(FIXTURES))
def fixture_task(request):
    return request.param, FIXTURES[request.param]()
