"""Small handcrafted SAS+ tasks used by the test suites and the CLI demo.

Each is small enough for the brute-force oracle (at most 12 actions).
"""

from __future__ import annotations

from .sas_model import SasTask, make_task, toy_fixture


def toy() -> SasTask:
    return toy_fixture()


def toy_goal_ye() -> SasTask:
    # after a3 sets y=d, x can never return to f, so y=e is lost for good
    return make_task(
        variables={"x": ("f", "g", "h"), "y": ("d", "e")},
        operators=[
            ("a1", {}, {"x": ("f", "g"), "y": ("d", "e")}),
            ("a2", {}, {"x": ("f", "g"), "y": ("e", "d")}),
            ("a3", {}, {"x": ("g", "h"), "y": ("e", "d")}),
        ],
        initial={"x": "f", "y": "d"},
        goal={"x": "h", "y": "e"},
    )


def toy_unreachable() -> SasTask:
    return make_task(
        variables={"x": ("f", "g", "h", "z"), "y": ("d", "e")},
        operators=[
            ("a1", {}, {"x": ("f", "g"), "y": ("d", "e")}),
            ("a2", {}, {"x": ("f", "g"), "y": ("e", "d")}),
            ("a3", {}, {"x": ("g", "h"), "y": ("e", "d")}),
        ],
        initial={"x": "f", "y": "d"},
        goal={"x": "z"},
    )


def toy_trivial() -> SasTask:
    return make_task(
        variables={"x": ("f", "g", "h"), "y": ("d", "e")},
        operators=[
            ("a1", {}, {"x": ("f", "g"), "y": ("d", "e")}),
            ("a2", {}, {"x": ("f", "g"), "y": ("e", "d")}),
            ("a3", {}, {"x": ("g", "h"), "y": ("e", "d")}),
        ],
        initial={"x": "f", "y": "d"},
        goal={"x": "f"},
    )


def lamp() -> SasTask:
    """Mechanical effects, including one that shares its target with a regular transition."""
    return make_task(
        variables={"switch": ("off", "on"), "power": ("low", "high")},
        operators=[
            ("charge", {}, {"power": ("low", "high")}),
            ("turn_on", {"power": "high"}, {"switch": ("off", "on")}),
            ("turn_off", {}, {"switch": ("on", "off")}),
            ("reset", {}, {"switch": (None, "off")}),
            ("drain", {}, {"power": (None, "low")}),
        ],
        initial={"switch": "off", "power": "low"},
        goal={"switch": "on", "power": "low"},
    )


def logistics_fuel() -> SasTask:
    """Drive actions form unary difference sets (same move, different fuel step)."""
    return make_task(
        variables={"truck": ("A", "B"), "pkg": ("A", "B", "T"), "fuel": ("full", "half", "empty")},
        operators=[
            ("drive_AB_full", {}, {"truck": ("A", "B"), "fuel": ("full", "half")}),
            ("drive_AB_half", {}, {"truck": ("A", "B"), "fuel": ("half", "empty")}),
            ("drive_BA_full", {}, {"truck": ("B", "A"), "fuel": ("full", "half")}),
            ("drive_BA_half", {}, {"truck": ("B", "A"), "fuel": ("half", "empty")}),
            ("load_A", {"truck": "A"}, {"pkg": ("A", "T")}),
            ("load_B", {"truck": "B"}, {"pkg": ("B", "T")}),
            ("unload_A", {"truck": "A"}, {"pkg": ("T", "A")}),
            ("unload_B", {"truck": "B"}, {"pkg": ("T", "B")}),
            ("refuel_B", {"truck": "B"}, {"fuel": (None, "full")}),
        ],
        initial={"truck": "A", "pkg": "A", "fuel": "half"},
        goal={"pkg": "B", "truck": "A"},
    )


def rovers() -> SasTask:
    """Independent movers that can act in parallel."""
    return make_task(
        variables={"r1": ("a", "b", "c"), "r2": ("a", "b", "c"), "pic": ("no", "yes")},
        operators=[
            ("r1_ab", {}, {"r1": ("a", "b")}),
            ("r1_bc", {}, {"r1": ("b", "c")}),
            ("r1_ba", {}, {"r1": ("b", "a")}),
            ("r2_ab", {}, {"r2": ("a", "b")}),
            ("r2_bc", {}, {"r2": ("b", "c")}),
            ("r2_ba", {}, {"r2": ("b", "a")}),
            ("snap", {"r1": "c"}, {"pic": ("no", "yes")}),
        ],
        initial={"r1": "a", "r2": "a", "pic": "no"},
        goal={"r1": "c", "r2": "c", "pic": "yes"},
    )


def door() -> SasTask:
    """Prevail-heavy: a key opens a door that gates the last move."""
    return make_task(
        variables={"robot": ("r1", "r2", "r3"), "door": ("closed", "open"), "key": ("r1", "held")},
        operators=[
            ("pick_key", {"robot": "r1"}, {"key": ("r1", "held")}),
            ("move_12", {}, {"robot": ("r1", "r2")}),
            ("move_21", {}, {"robot": ("r2", "r1")}),
            ("move_23", {"door": "open"}, {"robot": ("r2", "r3")}),
            ("move_32", {"door": "open"}, {"robot": ("r3", "r2")}),
            ("open_door", {"key": "held", "robot": "r2"}, {"door": ("closed", "open")}),
        ],
        initial={"robot": "r1", "door": "closed", "key": "r1"},
        goal={"robot": "r3"},
    )


def split_difference() -> SasTask:
    """Two supporters of one transition whose other transitions lie on different variables."""
    return make_task(
        variables={"m": ("p", "q"), "u": ("n", "y"), "w": ("n", "y")},
        operators=[
            ("act_u", {}, {"m": ("p", "q"), "u": ("n", "y")}),
            ("act_w", {}, {"m": ("p", "q"), "w": ("n", "y")}),
            ("set_u", {}, {"u": ("n", "y")}),
            ("set_w", {}, {"w": ("n", "y")}),
        ],
        initial={"m": "p", "u": "n", "w": "n"},
        goal={"m": "q", "u": "y", "w": "y"},
    )


def mechanical_guard() -> SasTask:
    """Unsolvable: ``fix`` needs light=off, which never holds.

    The mechanical ``flip`` shares the initial value of light, so the initial
    step must rule out the off->on transition explicitly.
    """
    return make_task(
        variables={"lamp": ("ok", "broken", "dim"), "light": ("off", "on")},
        operators=[
            ("fix", {}, {"lamp": (None, "ok"), "light": ("off", "on")}),
            ("flip", {}, {"light": (None, "on")}),
        ],
        initial={"lamp": "dim", "light": "on"},
        goal={"lamp": "ok"},
    )


FIXTURES = {
    "toy": toy,
    "toy_goal_ye": toy_goal_ye,
    "toy_unreachable": toy_unreachable,
    "toy_trivial": toy_trivial,
    "lamp": lamp,
    "logistics_fuel": logistics_fuel,
    "rovers": rovers,
    "door": door,
    "split_difference": split_difference,
    "mechanical_guard": mechanical_guard,
}


def all_fixtures() -> dict[str, SasTask]:
    return {name: build() for name, build in FIXTURES.items()}
