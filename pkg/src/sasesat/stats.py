"""Clause-frequency profiles, top-p variable sets, transition index and branching frequency."""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, TextIO

from .cnf import ACTION, TRANSITION, CnfInstance
from .errors import SasePlanError

OTHER = "other"
DEFAULT_PERCENTILES = (1, 2, 5, 10)


def role_class(role: str) -> str:
    """Collapse variable roles onto transition / action / other."""
    return role if role in (TRANSITION, ACTION) else OTHER


@dataclass
class HProfile:
    h: dict[int, int]
    roles: dict[int, str]

    @property
    def variables(self) -> list[int]:
        return list(self.h)

    def of_role(self, role: str) -> list[int]:
        return [v for v in self.h if self.roles[v] == role]


def h_values(instance: CnfInstance) -> HProfile:
    h = {v: 0 for v in range(1, instance.var_count + 1)}
    for clause in instance.clauses:
        for v in {abs(l) for l in clause}:
            h[v] += 1
    roles = {v: role_class(instance.role_of(v)) for v in h}
    return HProfile(h, roles)


def _ratio(p) -> Fraction:
    p = Fraction(str(p)) if isinstance(p, float) else Fraction(p)
    if not 0 < p <= 100:
        raise ValueError(f"percentile must lie in (0, 100], got {p}")
    return p


def percentile_threshold(profile: HProfile, p) -> int:
    """Largest h such that at least p% of the variables have h(v) >= it."""
    p = _ratio(p)
    values = sorted(profile.h.values(), reverse=True)
    if not values:
        raise SasePlanError("profile has no variables")
    need = math.ceil(p * len(values) / 100)
    return values[max(need, 1) - 1]


def percentile_set(profile: HProfile, p) -> set[int]:
    threshold = percentile_threshold(profile, p)
    return {v for v, h in profile.h.items() if h >= threshold}


def transition_index(profile: HProfile, p) -> Fraction:
    top = percentile_set(profile, p)
    trans = profile.of_role(TRANSITION)
    if not trans:
        raise SasePlanError("transition index undefined: no transition variables")
    top_trans = sum(1 for v in top if profile.roles[v] == TRANSITION)
    return Fraction(top_trans, len(top)) / Fraction(len(trans), len(profile.h))


def _mean_sd(values: Sequence[int]):
    if not values:
        return None, None
    return statistics.fmean(values), statistics.pstdev(values)


def summary_rows(profile: HProfile, percentiles: Sequence = DEFAULT_PERCENTILES) -> list[dict]:
    """Per-role mean/sd and mean h within each shared top-p set (None when empty)."""
    tops = {p: percentile_set(profile, p) for p in percentiles}
    rows = []
    for role in (TRANSITION, ACTION, OTHER):
        vs = profile.of_role(role)
        mean, sd = _mean_sd([profile.h[v] for v in vs])
        row = {"role": role, "count": len(vs), "mean": mean, "sd": sd}
        for p in percentiles:
            m, _ = _mean_sd([profile.h[v] for v in tops[p] if profile.roles[v] == role])
            row[f"top{p}"] = m
        rows.append(row)
    return rows


@dataclass
class EpochCounts:
    k: int
    n_transition: int
    n_action: int
    epochs: list[tuple[int, int, int]] = field(default_factory=list)  # (M_delta, M_o, M_other)
    partial: tuple[int, int, int] | None = None

    def frequencies(self) -> list[tuple[float, float]]:
        """Branching frequency per complete epoch: M/(k |V|) for transitions and actions."""
        out = []
        for md, mo, _ in self.epochs:
            fd = md / (self.k * self.n_transition) if self.n_transition else math.nan
            fo = mo / (self.k * self.n_action) if self.n_action else math.nan
            out.append((fd, fo))
        return out


def branching_frequency(decision_log: Sequence[int], roles: Mapping[int, str], k: int = 1000) -> EpochCounts:
    """Count transition/action/other decisions in consecutive epochs of ``k`` decisions.

    ``roles`` maps every variable id to its role (e.g. ``HProfile.roles``);
    its role populations give |V_delta| and |V_o|.
    """
    if k < 1:
        raise ValueError("epoch length must be >= 1")
    if not decision_log:
        raise ValueError("decision log is empty")
    classes = {v: role_class(r) for v, r in roles.items()}
    counts = EpochCounts(
        k,
        sum(1 for r in classes.values() if r == TRANSITION),
        sum(1 for r in classes.values() if r == ACTION),
    )

    def tally(chunk):
        md = sum(1 for v in chunk if classes.get(v) == TRANSITION)
        mo = sum(1 for v in chunk if classes.get(v) == ACTION)
        return md, mo, len(chunk) - md - mo

    full = len(decision_log) // k
    for e in range(full):
        counts.epochs.append(tally(decision_log[e * k : (e + 1) * k]))
    if len(decision_log) % k:
        counts.partial = tally(decision_log[full * k :])
    return counts


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "-"
    if isinstance(x, float):
        return f"{x:.4f}"
    return str(x)


def write_summary_csv(rows: list[dict], sink: TextIO) -> None:
    w = csv.writer(sink, lineterminator="\n")
    keys = list(rows[0])
    w.writerow(keys)
    for row in rows:
        w.writerow([_fmt(row[k]) for k in keys])


def write_transition_index_csv(series: Sequence[tuple], sink: TextIO) -> None:
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["p", "index"])
    for p, idx in series:
        w.writerow([p, f"{float(idx):.6f}"])


def write_branching_csv(counts: EpochCounts, sink: TextIO) -> None:
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["epoch", "freq_transition", "freq_action", "m_transition", "m_action", "m_other"])
    for e, ((fd, fo), (md, mo, mx)) in enumerate(zip(counts.frequencies(), counts.epochs), 1):
        w.writerow([e, _fmt(fd), _fmt(fo), md, mo, mx])
    if counts.partial is not None:
        md, mo, mx = counts.partial
        w.writerow(["partial", "-", "-", md, mo, mx])


def write_counters_csv(meta: Mapping, sink: TextIO) -> None:
    """Encoding-size counters (variables, clauses per class, clique and reduction counts)."""
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["counter", "value"])
    for key, value in meta.items():
        if isinstance(value, (int, float, str)) and not isinstance(value, bool):
            w.writerow([key, _fmt(value)])
