"""Figures for the stats report, written to files next to the CSV output."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cnf import ACTION, TRANSITION  # noqa: E402
from .stats import EpochCounts, HProfile  # noqa: E402

COLORS = {TRANSITION: "#1f77b4", ACTION: "#d62728", "other": "#7f7f7f"}


def _figure(width=6.0, height=None):
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height or width * golden_ratio))
    ax.tick_params(labelsize=9)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_h_distribution(profile: HProfile, path) -> None:
    fig, ax = _figure()
    top = max(profile.h.values(), default=0)
    bins = range(0, top + 2)
    for role in (TRANSITION, ACTION, "other"):
        values = [profile.h[v] for v in profile.of_role(role)]
        if values:
            ax.hist(values, bins=bins, alpha=0.6, label=f"{role} ({len(values)})", color=COLORS[role])
    ax.set_xlabel("h(v): clauses containing v")
    ax.set_ylabel("variables")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_transition_index(series, path) -> None:
    fig, ax = _figure()
    ps = [p for p, _ in series]
    ax.plot(ps, [float(i) for _, i in series], marker="o", color=COLORS[TRANSITION])
    ax.axhline(1.0, color="black", linewidth=0.8, linestyle="--")
    ax.set_xscale("log")
    ax.set_xlabel("p (%)")
    ax.set_ylabel("transition index")
    _save(fig, path)


def plot_branching(counts: EpochCounts, path) -> None:
    fig, ax = _figure()
    freqs = counts.frequencies()
    epochs = range(1, len(freqs) + 1)
    ax.plot(epochs, [f for f, _ in freqs], label="transition", color=COLORS[TRANSITION])
    ax.plot(epochs, [f for _, f in freqs], label="action", color=COLORS[ACTION])
    ax.set_xlabel(f"epoch ({counts.k} decisions)")
    ax.set_ylabel("branching frequency")
    ax.legend(fontsize=8)
    _save(fig, path)
