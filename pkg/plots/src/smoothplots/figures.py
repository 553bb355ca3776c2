"""Figure builders over harness tables, and the PlotSpec renderer.

Each builder takes parsed tables and returns a matplotlib Figure whose
plotted series are the table rows (sorted by the smoothness column where one
exists; smoothness axes are log scaled).  All numeric truth comes from the
files: no selection mechanism is ever recomputed here.

Figure kinds
  sweep      regret vs smoothness target, one curve per mechanism
  tradeoff   worst one-tick marginal movement vs regret per budget slot
  tightness  realized worst-case ratio vs target, with the dashed y = L line
  ccdf       fraction of candidates (and of selected mass) above a utility
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .tables import Table, read_table


def _series_by_mechanism(table: Table, x_col: str, y_col: str):
    """[(mechanism, xs, ys)] with rows sorted by x within each mechanism."""
    mechs = table.column("mechanism", str)
    xs = table.column(x_col)
    ys = table.column(y_col)
    out = []
    for name in dict.fromkeys(mechs):
        pts = sorted((x, y) for x, m, y in zip(xs, mechs, ys) if m == name)
        out.append((name, [p[0] for p in pts], [p[1] for p in pts]))
    return out


def sweep_figure(table: Table):
    table.require("L", "mechanism", "regret")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, xs, ys in _series_by_mechanism(table, "L", "regret"):
        ax.plot(xs, ys, marker="o", label=name)
    ax.set_xscale("log")
    ax.set_xlabel("smoothness target L")
    ax.set_ylabel("regret")
    ax.legend()
    return fig


def tradeoff_figure(table: Table):
    table.require("mechanism", "ratio", "regret_per_k")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    mechs = table.column("mechanism", str)
    ratios = table.column("ratio")
    regrets = table.column("regret_per_k")
    for name in dict.fromkeys(mechs):
        xs = [x for x, m in zip(ratios, mechs) if m == name]
        ys = [y for y, m in zip(regrets, mechs) if m == name]
        ax.scatter(xs, ys, label=name)
    ax.set_xscale("log")
    ax.set_xlabel("worst one-tick l1 change per tick")
    ax.set_ylabel("regret per budget slot")
    ax.legend()
    return fig


def tightness_figure(table: Table):
    table.require("L", "mechanism", "ratio")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, xs, ys in _series_by_mechanism(table, "L", "ratio"):
        ax.plot(xs, ys, marker="o", label=name)
    targets = sorted(set(table.column("L")))
    ax.plot(targets, targets, linestyle="--", color="black", label="bound y = L")
    ax.set_xscale("log")
    ax.set_xlabel("smoothness target L")
    ax.set_ylabel("worst realized ratio")
    ax.legend()
    return fig


def ccdf_series(utilities, probabilities):
    """(xs, all-candidate ccdf, selected-mass ccdf) sorted by utility.

    At each sorted utility the first series is the fraction of candidates
    with utility at or above it, the second the fraction of expected
    selections (probability mass over the budget) at or above it.
    """
    order = sorted(range(len(utilities)), key=lambda i: utilities[i])
    xs = [utilities[i] for i in order]
    n = len(xs)
    total = sum(probabilities)
    if total <= 0:
        raise ValueError("selected-mass ccdf needs a positive probability total")
    weights = [probabilities[i] / total for i in order]
    everyone = [(n - i) / n for i in range(n)]
    mass = []
    acc = 1.0
    for w in weights:
        mass.append(acc)
        acc -= w
    return xs, everyone, mass


def ccdf_figure(table: Table):
    table.require("utility", "probability")
    xs, everyone, mass = ccdf_series(table.column("utility"), table.column("probability"))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(xs, everyone, drawstyle="steps-post", label="all candidates")
    ax.plot(xs, mass, drawstyle="steps-post", label="selected mass")
    ax.set_xlabel("utility")
    ax.set_ylabel("fraction at or above")
    ax.legend()
    return fig


KINDS = {
    "sweep": sweep_figure,
    "tradeoff": tradeoff_figure,
    "tightness": tightness_figure,
    "ccdf": ccdf_figure,
}


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    tables: tuple
    out: Path
    xlabel: str = ""
    ylabel: str = ""


def render(spec: PlotSpec) -> Path:
    """Build the figure for one spec and write it to spec.out."""
    if spec.kind not in KINDS:
        raise ValueError(f"unknown figure kind {spec.kind!r}")
    parsed = [read_table(p) for p in spec.tables]
    fig = KINDS[spec.kind](*parsed)
    ax = fig.axes[0]
    if spec.xlabel:
        ax.set_xlabel(spec.xlabel)
    if spec.ylabel:
        ax.set_ylabel(spec.ylabel)
    out = Path(spec.out)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
