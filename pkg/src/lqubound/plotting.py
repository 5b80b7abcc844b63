"""Figure rendering for sweep results.

Uses the Agg backend so rendering works headless; files are written in
whatever format the output suffix selects (the CLI always asks for SVG).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

PARAM_LABELS = {"p": "mixing parameter p", "h": "family parameter h", "t": "time t"}


def render_sweep_figure(rows, path, title: str = "", parameter: str = "p") -> None:
    """Plot bound (and optimized values, when present) against the parameter."""
    xs = [row.param_value for row in rows]
    bounds = [row.bound for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(xs, bounds, "o-", markersize=3.5, linewidth=1.2, label="closed-form bound")
    if any(row.optimized is not None for row in rows):
        opts = [row.optimized for row in rows]
        ax.plot(xs, opts, "s--", markersize=3.5, linewidth=1.2, label="GA optimized")
    ax.set_xlabel(PARAM_LABELS.get(parameter, parameter))
    ax.set_ylabel("local quantum uncertainty")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
