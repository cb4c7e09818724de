"""Figures for the per-level reports, written to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, ax, path, title):
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_orbit_growth(counts, path, verdict="", level_sizes=None):
    """Orb_n(t) against n, with |L_n| for reference when given."""
    levels = list(range(1, len(counts) + 1))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(levels, counts, "o-", label="orbits of t")
    if level_sizes is not None:
        ax.plot(levels, level_sizes, "--", color="gray", label="|L_n|")
        ax.set_yscale("log", base=2)
    ax.set_xlabel("level n")
    ax.set_ylabel("orbit count")
    ax.set_xticks(levels)
    ax.legend()
    _finish(fig, ax, path, f"Orbit growth ({verdict})" if verdict else "Orbit growth")


def plot_quotient_orders(levels, orders, path, group_name=""):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(levels, orders, "s-", base=2)
    for n, o in zip(levels, orders):
        ax.annotate(str(o), (n, o), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_xlabel("level n")
    ax.set_ylabel("|p_n(G)|")
    ax.set_xticks(levels)
    _finish(fig, ax, path, f"Level quotient orders {group_name}".strip())


def plot_reid_series(rows, path, lower_bounds=None):
    """Reidemeister, fixed-point and orbit counts per level.

    ``lower_bounds`` maps a level to a certified lower bound drawn as a marker.
    """
    levels = [r["level"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(levels, [r["reid_count"] for r in rows], "o-", label="R(phi_n)")
    ax.plot(levels, [r["fixed_count"] for r in rows], "^--", label="fixed points")
    ax.plot(levels, [r["orb_count"] for r in rows], "x:", label="Orb_n(t)")
    if lower_bounds:
        xs = sorted(lower_bounds)
        ax.plot(xs, [lower_bounds[x] for x in xs], "k*", markersize=10, label="certified bound")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("level n")
    ax.set_xticks(levels)
    ax.legend()
    _finish(fig, ax, path, "Twisted conjugacy series")
