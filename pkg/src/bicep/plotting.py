"""Static figures written next to the delimited outputs.

Figures are built on :class:`matplotlib.figure.Figure` directly, without
pyplot, so rendering needs no display and holds no global state.
"""

from __future__ import annotations

import io

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .report import atomic_write_bytes

DPI = 120


def _new_figure(width=6.4, height=4.8) -> Figure:
    fig = Figure(figsize=(width, height), dpi=DPI)
    FigureCanvasAgg(fig)
    return fig


def save(fig: Figure, path) -> None:
    buf = io.BytesIO()
    # No software tag, so the bytes depend only on the data.
    fig.savefig(buf, format="png", dpi=DPI, metadata={"Software": None})
    atomic_write_bytes(path, buf.getvalue())


def plot_plane(points, path, surrogate_means=None, reference=None):
    """Series on the (E, C) plane, with an inset zoomed on the data.

    ``surrogate_means`` is a list of ``(E, C)`` pairs; ``reference`` is the
    ``(E, C)`` of a purely random sequence.
    """
    fig = _new_figure()
    ax = fig.add_subplot(111)
    E = np.array([p.E for p in points])
    C = np.array([p.C for p in points])
    ax.scatter(E, C, s=18, color="tab:blue", zorder=3)
    for p in points:
        ax.annotate(p.symbol, (p.E, p.C), fontsize=6, xytext=(2, 2),
                    textcoords="offset points")
    ax.plot([1.0], [0.0], marker="*", color="tab:red", markersize=10, label="efficient")
    ax.set_xlim(0, 1.02)
    ax.set_ylim(0, max(0.1, float(C.max()) * 1.2))
    ax.set_xlabel("normalized block entropy E")
    ax.set_ylabel("statistical complexity C")
    ax.legend(loc="upper left", fontsize=7)

    inset = ax.inset_axes([0.12, 0.35, 0.4, 0.4])
    inset.scatter(E, C, s=8, color="tab:blue")
    if surrogate_means:
        sm = np.asarray(surrogate_means)
        inset.scatter(sm[:, 0], sm[:, 1], s=8, color="magenta", label="shuffled mean")
    if reference is not None:
        inset.plot([reference[0]], [reference[1]], "k+", markersize=8, label="random")
    span = np.concatenate([E, [reference[0]] if reference is not None else []])
    lo = float(np.quantile(span, 0.1)) if span.size > 3 else float(span.min())
    inset.set_xlim(lo - 0.005, 1.0)
    inset.tick_params(labelsize=6)
    if surrogate_means or reference is not None:
        inset.legend(fontsize=5, loc="upper right")
    save(fig, path)


def plot_inefficiency_bars(ranked, path):
    fig = _new_figure(width=max(6.4, 0.18 * len(ranked) + 1.5))
    ax = fig.add_subplot(111)
    x = np.arange(len(ranked))
    ax.bar(x, [p.I for p in ranked], color="tab:gray")
    ax.set_xticks(x)
    ax.set_xticklabels([p.symbol for p in ranked], rotation=90, fontsize=6)
    ax.set_ylabel("inefficiency I")
    fig.tight_layout()
    save(fig, path)


def plot_barcode(sequences, path):
    """Rows of vertical marks at the up days of each sequence."""
    sequences = list(sequences)
    width = max(s.length for s in sequences)
    grid = np.zeros((len(sequences), width))
    for i, s in enumerate(sequences):
        grid[i, : s.length] = s.bits
    fig = _new_figure(width=8, height=max(2.0, 0.14 * len(sequences) + 1))
    ax = fig.add_subplot(111)
    ax.imshow(grid, aspect="auto", cmap="binary", interpolation="nearest")
    ax.set_yticks(np.arange(len(sequences)))
    ax.set_yticklabels([s.symbol for s in sequences], fontsize=6)
    ax.set_xlabel("day")
    fig.tight_layout()
    save(fig, path)


def plot_calibration(curve, path):
    fig = _new_figure(width=9, height=3.6)
    left, right = fig.subplots(1, 2)
    left.plot(curve.m_values, curve.stds, "o-")
    left.set_xlabel("block size m")
    left.set_ylabel("std of I")
    right.plot(curve.m_values, curve.amplitudes, "s-", color="tab:orange")
    right.set_xlabel("block size m")
    right.set_ylabel("max I - min I")
    fig.tight_layout()
    save(fig, path)


def plot_rbf(rows, path):
    """Averaged E, D, C against the flip fraction, and the resulting plane."""
    rows = np.asarray(rows, dtype=float)
    fig = _new_figure(width=9, height=3.6)
    left, right = fig.subplots(1, 2)
    for col, label in ((1, "E"), (2, "D"), (3, "C")):
        left.plot(2 * rows[:, 0], rows[:, col], "o-", label=label, markersize=3)
    left.set_xlabel("2r")
    left.legend(fontsize=7)
    right.plot(rows[:, 1], rows[:, 3], "o-", markersize=3)
    right.set_xlabel("E")
    right.set_ylabel("C")
    fig.tight_layout()
    save(fig, path)


def plot_correlation(result, path):
    fig = _new_figure(width=7, height=3.6)
    ax = fig.add_subplot(111)
    mids = [(s + e) / 2 for s, e in result.segment_bounds]
    for k, label in enumerate(("Pearson", "Kendall", "Spearman")):
        vals = [np.nan if t[k] is None else t[k] for t in result.per_segment]
        ax.plot(mids, vals, "o-", label=label, markersize=4)
    ax.set_ylim(-1.05, 1.05)
    ax.set_xlabel("segment midpoint (day index)")
    ax.set_ylabel("up/down correlation")
    ax.set_title(f"{result.pair[0]} vs {result.pair[1]}", fontsize=9)
    ax.legend(fontsize=7)
    fig.tight_layout()
    save(fig, path)
