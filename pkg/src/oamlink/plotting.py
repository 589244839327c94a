"""Render result sets to matplotlib figures saved next to the CSV output."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import ResultSet


def _series(rs: ResultSet, group_cols, x_col, y_col):
    """Split rows into (group key -> (x array, y array)) preserving row order."""
    idx = {name: i for i, name in enumerate(rs.columns)}
    groups = {}
    for row in rs.rows:
        key = tuple(row[idx[c]] for c in group_cols)
        groups.setdefault(key, ([], []))
        groups[key][0].append(row[idx[x_col]])
        groups[key][1].append(row[idx[y_col]])
    return {k: (np.array(x), np.array(y)) for k, (x, y) in groups.items()}


def _label(group_cols, key):
    return ", ".join(f"{c}={v}" for c, v in zip(group_cols, key))


def _line_figure(rs, group_cols, x_col, y_col, xlabel, ylabel, logy=False):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for key, (x, y) in _series(rs, group_cols, x_col, y_col).items():
        ax.plot(x, y, label=_label(group_cols, key))
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render_resultset(rs: ResultSet, path) -> None:
    """Save a figure for the result set; layout depends on which runner
    produced it, with a generic first-axis line plot as fallback."""
    kind = rs.meta.get("scenario", "")
    if kind == "fig3":
        fig = _line_figure(
            rs, ["oblique_deg"], "subcarrier", "sinr",
            "subcarrier index", "SINR (linear)", logy=True,
        )
    elif kind == "fig4":
        fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
        for ax, metric, logy in ((axes[0], "avg_cg", False), (axes[1], "avg_imi", True)):
            for key, (x, y) in _series(
                rs, ["gamma_deg", "steering"], "alpha_deg", metric
            ).items():
                ax.plot(x, y, label=_label(["gamma_deg", "steering"], key))
            if logy:
                ax.set_yscale("log")
            ax.set_xlabel("alpha (deg)")
            ax.set_ylabel(metric)
            ax.grid(True, alpha=0.3)
        axes[0].legend(fontsize=7)
        fig.tight_layout()
    elif kind == "fig5":
        fig = _line_figure(
            rs, ["oblique_deg", "steering"], "snr_db", "se",
            "SNR (dB)", "spectral efficiency (bit/s/Hz)",
        )
    elif kind == "fig6":
        fig = _line_figure(
            rs, ["element_count", "steering"], "snr_db", "se",
            "SNR (dB)", "spectral efficiency (bit/s/Hz)",
        )
    else:
        # Generic: last axis on x, one curve per metric per remaining group.
        metric_cols = list(rs.meta["config"].get("metrics", []))
        sweep_cols = [c for c in rs.columns if c not in metric_cols]
        if not sweep_cols:
            raise ValueError("result set has no sweep axis to plot against")
        x_col = sweep_cols[-1]
        group_cols = sweep_cols[:-1]
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for metric in metric_cols:
            for key, (x, y) in _series(rs, group_cols, x_col, metric).items():
                label = metric if not group_cols else f"{metric} ({_label(group_cols, key)})"
                ax.plot(x, y, marker="o" if len(x) < 30 else None, label=label)
        ax.set_xlabel(x_col)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
