"""Log-log figure rendering for experiment report output.

Thin wrappers over matplotlib kept separate from the CLI so headless
use never imports a GUI backend by accident.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def save_curve_figure(path, ns, series, xlabel, ylabel, title):
    """Render one or more positive series against n on log-log axes.

    Args:
        path: output image file (format from extension, e.g. .png).
        ns: shared horizontal grid.
        series: mapping of legend label -> value sequence.
        xlabel/ylabel/title: axis text.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, values in series.items():
        ax.loglog(ns, values, marker="o", markersize=3.5, linewidth=1.2,
                  label=str(label))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if len(series) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
