"""Line plots of scan results written to image files (svg, pdf or png)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .results import ScanResult  # noqa: E402

_SKIP = {"g", "status", "n_max"}


def _panel(name):
    for prefix in ("photons", "transmission", "excited", "residual", "temperature"):
        if name.startswith(prefix):
            return prefix
    if name.startswith("D_"):
        return "D"
    if name.startswith("G_"):
        return "G"
    return "other"


def plot_scan(result: ScanResult, path, columns=None, title=None):
    """One panel per family of columns (photons, D, G, ...) against the axis."""
    axis = result.columns[0]
    cols = columns or [c for c in result.columns[1:] if c not in _SKIP]
    panels = {}
    for c in cols:
        panels.setdefault(_panel(c), []).append(c)
    n = max(len(panels), 1)
    fig, axes = plt.subplots(n, 1, figsize=(6, 2.8 * n), sharex=True, squeeze=False)
    xv = result.column(axis)
    for ax, (name, group) in zip(axes[:, 0], panels.items()):
        for c in group:
            y = result.column(c)
            style = "-" if c.endswith("exact") else "--"
            ax.plot(xv, y, style, label=c, lw=1.2)
        ax.set_ylabel(name)
        ax.legend(fontsize=7, loc="best")
    axes[-1, 0].set_xlabel(axis)
    fig.suptitle(title or result.meta.get("preset", ""))
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_region(result: ScanResult, path, title="bistable region"):
    """Scatter map of the bistable points of a nu-plane region scan."""
    re = result.column("nu_re")
    im = result.column("nu_im")
    b = result.column("bistable").astype(bool)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(re[~b], im[~b], s=2, c="0.85")
    ax.scatter(re[b], im[b], s=2, c="C3", label="bistable")
    ax.set_xlabel("Re nu")
    ax.set_ylabel("Im nu")
    ax.set_title(title)
    if np.any(b):
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
