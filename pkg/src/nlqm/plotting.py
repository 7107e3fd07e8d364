"""SVG line plots of run observables (|gamma|, tau, N, purity against t)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no date so repeated runs give identical files
matplotlib.rcParams["svg.hashsalt"] = "nlqm"


def _series(table):
    out = {}
    if "Re_gamma" in table:
        out["abs_gamma"] = np.hypot(table["Re_gamma"], table["Im_gamma"])
    for name in ("tau", "N", "purity", "norm"):
        if name in table:
            out[name] = table[name]
    return out


def plot_observables(table: dict, directory) -> list:
    """Write one ``<name>.svg`` per available observable; returns the paths."""
    out = Path(directory)
    paths = []
    for name, y in _series(table).items():
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(table["t"], y, lw=1.2)
        ax.set_xlabel("t")
        ax.set_ylabel("|gamma|" if name == "abs_gamma" else name)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        path = out / f"{name}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths
