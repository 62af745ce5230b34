"""Matplotlib figures written straight to files."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def scaling_plot(rows, slope, intercept, path) -> None:
    """Log-log plot of certified tangencies against curve count, with the fit."""
    n = [r.n_curves for r in rows]
    t = [r.tangencies_certified for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4), dpi=120)
    ax.loglog(n, t, "o", color="#c0392b", label="certified tangencies")
    fit_n = [r.n_curves for r in rows if r.k >= 2]
    if len(fit_n) >= 2:
        xs = [min(fit_n), max(fit_n)]
        ax.loglog(xs, [math.exp(intercept) * x ** slope for x in xs], "-", color="#1f5fbf",
                  label=f"least-squares slope {slope:.4f}")
    ax.loglog(n, [x ** (4 / 3) * t[-1] / n[-1] ** (4 / 3) for x in n], ":", color="#777777", label="n^(4/3)")
    ax.set_xlabel("curves n")
    ax.set_ylabel("tangencies")
    for r in rows:
        ax.annotate(f"k={r.k}", (r.n_curves, r.tangencies_certified), textcoords="offset points", xytext=(4, -10), fontsize=8)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
