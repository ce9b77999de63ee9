"""Figures rendered from experiment tables.  CSVs are the contract; these are convenience."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "legend.fontsize": 9,
    "lines.linewidth": 1.4,
    "lines.markersize": 5,
    "svg.hashsalt": "shs6v",
    "svg.fonttype": "path",
}


def _figure(width=5.0, height=None):
    golden = (np.sqrt(5) - 1) / 2
    plt.rcParams.update(_RC)
    fig, ax = plt.subplots(figsize=(width, height or width * golden))
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_lln(path, Ls, mean_err, std_err, label=""):
    fig, ax = _figure()
    ax.errorbar(Ls, mean_err, yerr=std_err, marker="o", capsize=3, label=label or None)
    Ls = np.asarray(Ls, dtype=float)
    ref = mean_err[0] * np.sqrt(Ls[0] / Ls)
    ax.plot(Ls, ref, "k--", lw=0.8, label=r"$\propto L^{-1/2}$")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("L")
    ax.set_ylabel(r"mean $\sup |H(L\cdot)/L - \mathbf{h}|$")
    ax.legend()
    return _save(fig, path)


def plot_clt(path, labels, empirical, se, theoretical):
    fig, ax = _figure()
    k = np.arange(len(labels))
    ax.errorbar(k, empirical, yerr=3 * np.asarray(se), fmt="o", capsize=3, label="Monte Carlo (3 SE)")
    ax.plot(k, theoretical, "rx", ms=8, label="quadrature")
    ax.set_xticks(k)
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=7)
    ax.set_ylabel("covariance")
    ax.legend()
    return _save(fig, path)


def plot_remainder(path, Ls, max_R, slope, intercept):
    fig, ax = _figure()
    Ls = np.asarray(Ls, dtype=float)
    ax.loglog(Ls, max_R, "o", label=r"$\max |\mathbf{R}|$")
    ax.loglog(Ls, np.exp(intercept) * Ls ** slope, "k--", lw=0.8, label=f"slope {slope:.3f}")
    ax.set_xlabel("L")
    ax.set_ylabel("remainder")
    ax.legend()
    return _save(fig, path)


def plot_riemann_scaling(path, Ls, errs):
    fig, ax = _figure()
    ax.loglog(Ls, errs, "o-")
    ax.set_xlabel("L")
    ax.set_ylabel(r"$\max |R^d(L\cdot) - R_{IJ}|$")
    return _save(fig, path)


def plot_height(path, H):
    fig, ax = _figure(4.5, 4.0)
    im = ax.imshow(np.asarray(H).T, origin="lower", cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="H")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    return _save(fig, path)
