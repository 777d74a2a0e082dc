"""Figures for the experiment harness.

Each report writes a PNG rendered with matplotlib (Agg) next to its CSV, plus a
standalone script that regenerates the figure from the CSV alone.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_FLOOR = 1e-17  # log axes cannot show exact zeros


def _style(ax, xlabel, ylabel):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="major", alpha=0.3)
    ax.legend(frameon=False)


def plot_invariants(times, rm, re, rh, path, title=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    t = np.asarray(times)
    for y, label in ((rm, "RM (mass)"), (re, "RE (modified energy)"), (rh, "RH (Hamiltonian)")):
        y = np.maximum(np.asarray(y, dtype=float), _FLOOR)
        ax.semilogy(t[1:], y[1:], label=label, lw=1.2)
    _style(ax, "t", "relative error")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_convergence(taus, errors, path, order=None, title=None):
    fig, ax = plt.subplots(figsize=(5, 4))
    taus = np.asarray(taus, dtype=float)
    errors = np.maximum(np.asarray(errors, dtype=float), _FLOOR)
    ax.loglog(taus, errors, "o-", label=r"$\|e\|_\infty$")
    if order:
        ref = errors[-1] * (taus / taus[-1]) ** order
        ax.loglog(taus, ref, "k--", lw=0.8, label=f"slope {order}")
    _style(ax, r"$\tau$", "error")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


_INVARIANT_SCRIPT = '''\
"""Regenerate {png} from {csv}."""
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("{csv}") as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows][1:]
fig, ax = plt.subplots(figsize=(6, 4))
for key, label in (("RM", "RM (mass)"), ("RE", "RE (modified energy)"), ("RH", "RH (Hamiltonian)")):
    y = [max(float(r[key]), 1e-17) for r in rows][1:]
    ax.semilogy(t, y, label=label, lw=1.2)
ax.set_xlabel("t")
ax.set_ylabel("relative error")
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig("{png}", dpi=150)
'''

_CONVERGENCE_SCRIPT = '''\
"""Regenerate {png} from {csv}."""
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("{csv}") as fh:
    rows = list(csv.DictReader(fh))
tau = [float(r["tau"]) for r in rows]
err = [float(r["linf_error"]) for r in rows]
fig, ax = plt.subplots(figsize=(5, 4))
ax.loglog(tau, err, "o-")
ax.set_xlabel("tau")
ax.set_ylabel("L-infinity error")
fig.tight_layout()
fig.savefig("{png}", dpi=150)
'''


def write_plot_script(kind: str, outdir, csv_name: str, png_name: str) -> Path:
    template = {"invariants": _INVARIANT_SCRIPT, "convergence": _CONVERGENCE_SCRIPT}[kind]
    path = Path(outdir) / f"plot_{kind}.py"
    path.write_text(template.format(csv=csv_name, png=png_name))
    return path
