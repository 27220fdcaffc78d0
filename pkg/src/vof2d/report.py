"""Figure rendering for the CLI report path.

Every figure is written next to its CSV so a run directory is
self-contained.  Uses the Agg backend; nothing here is needed by the
numerical modules.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_timeseries(path, samples, ref, title: str) -> None:
    """Contact position and angle over time, numerical vs reference."""
    reg = [s for s in samples if s.regular]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    if reg:
        ts = np.array([s.t for s in reg])
        ax1.plot(ts, [s.x_cl for s in reg], ".", ms=3, label="numerical")
        ax2.plot(ts, [math.degrees(s.theta) for s in reg], ".", ms=3, label="numerical")
    t_all = np.array([s.t for s in samples])
    if t_all.size:
        tt = np.linspace(t_all.min(), t_all.max(), 400)
        x_ref, th_ref = ref(tt)
        ax1.plot(tt, x_ref, "k-", lw=1, label="reference")
        ax2.plot(tt, np.degrees(th_ref), "k-", lw=1, label="reference")
    ax1.set_xlabel("t")
    ax1.set_ylabel("contact position")
    ax2.set_xlabel("t")
    ax2.set_ylabel("contact angle [deg]")
    ax2.legend(loc="best", fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence(path, dx_over_r0, series: dict, title: str,
                       guide_orders=(1.0, 2.0)) -> None:
    """Log-log error curves against dx/R0 with slope guide lines."""
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    dx = np.asarray(dx_over_r0, dtype=float)
    finite_vals = []
    for label, errs in series.items():
        e = np.asarray(errs, dtype=float)
        ok = np.isfinite(e) & (e > 0)
        if np.any(ok):
            ax.loglog(dx[ok], e[ok], "o-", label=label)
            finite_vals.append(e[ok])
    if finite_vals:
        ref_y = min(v.min() for v in finite_vals)
        for p in guide_orders:
            ax.loglog(dx, ref_y * (dx / dx.min()) ** p, "--", lw=0.8,
                      label=f"slope {p:g}")
    ax.set_xlabel("dx / R0")
    ax.set_ylabel("error")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_translation(path, offsets, angles_deg, exact_deg: float, title: str) -> None:
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    ax.plot(offsets, angles_deg, ".-", ms=3, label="reconstructed")
    ax.axhline(exact_deg, color="k", lw=1, label="exact")
    ax.set_xlabel("line offset")
    ax.set_ylabel("angle [deg]")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
