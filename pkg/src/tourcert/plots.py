"""Report figures rendered next to sweep output.

Float conversion happens only here; everything numeric in the library
proper stays exact.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .rational import Q

RATIO_LIMIT = float(Q(46, 33))


def render_report(summary, outdir: str) -> list[str]:
    """Write the sweep figures into outdir; returns the file paths."""
    os.makedirs(outdir, exist_ok=True)
    certs = summary.certificates
    written = []

    ratios = [float(c.ratio) for c in certs if c.ratio is not None]
    if ratios:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(ratios, bins=30, color="steelblue", edgecolor="white")
        ax.axvline(RATIO_LIMIT, color="crimson", linestyle="--",
                   label=f"46/33 = {RATIO_LIMIT:.4f}")
        ax.set_xlabel("tour bound / LP value")
        ax.set_ylabel("instances")
        ax.set_title("Certified tour-length ratios")
        ax.legend()
        path = os.path.join(outdir, "ratio_hist.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    pts = [
        (float(c.eps), float(c.ratio))
        for c in certs
        if c.eps is not None and c.ratio is not None
    ]
    if pts:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.scatter(*zip(*pts), s=12, alpha=0.6, color="darkorange")
        ax.axhline(RATIO_LIMIT, color="crimson", linestyle="--")
        ax.set_xlabel("eps  (LP value = (1 + eps) n)")
        ax.set_ylabel("ratio")
        ax.set_title("Ratio against LP slack")
        path = os.path.join(outdir, "ratio_vs_eps.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    costs = [
        (
            float(c.costs["x"] + c.payments.get("x", 0)),
            float(c.costs["f"] + c.payments.get("f", 0)),
        )
        for c in certs
        if "x" in c.costs and "f" in c.costs
    ]
    if costs and any(a or b for a, b in costs):
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.scatter(*zip(*costs), s=12, alpha=0.6, color="seagreen")
        hi = max(max(a, b) for a, b in costs) or 1.0
        ax.plot([0, hi], [0, hi], color="gray", linewidth=0.8)
        ax.set_xlabel("x-construction cost + payments")
        ax.set_ylabel("rounded-construction cost + payments")
        ax.set_title("Construction cost comparison")
        path = os.path.join(outdir, "cost_compare.png")
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
