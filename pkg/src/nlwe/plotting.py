"""Figure rendering for sweep reports.

Sweeps are written as CSV; alongside the delimited output the sweep
command renders a matplotlib figure with the four success-probability
curves against eta_0, mirroring the locking/unlocking pictures: blue for
the plain quantities, red for the post-measurement-information ones,
dashed for the LOCC-restricted values.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_sweep_figure(rows: list[dict], path: str, title: str) -> None:
    """Render the sweep curves to an image file."""
    eta0 = [r["eta0"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.6))
    ax.plot(eta0, [r["p_G"] for r in rows], "b-", label=r"$p_G$")
    ax.plot(eta0, [r["p_L_upper"] for r in rows], "b--", label=r"$p_L$")
    ax.plot(eta0, [r["p_G_PI"] for r in rows], "r-", label=r"$p_G^{PI}$")
    ax.plot(eta0, [r["p_L_PI_upper"] for r in rows], "r--", label=r"$p_L^{PI}$")
    ax.set_xlabel(r"$\eta_0$")
    ax.set_ylabel("success probability")
    ax.set_ylim(0.0, 1.05)
    ax.set_title(title)
    ax.legend(loc="center right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
