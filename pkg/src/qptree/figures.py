"""Figure rendering for scan and sampling reports.

Figures are written straight to files; the Agg backend keeps this usable in
headless environments.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bell import BellEstimate, BellProbabilities, ScanRow, VIOLATED


def save_scan_figure(rows: list[ScanRow], path: str) -> None:
    """Margin and probability curves of an angle scan, saved to ``path``."""
    thetas = [row.theta_deg for row in rows]
    margins = [row.margin for row in rows]
    bounds = [row.p_ac + row.p_cb for row in rows]
    p_ab = [row.p_ab for row in rows]

    fig, (ax_top, ax_bot) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)

    ax_top.plot(thetas, p_ab, "o-", ms=3, label="P(a+, b+)")
    ax_top.plot(thetas, bounds, "s-", ms=3, label="P(a+, c+) + P(c+, b+)")
    ax_top.set_ylabel("probability")
    ax_top.legend()
    ax_top.grid(alpha=0.3)

    ax_bot.plot(thetas, margins, "o-", ms=3, color="tab:red")
    ax_bot.axhline(0.0, color="black", lw=1)
    violated = [row.theta_deg for row in rows if row.verdict == VIOLATED]
    if violated:
        ax_bot.axvspan(min(violated), max(violated), color="tab:red", alpha=0.1,
                       label="inequality violated")
        ax_bot.legend()
    ax_bot.set_xlabel("bisecting angle theta (degrees)")
    ax_bot.set_ylabel("margin")
    ax_bot.grid(alpha=0.3)

    fig.suptitle("Singlet correlations vs. the classical bound")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sample_figure(estimate: BellEstimate, analytic: BellProbabilities, path: str) -> None:
    """Monte Carlo estimates with error bars against analytic values."""
    names = ["P(a+, b+)", "P(a+, c+)", "P(c+, b+)"]
    est = [estimate.probabilities.p_ab, estimate.probabilities.p_ac, estimate.probabilities.p_cb]
    err = [estimate.se_ab, estimate.se_ac, estimate.se_cb]
    exact = [analytic.p_ab, analytic.p_ac, analytic.p_cb]

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(names))
    ax.errorbar(xs, est, yerr=err, fmt="o", capsize=4,
                label=f"estimate (n={estimate.n}, seed={estimate.seed})")
    ax.plot(xs, exact, "_", ms=24, color="tab:red", label="analytic")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylabel("probability")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
