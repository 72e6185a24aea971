"""Render evaluation reports as figures next to their TSV output."""

from __future__ import annotations


def save_hit_rate_figure(reports, path, title: str = "") -> None:
    """Plot cumulative hit rate against k for one or more reports (one per
    test split) and save the figure; multi-split plots add the mean curve
    with 95% confidence bars."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .evaluation import aggregate_runs

    fig, ax = plt.subplots(figsize=(6, 4))
    n = min(rep.n for rep in reports)
    ks = list(range(1, n + 1))
    if len(reports) == 1:
        ax.plot(ks, reports[0].cumulative_hit_rate[:n], marker="o", color="tab:blue")
    else:
        for rep in reports:
            ax.plot(ks, rep.cumulative_hit_rate[:n], color="0.8", linewidth=0.8)
        means, cis = [], []
        for k in ks:
            mean, ci = aggregate_runs([rep.cumulative_hit_rate[k - 1] for rep in reports])
            means.append(mean)
            cis.append(ci)
        ax.errorbar(ks, means, yerr=cis, marker="o", color="tab:blue", capsize=3,
                    label=f"mean of {len(reports)} splits (95% CI)")
        ax.legend(loc="lower right", fontsize=8)
    ax.set_xlabel("k (best-of-k translations)")
    ax.set_ylabel("cumulative hit rate")
    ax.set_xticks(ks)
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, linestyle=":", linewidth=0.5)
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
