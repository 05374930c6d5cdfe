"""
Diagnostics Suite

Runs the numerical checks on greedy sequences:
- Rate n * e_2 and the explicit Pierce-type bound
- Distortion mismatch n * e_s for s in [2, 3)
- Distance of the cell weights to their limit
- Unimodality and Lloyd-oracle ratios at sub-optimal levels
- Stationarity gap and rho-quasi-stationarity along 2^k - 1
"""

import sys

from rich.panel import Panel
from rich.table import Table

from greedyq.config import greedy_config
from greedyq.console import console, setup_logging
from greedyq.diagnostics import (
    limit_weights_l1,
    mismatch_profile,
    quasi_stationarity_profile,
    rate_profile,
    stationarity_gap,
    suboptimal_check,
)
from greedyq.distributions import parse_distribution
from greedyq.greedy1d import build, truncate

LAWS = ["normal:0,1", "uniform:0,1", "exp:1", "laplace:0,1"]
# (law, numerator order r, rho)
QUASI_ROWS = [("uniform:0,1", 2, 3 / 8), ("exp:1", 2, 1 / 3), ("normal:0,1", 1, 0.92)]


# =============================================================================
# RATES
# =============================================================================

def rate_table(sequences) -> Table:
    table = Table(title="[bold]Rates over n in [64, N][/bold]", show_header=True)
    table.add_column("law", style="cyan")
    table.add_column("spread n*e_2", justify="right", style="value")
    table.add_column("N*e_2", justify="right")
    table.add_column("Pierce bound * N", justify="right")
    table.add_column("spread n*e_2.5", justify="right")
    for seq in sequences:
        rate = rate_profile(seq.dist, 2.0, seq.n, seq=seq)
        mismatch = mismatch_profile(seq.dist, 2.5, min(seq.n, 512), seq=seq)
        table.add_row(seq.dist.spec, f"{rate.spread(64):.4f}", f"{rate.scaled[-1]:.5f}",
                      f"{rate.bound[-1] * seq.n:.2f}", f"{mismatch.spread(64):.4f}")
    return table


# =============================================================================
# WEIGHTS AND SUB-OPTIMALITY
# =============================================================================

def weights_table(sequences) -> Table:
    table = Table(title="[bold]L^1 distance to limit weights[/bold]", show_header=True)
    table.add_column("law", style="cyan")
    levels = [100, 255, 256, 645, 1023]
    for n in levels:
        table.add_column(f"n={n}", justify="right")
    for seq in sequences:
        table.add_row(seq.dist.spec, *(f"{limit_weights_l1(truncate(seq, n)):.4e}" for n in levels if n <= seq.n))
    return table


def suboptimal_table(seq) -> Table:
    report = suboptimal_check(truncate(seq, min(seq.n, 255)))
    ratios = dict(report.optimal_gap)
    table = Table(title=f"[bold]Sub-optimal levels, {seq.dist.spec}[/bold]", show_header=True)
    table.add_column("n", justify="right", style="cyan")
    table.add_column("unimodal", justify="center")
    table.add_column("greedy / Lloyd", justify="right", style="value")
    table.add_column("stationarity gap", justify="right")
    for n in report.checked:
        mark = "[success]yes[/success]" if n in report.unimodal_at else "[warning]no[/warning]"
        table.add_row(str(n), mark, f"{ratios[n]:.6f}", f"{stationarity_gap(truncate(seq, n)):.3e}")
    return table


def quasi_table() -> Table:
    levels = [2**k - 1 for k in range(4, 11)]
    table = Table(title="[bold]rho-quasi-stationarity[/bold]", show_header=True)
    table.add_column("law, r, rho", style="cyan")
    for n in levels:
        table.add_column(f"n={n}", justify="right")
    for spec, r, rho in QUASI_ROWS:
        seq = build(parse_distribution(spec), levels[-1])
        rows = quasi_stationarity_profile(seq, r, rho, levels)
        table.add_row(f"{spec}, {r}, {rho:.3f}", *(f"{row.weighted:.4f}" for row in rows))
    return table


def main():
    setup_logging(greedy_config.log_level)
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1023

    console.print()
    console.print(Panel.fit(f"[bold cyan]Diagnostics Suite[/bold cyan]\n[dim]N = {n}[/dim]", border_style="cyan"))
    console.print()

    with console.status("[info]building sequences..."):
        sequences = [build(parse_distribution(spec), n) for spec in LAWS]

    console.print(rate_table(sequences))
    console.print(weights_table(sequences))
    for seq in sequences:
        console.print(suboptimal_table(seq))
    with console.status("[info]quasi-stationarity profiles..."):
        console.print(quasi_table())
    console.print()


if __name__ == "__main__":
    main()
