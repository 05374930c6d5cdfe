"""
Greedy Sequence Builder

Builds greedy quadratic quantization sequences for the four supported laws and
shows:
- The first insertions and the squared error after each one
- The final error, scaled rate n * e_2 and cell weights
- The symmetry of odd levels for symmetric laws

Run with GREEDYQ_LOG_LEVEL=INFO to watch the build progress.
"""

import sys

from rich.panel import Panel
from rich.table import Table

from greedyq.config import greedy_config
from greedyq.console import console, setup_logging
from greedyq.distributions import parse_distribution
from greedyq.greedy1d import build

LAWS = ["normal:0,1", "uniform:0,1", "exp:1", "laplace:0,1"]


# =============================================================================
# TABLES
# =============================================================================

def first_points_table(seq, count: int = 8) -> Table:
    table = Table(title=f"[bold]{seq.dist.spec}[/bold] first insertions", show_header=True)
    table.add_column("k", justify="right", style="cyan")
    table.add_column("a_k", justify="right")
    table.add_column("e_2(a^(k))", justify="right", style="value")
    for k in range(min(count, seq.n)):
        table.add_row(str(k + 1), f"{seq.points[k]:+.8f}", f"{seq.error_sq_trace[k] ** 0.5:.8f}")
    return table


def summary_table(sequences) -> Table:
    table = Table(title="[bold green]Summary[/bold green]", show_header=True)
    table.add_column("law", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("e_2", justify="right")
    table.add_column("n * e_2", justify="right", style="value")
    table.add_column("max weight", justify="right")
    table.add_column("symmetric", justify="center")
    for seq in sequences:
        symmetric = "-"
        if seq.dist.is_symmetric and seq.n % 2 == 1:
            pts = seq.sorted_points
            centre = seq.dist.mean
            mirrored = all(abs((p - centre) + (q - centre)) < 1e-9 for p, q in zip(pts, reversed(pts)))
            symmetric = "[success]yes[/success]" if mirrored else "[error]no[/error]"
        table.add_row(seq.dist.spec, str(seq.n), f"{seq.error:.3e}", f"{seq.n * seq.error:.6f}",
                      f"{max(seq.weights):.4e}", symmetric)
    return table


# =============================================================================
# MAIN
# =============================================================================

def main():
    setup_logging(greedy_config.log_level)
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 255

    console.print()
    console.print(Panel.fit(
        f"[bold cyan]Greedy Sequence Builder[/bold cyan]\n"
        f"[dim]{len(LAWS)} laws, n = {n}, {greedy_config.search_seeds} search seeds per gap[/dim]",
        border_style="cyan",
    ))
    console.print()

    sequences = []
    for spec in LAWS:
        with console.status(f"[info]building {spec}..."):
            seq = build(parse_distribution(spec), n)
        sequences.append(seq)
        console.print(first_points_table(seq))

    console.print(summary_table(sequences))
    console.print()


if __name__ == "__main__":
    main()
