"""
Recursive Quantization-Based Cubature

Integrates the named test functions against each law along a greedy sequence:
- Recursive update, three function evaluations per inserted point
- Full recomputation over the sorted grid, as an oracle
- Reference value from adaptive quadrature against the density
"""

import sys

from rich.panel import Panel
from rich.table import Table

from greedyq.config import greedy_config
from greedyq.console import console, setup_logging
from greedyq.cubature import INTEGRANDS, integrate_full, integrate_stream, reference_integral
from greedyq.distributions import parse_distribution
from greedyq.greedy1d import build, truncate

LAWS = ["normal:0,1", "uniform:0,1", "exp:1", "laplace:0,1"]
CHECKPOINTS = [10, 100, 500, 1000]


def cubature_table(seq) -> Table:
    table = Table(title=f"[bold]{seq.dist.spec}[/bold]", show_header=True)
    table.add_column("f", style="cyan")
    table.add_column("reference", justify="right")
    for n in CHECKPOINTS:
        table.add_column(f"|I_{n} - I|", justify="right")
    table.add_column("max |rec - full|", justify="right", style="value")

    for name, f in INTEGRANDS.items():
        exact = reference_integral(seq.dist, f)
        stream = integrate_stream(seq.dist, f, seq.n, seq=seq)
        drift = max(abs(stream[n - 1] - integrate_full(truncate(seq, n), f)) for n in CHECKPOINTS)
        table.add_row(name, f"{exact:+.10f}", *(f"{abs(stream[n - 1] - exact):.2e}" for n in CHECKPOINTS), f"{drift:.1e}")
    return table


def main():
    setup_logging(greedy_config.log_level)
    n = max(CHECKPOINTS)
    laws = sys.argv[1:] or LAWS

    console.print()
    console.print(Panel.fit(
        "[bold cyan]Recursive Cubature[/bold cyan]\n"
        f"[dim]I_n = I_(n-1) - p_-(f(L) - f(x)) - p_+(f(R) - f(x)), n up to {n}[/dim]",
        border_style="cyan",
    ))
    console.print()

    for spec in laws:
        with console.status(f"[info]building {spec}..."):
            seq = build(parse_distribution(spec), n)
        console.print(cubature_table(seq))
        console.print()


if __name__ == "__main__":
    main()
