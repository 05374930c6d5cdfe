"""
Discrepancy Lab

Exact star discrepancy for small and medium point sets:
- Closed formulas against the critical-box brute force
- The L^1 quantization error of U(0,1) grids below their discrepancy
- Greedy U(0,1)^2 product grids next to Halton points
"""

import numpy as np
from rich.panel import Panel
from rich.table import Table

from greedyq.config import greedy_config
from greedyq.console import console, setup_logging
from greedyq.diagnostics import product_discrepancy_profile
from greedyq.discrepancy import PointSet, star_disc, star_disc_1d, star_disc_bruteforce, uniform_l1_error
from greedyq.distributions import Distribution1D
from greedyq.greedy1d import build, truncate
from greedyq.pricing import vdc_points


def oracle_table(rng: np.random.Generator, trials: int = 100) -> Table:
    table = Table(title="[bold]Formula vs brute force[/bold]", show_header=True)
    table.add_column("d", justify="right", style="cyan")
    table.add_column("sets", justify="right")
    table.add_column("max |formula - oracle|", justify="right", style="value")
    for d, max_n in ((1, 12), (2, 8), (3, 8)):
        worst = 0.0
        for _ in range(trials):
            ps = PointSet(rng.random((int(rng.integers(1, max_n + 1)), d)))
            worst = max(worst, abs(star_disc(ps) - star_disc_bruteforce(ps)))
        table.add_row(str(d), str(trials), f"{worst:.1e}")
    return table


def l1_table(rng: np.random.Generator) -> Table:
    greedy = build(Distribution1D.uniform(), 512)
    table = Table(title="[bold]e_1 <= D*_n on [0, 1][/bold]", show_header=True)
    table.add_column("n", justify="right", style="cyan")
    for name in ("greedy", "VdC", "random"):
        table.add_column(f"{name} e_1", justify="right")
        table.add_column(f"{name} D*", justify="right", style="value")
    for n in (1, 3, 7, 16, 64, 255, 512):
        sets = [np.asarray(truncate(greedy, n).sorted_points), vdc_points(n), rng.random(n)]
        cells = []
        for x in sets:
            cells += [f"{uniform_l1_error(x):.3e}", f"{star_disc_1d(PointSet(x)):.3e}"]
        table.add_row(str(n), *cells)
    return table


def halton_table() -> Table:
    table = Table(title="[bold]Greedy product grid vs Halton, d = 2[/bold]", show_header=True)
    table.add_column("n", justify="right", style="cyan")
    table.add_column("greedy D*", justify="right", style="value")
    table.add_column("Halton D*", justify="right")
    for row in product_discrepancy_profile([4, 16, 64, 256, 1024]):
        table.add_row(str(row.n), f"{row.greedy:.5f}", f"{row.halton:.5f}")
    return table


def main():
    setup_logging(greedy_config.log_level)
    rng = np.random.default_rng(greedy_config.seed)

    console.print()
    console.print(Panel.fit("[bold cyan]Discrepancy Lab[/bold cyan]", border_style="cyan"))
    console.print()
    console.print(oracle_table(rng))
    console.print(l1_table(rng))
    console.print(halton_table())
    console.print()


if __name__ == "__main__":
    main()
