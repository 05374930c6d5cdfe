"""
Option Pricing Benchmarks

Black-Scholes instruments priced by quantization-based cubature:
- European call (10, 9, r=6%, vol=10%, T=1) with greedy and Van der Corput grids
- Arithmetic basket call on three correlated assets with product and
  Box-Muller grids, against Monte Carlo with a geometric control variate
"""

import sys

from rich.panel import Panel
from rich.table import Table

from greedyq.config import greedy_config
from greedyq.console import console, setup_logging
from greedyq.distributions import Distribution1D
from greedyq.greedy1d import build, truncate
from greedyq.pricing import (
    CALL_METHODS,
    basket_payoff,
    basket_reference_params,
    bs_call_closed_form,
    call_grid,
    call_reference_params,
    price_basket_mc_cv,
    price_basket_quant,
    price_call_1d,
)
from greedyq.product_grid import (
    box_muller_from_product,
    box_muller_pre_image,
    grow,
    grow_to,
    integrate_product_recursive,
    product_grid,
    start_product,
)

CALL_LEVELS = [10, 50, 100, 500, 1000, 2000]
BASKET_LEVELS = [100, 500, 1000, 2000, 4000, 8000]


# =============================================================================
# EUROPEAN CALL
# =============================================================================

def call_table() -> Table:
    params = call_reference_params()
    exact = bs_call_closed_form(10.0, 9.0, 0.06, 0.1, 1.0)
    greedy = build(Distribution1D.normal(), max(CALL_LEVELS))
    greedy_uniform = build(Distribution1D.uniform(), max(CALL_LEVELS))

    table = Table(title=f"[bold]European call, exact {exact:.6f}[/bold]", show_header=True)
    table.add_column("n", justify="right", style="cyan")
    for method in CALL_METHODS:
        table.add_column(method, justify="right")
    for n in CALL_LEVELS:
        cells = []
        for method in CALL_METHODS:
            seq = truncate(greedy if method == "greedy" else greedy_uniform, n) if method.startswith("greedy") else None
            price = price_call_1d(*call_grid(method, n, seq=seq), params)
            cells.append(f"{abs(price - exact):.2e}")
        table.add_row(str(n), *cells)
    return table


# =============================================================================
# BASKET CALL
# =============================================================================

def basket_table(samples: int) -> Table:
    params = basket_reference_params()
    with console.status(f"[info]Monte Carlo reference, {samples} samples..."):
        reference = price_basket_mc_cv(params, samples, greedy_config.seed)
    console.print(f"MC + control variate: [value]{reference.price:.5f}[/value] (stderr {reference.stderr:.5f})")

    table = Table(title="[bold]Basket call, |price - MC|[/bold]", show_header=True)
    table.add_column("n", justify="right", style="cyan")
    table.add_column("product (recursive)", justify="right")
    table.add_column("product size", justify="right")
    table.add_column("Box-Muller", justify="right")
    table.add_column("Box-Muller size", justify="right")

    payoff = basket_payoff(params)
    grid = product_grid([Distribution1D.normal()] * params.d)
    state = start_product(grid, payoff)
    pre_image = box_muller_pre_image(params.d)
    for n in BASKET_LEVELS:
        while grid.size < n:
            after = grow(grid)
            state = integrate_product_recursive(state, grid, after, payoff)
            grid = after
        pre_image = grow_to(pre_image, n)
        boxmuller = price_basket_quant(box_muller_from_product(pre_image), params)
        table.add_row(str(n), f"{abs(state.value - reference.price):.4f}", str(grid.size),
                      f"{abs(boxmuller - reference.price):.4f}", str(pre_image.size))
    return table


def main():
    setup_logging(greedy_config.log_level)
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else greedy_config.mc_samples

    console.print()
    console.print(Panel.fit("[bold cyan]Option Pricing Benchmarks[/bold cyan]", border_style="cyan"))
    console.print()
    console.print(call_table())
    console.print()
    console.print(basket_table(samples))
    console.print()


if __name__ == "__main__":
    main()
