"""greedyq command line: build, integrate, grid, disc, diagnose, price."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import artifacts
from .config import greedy_config
from .console import console, err_console, setup_logging
from .cubature import get_integrand, integrate_full, integrate_stream, reference_integral
from .diagnostics import (
    default_checkpoints,
    limit_weights_l1,
    mismatch_profile,
    quasi_stationarity_profile,
    rate_profile,
    stationarity_gap,
    suboptimal_check,
)
from .discrepancy import PointSet, star_disc, star_disc_bruteforce
from .distributions import Distribution1D, parse_distribution
from .errors import ComplexityError, DomainError, GreedyQuantError, InvariantError
from .greedy1d import GreedySequence, build, truncate
from .pricing import (
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
from .product_grid import (
    box_muller_from_product,
    box_muller_pre_image,
    gaussian_grid_from_product,
    grow,
    grow_to,
    integrate_product_recursive,
    product_error_sq,
    product_grid,
    start_product,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    dist: str | None = None
    n: int | None = None
    r: float | None = None
    s: float | None = None
    rho: float | None = None
    fn: str | None = None
    mode: str | None = None
    law: str | None = None
    d: int | None = None
    method: str | None = None
    suite: str | None = None
    instrument: str | None = None
    input: str | None = None
    mc_samples: int | None = None
    seed: int | None = None
    out: str | None = None
    deterministic: bool = False

    def canonical(self) -> str:
        """``key=value`` pairs joined by ';', unset fields omitted."""
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or (f.name == "deterministic" and not value):
                continue
            parts.append(f"{f.name}={value!r}" if isinstance(value, float) else f"{f.name}={value}")
        return ";".join(parts)

    @classmethod
    def from_canonical(cls, text: str) -> "ExperimentConfig":
        casts = {"n": int, "d": int, "mc_samples": int, "seed": int, "r": float, "s": float, "rho": float,
                 "deterministic": lambda v: v == "True"}
        values = {}
        for part in filter(None, text.split(";")):
            key, _, raw = part.partition("=")
            if key not in {f.name for f in fields(cls)}:
                raise DomainError(f"unknown config key '{key}'")
            values[key] = casts.get(key, str)(raw)
        return cls(**values)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        values = {k: v for k, v in vars(ns).items() if k in names}
        if isinstance(values.get("dist"), Distribution1D):
            values["dist"] = values["dist"].spec
        return cls(**values)


# ------------------------------------------------------------------ parsing


def _distribution(text: str) -> Distribution1D:
    try:
        return parse_distribution(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="artifact path (CSV or JSON)")
    common.add_argument("--seed", type=int, default=None, help="random seed where sampling is involved")
    common.add_argument("--deterministic", action="store_true", help="omit the timestamp line from CSV output")
    common.add_argument("--log-level", default=greedy_config.log_level, help="logging level (default from GREEDYQ_LOG_LEVEL)")

    parser = argparse.ArgumentParser(prog="greedyq", description="Greedy quantization sequences and cubature experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a greedy sequence")
    p.add_argument("--dist", type=_distribution, required=True)
    p.add_argument("--n", type=_positive_int, required=True)

    p = sub.add_parser("integrate", parents=[common], help="integrate a named function along a sequence")
    p.add_argument("--dist", type=_distribution, required=True)
    p.add_argument("--fn", required=True, choices=["one", "x", "x2", "abs", "sin", "expneg"])
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--mode", choices=["full", "recursive"], default="recursive")

    p = sub.add_parser("grid", parents=[common], help="build a product or Box-Muller grid")
    p.add_argument("--law", choices=["normal", "uniform"], default="normal")
    p.add_argument("--d", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--method", choices=["product", "boxmuller"], default="product")

    p = sub.add_parser("disc", parents=[common], help="star discrepancy of a point file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--d", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--method", choices=["formula", "brute"], default="formula")

    p = sub.add_parser("diagnose", parents=[common], help="run a diagnostic suite")
    p.add_argument("--dist", type=_distribution, required=True)
    p.add_argument("--suite", required=True, choices=["rate", "mismatch", "weights", "stationarity", "quasi", "suboptimal"])
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--s", type=float, default=2.5)
    p.add_argument("--rho", type=float, default=0.5)

    p = sub.add_parser("price", parents=[common], help="price a benchmark option")
    p.add_argument("--instrument", choices=["call1d", "basket3d"], required=True)
    p.add_argument("--method", required=True, choices=[*CALL_METHODS, "product", "boxmuller", "mc"])
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--mc-samples", type=_positive_int, default=None)
    return parser


# ---------------------------------------------------------------- commands


def _check_sequence(seq: GreedySequence) -> None:
    total = math.fsum(seq.weights)
    if abs(total - 1.0) > 1e-10:
        raise InvariantError(f"cell weights sum to {total!r}")
    trace = np.asarray(seq.error_sq_trace)
    if np.any(np.diff(trace) >= 0):
        raise InvariantError("squared error trace is not strictly decreasing")


def _build(args) -> str:
    with console.status(f"[info]building {args.n} points of {args.dist.spec}..."):
        seq = build(args.dist, args.n)
    _check_sequence(seq)
    if args.out and args.out.endswith(".csv"):
        rows = ((k + 1, seq.points[k], math.sqrt(seq.error_sq_trace[k])) for k in range(seq.n))
        artifacts.write_csv(args.out, ["k", "a_k", "e2"], rows, deterministic=args.deterministic)
    elif args.out:
        artifacts.save_sequence(seq, args.out)
    return f"n={seq.n} e2={seq.error!r}"


def _integrate(args) -> str:
    f = get_integrand(args.fn)
    reference = reference_integral(args.dist, f)
    seq = build(args.dist, args.n)
    if args.mode == "recursive":
        values = integrate_stream(args.dist, f, args.n, seq=seq)
    else:
        values = [integrate_full(truncate(seq, k), f) for k in range(1, args.n + 1)]
    if args.out:
        rows = ((k + 1, v, abs(v - reference)) for k, v in enumerate(values))
        artifacts.write_csv(args.out, ["n", "I_n", "abs_error"], rows, deterministic=args.deterministic)
    return f"n={args.n} I_n={values[-1]!r} error={abs(values[-1] - reference)!r}"


def _grid(args) -> str:
    if args.method == "boxmuller":
        if args.law != "normal":
            raise DomainError("Box-Muller grids are Gaussian")
        grid = grow_to(box_muller_pre_image(args.d), args.n)
        image = box_muller_from_product(grid)
    else:
        law = Distribution1D.normal() if args.law == "normal" else Distribution1D.uniform()
        grid = grow_to(product_grid([law] * args.d), args.n)
        image = gaussian_grid_from_product(grid) if args.law == "normal" else None
    if image is not None and abs(float(image.weights.sum()) - 1.0) > 1e-10:
        raise InvariantError("grid weights do not sum to one")
    if args.out:
        artifacts.save_grid(grid, args.out, law=args.law, method=args.method)
    return f"size={grid.size} sizes={list(grid.sizes)} error_sq={product_error_sq(grid)!r}"


def _disc(args) -> str:
    ps = PointSet(artifacts.read_points_csv(args.input, args.d))
    value = star_disc(ps) if args.method == "formula" else star_disc_bruteforce(ps)
    if args.out:
        artifacts.write_csv(args.out, ["n", "d", "method", "star_discrepancy"], [(ps.n, ps.d, args.method, value)],
                            deterministic=args.deterministic)
    return f"D*={value!r}"


def _diagnose(args) -> str:
    seq = build(args.dist, args.n)
    if args.suite in ("rate", "mismatch"):
        if args.n < 2:
            raise DomainError("profiles need n >= 2")
        profile = (rate_profile(args.dist, args.r, args.n, seq=seq) if args.suite == "rate"
                   else mismatch_profile(args.dist, args.s, args.n, seq=seq))
        header = ["n", "error", "scaled"] + (["pierce_bound"] if profile.bound is not None else [])
        rows = [list(row) + ([float(profile.bound[i])] if profile.bound is not None else [])
                for i, row in enumerate(profile.rows())]
        summary = f"spread={profile.spread()!r}"
    elif args.suite == "weights":
        levels = sorted({*default_checkpoints(args.dist, args.n), args.n})
        header, rows = ["n", "l1_to_limit"], [(n, limit_weights_l1(truncate(seq, n))) for n in levels]
        summary = f"l1={rows[-1][1]!r}"
    elif args.suite == "stationarity":
        header, rows = ["n", "gap"], [(k, stationarity_gap(truncate(seq, k))) for k in range(1, args.n + 1)]
        summary = f"gap={rows[-1][1]!r}"
    elif args.suite == "quasi":
        levels = [n for n in default_checkpoints(args.dist, args.n) if n >= 3] or [args.n]
        if args.r not in (1.0, 2.0):
            raise DomainError(f"quasi-stationarity needs --r 1 or 2, got {args.r}")
        r = int(args.r)
        result = quasi_stationarity_profile(seq, r, args.rho, levels)
        header = ["n", "weighted_ratio", "unweighted_ratio", "denominator"]
        rows = [(q.n, q.weighted, q.unweighted, q.denominator) for q in result]
        summary = f"ratio={result[-1].weighted!r}"
    else:
        report = suboptimal_check(seq)
        header = ["n", "unimodal", "optimality_ratio"]
        ratios = dict(report.optimal_gap)
        rows = [(n, n in report.unimodal_at, ratios.get(n, float("nan"))) for n in report.checked]
        summary = f"unimodal_at={report.unimodal_at}"
    if args.out:
        artifacts.write_csv(args.out, header, rows, deterministic=args.deterministic)
    return summary


def _price(args) -> str:
    seed = greedy_config.seed if args.seed is None else args.seed
    if args.instrument == "call1d":
        if args.method not in CALL_METHODS:
            raise DomainError(f"method '{args.method}' does not apply to call1d")
        params = call_reference_params()
        points, weights = call_grid(args.method, args.n)
        price = price_call_1d(points, weights, params)
        reference = bs_call_closed_form(params.spots[0], params.strike, params.rate, params.vols[0], params.maturity)
        rows = [(args.n, price, abs(price - reference))]
    else:
        params = basket_reference_params()
        samples = args.mc_samples or greedy_config.mc_samples
        reference = price_basket_mc_cv(params, samples, seed).price
        if args.method == "mc":
            estimate = price_basket_mc_cv(params, args.n, seed + 1)
            price, rows = estimate.price, [(args.n, estimate.price, abs(estimate.price - reference))]
        elif args.method == "product":
            payoff = basket_payoff(params)
            grid = product_grid([Distribution1D.normal()] * params.d)
            state = start_product(grid, payoff)
            rows = [(grid.size, state.value, abs(state.value - reference))]
            while grid.size < args.n:
                after = grow(grid)
                state = integrate_product_recursive(state, grid, after, payoff)
                grid = after
                rows.append((grid.size, state.value, abs(state.value - reference)))
            full = price_basket_quant(gaussian_grid_from_product(grid), params)
            if abs(full - state.value) > 1e-8 * max(1.0, abs(full)):
                raise InvariantError(f"recursive basket price {state.value!r} drifted from full price {full!r}")
            price = state.value
        elif args.method == "boxmuller":
            grid = grow_to(box_muller_pre_image(params.d), args.n)
            price = price_basket_quant(box_muller_from_product(grid), params)
            rows = [(grid.size, price, abs(price - reference))]
        else:
            raise DomainError(f"method '{args.method}' does not apply to basket3d")
    if args.out:
        artifacts.write_csv(args.out, ["n", "price", "abs_error_vs_reference"], rows, deterministic=args.deterministic)
    return f"price={price!r} reference={reference!r}"


HANDLERS = {"build": _build, "integrate": _integrate, "grid": _grid, "disc": _disc, "diagnose": _diagnose, "price": _price}


def run(argv: Sequence[str] | None = None) -> int:
    """Execute one experiment and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    setup_logging(args.log_level.upper())
    config = ExperimentConfig.from_namespace(args)
    logger.info("config %s", config.canonical())
    try:
        summary = HANDLERS[args.command](args)
    except InvariantError as exc:
        err_console.print(f"invariant violated: {exc}", style="error")
        return 1
    except (DomainError, ComplexityError) as exc:
        err_console.print(f"greedyq {args.command}: {exc}", style="error")
        return 2
    except GreedyQuantError as exc:
        err_console.print(f"greedyq {args.command}: {exc}", style="error")
        return 1
    except OSError as exc:
        err_console.print(f"greedyq {args.command}: {exc}", style="error")
        return 2
    console.print(f"{args.command}: {summary}", highlight=False, soft_wrap=True)
    return 0


def main() -> None:
    sys.exit(run())
