"""Command-line interface: ``itsrobust {fit,robust,analyze,power}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __version__
from .analysis import ROBUST, STANDARD, AnalysisOptions, analyze, iter_errors, render
from .bootstrap import DEFAULT_B
from .core import Coding, InterventionSpec
from .errors import ItsError
from .panel import parse_csv
from .power import ErrorModel, SimConfig, default_effects, effect_grid, estimate_power
from .svg import emit_panel_plots, emit_power_plot

log = logging.getLogger("itsrobust")

FAST_B = 200


def _hac(text: str) -> tuple[str, int | None]:
    if text in ("off", "prais"):
        return text, None
    if text == "newey-west":
        return text, None
    if text.startswith("newey-west:"):
        lag = text.split(":", 1)[1]
        if lag == "auto":
            return "newey-west", None
        try:
            return "newey-west", int(lag)
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"expected off, prais or newey-west[:LAG], got {text!r}")


def _error_model(text: str) -> ErrorModel:
    if text == "normal":
        return ErrorModel.normal()
    if text.startswith("exp:"):
        try:
            return ErrorModel.exponential(float(text[4:]))
        except (ValueError, ItsError):
            pass
    raise argparse.ArgumentTypeError(f"expected normal or exp:RATE, got {text!r}")


def _effects(text: str) -> tuple[float, ...]:
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
        return effect_grid(lo, hi, step)
    except (ValueError, ItsError):
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}") from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _alpha(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return v


def _boot(text: str) -> int:
    v = int(text)
    if v < 100:
        raise argparse.ArgumentTypeError("bootstrap size must be at least 100")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itsrobust", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def data_args(sp, group_flag: bool = False):
        sp.add_argument("--input", required=True, help="CSV with time,value or group,time,value columns")
        if group_flag:
            sp.add_argument("--group-col", default="group", help="name of the group column (default: group)")
        sp.add_argument("--intervention", required=True, type=float, help="first post-intervention time")
        sp.add_argument("--log", action="store_true", help="analyse the natural log of the values")
        sp.add_argument("--alpha", type=_alpha, default=0.05)
        sp.add_argument("--output", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--workers", type=int, default=1)

    def boot_args(sp):
        sp.add_argument("--boot", type=_boot, default=DEFAULT_B, help=f"bootstrap replicates (default {DEFAULT_B})")
        sp.add_argument("--seed", type=_seed, default=0)

    sp = sub.add_parser("fit", help="standard segmented regression with t-based inference")
    data_args(sp, group_flag=True)
    sp.add_argument("--coding", choices=[c.value for c in Coding], default=Coding.CENTERED.value)
    sp.add_argument("--hac", type=_hac, default=("off", None), help="off | newey-west[:LAG] | prais")

    sp = sub.add_parser("robust", help="Theil-Sen slope change with bootstrap inference")
    data_args(sp, group_flag=True)
    boot_args(sp)

    sp = sub.add_parser("analyze", help="both methods per group, optional plots")
    data_args(sp, group_flag=True)
    boot_args(sp)
    sp.add_argument("--coding", choices=[c.value for c in Coding], default=Coding.CENTERED.value)
    sp.add_argument("--hac", type=_hac, default=("off", None), help="off | newey-west[:LAG] | prais")
    sp.add_argument("--plots", metavar="DIR", help="write SVG time-series plots into DIR")

    sp = sub.add_parser("power", help="Monte Carlo power study of both tests")
    sp.add_argument("--error", type=_error_model, default=ErrorModel.normal(), help="normal | exp:RATE")
    sp.add_argument("--effects", type=_effects, help="LO:HI:STEP grid of slope changes")
    sp.add_argument("--n-pre", type=int, default=8)
    sp.add_argument("--n-post", type=int, default=8)
    sp.add_argument("--reps", type=int, default=1000)
    sp.add_argument("--boot", type=_boot, default=None, help=f"bootstrap replicates (default {DEFAULT_B})")
    sp.add_argument("--fast", action="store_true", help=f"use B={FAST_B}; wider Monte Carlo tolerance")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--alpha", type=_alpha, default=0.05)
    sp.add_argument("--output", choices=("text", "json", "csv"), default="csv")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--plots", metavar="DIR", help="write the power-curve SVG into DIR")
    return p


def _run_analysis(args, methods: tuple[str, ...]) -> int:
    try:
        dataset = parse_csv(args.input, getattr(args, "group_col", "group"))
    except (OSError, ItsError) as exc:
        print(f"itsrobust: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    coding = Coding(getattr(args, "coding", Coding.CENTERED.value))
    hac, lag = getattr(args, "hac", ("off", None))
    opts = AnalysisOptions(
        log=args.log,
        B=getattr(args, "boot", DEFAULT_B),
        alpha=args.alpha,
        seed=getattr(args, "seed", 0),
        hac=hac,
        hac_lag=lag,
        coding=coding,
        methods=methods,
        workers=args.workers,
    )
    spec = InterventionSpec(args.intervention, coding)
    report = analyze(dataset, spec, opts)
    sys.stdout.write(render(report, args.output))
    for group, method, msg in iter_errors(report):
        log.warning("group %r, %s: %s", group or "(series)", method, msg)
    if getattr(args, "plots", None):
        emit_panel_plots(dataset, args.plots, args.intervention)
    return 1 if report.all_failed else 0


def _run_power(args) -> int:
    B = args.boot if args.boot is not None else (FAST_B if args.fast else DEFAULT_B)
    try:
        config = SimConfig(
            n_pre=args.n_pre,
            n_post=args.n_post,
            effect_sizes=args.effects or default_effects(args.error),
            error=args.error,
            R=args.reps,
            B=B,
            alpha=args.alpha,
            seed=args.seed,
        )
        grid = estimate_power(config, workers=args.workers)
    except ItsError as exc:
        print(f"itsrobust: {exc}", file=sys.stderr)
        return 2
    out = {"csv": grid.to_csv, "json": grid.to_json, "text": grid.to_text}[args.output]()
    sys.stdout.write(out)
    if args.plots:
        emit_power_plot(grid, args.plots)
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("ITSROBUST_LOGLEVEL", "WARNING"), format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "fit":
        return _run_analysis(args, (STANDARD,))
    if args.command == "robust":
        return _run_analysis(args, (ROBUST,))
    if args.command == "analyze":
        return _run_analysis(args, (STANDARD, ROBUST))
    return _run_power(args)


if __name__ == "__main__":
    sys.exit(main())
