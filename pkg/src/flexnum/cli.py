"""Command-line entry point: ``flexnum {evaluate,sweep,recommend,validate}``.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, check_grid, load_config
from .quadrature import QuadratureError
from .radio_params import PreconditionError, as_fraction
from .rate import expected_rate
from .report import (
    CsvRow,
    fig4_rows,
    fig5_rows,
    flag_recommended,
    recommendation_table,
    render_csv,
    render_recommend_csv,
    render_recommend_text,
)
from .specfun import DomainError
from .validate import FAIL, run_validation

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("flexnum")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _check_efficiency(cfg: RunConfig) -> None:
    bad = cfg.efficiency.violations()
    if bad:
        raise ConfigError("$.efficiency", "; ".join(bad))


def cmd_evaluate(cfg: RunConfig, args) -> int:
    _check_efficiency(cfg)
    tau = as_fraction(args.tau)
    try:
        case = cfg.case(args.env, args.scenario, args.distance, mus=(args.mu,), taus_ms=(tau,))
    except PreconditionError as exc:
        raise ConfigError("$.taus_ms", str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("$", str(exc)) from None
    row = CsvRow(args.env, args.scenario, float(args.distance), expected_rate(case, args.mu, tau))
    text = render_csv(flag_recommended([row], cfg.rate_mode))
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    _check_efficiency(cfg)
    out = Path(args.out or cfg.out_dir)
    for name, rows in (("fig4.csv", fig4_rows(cfg, args.workers)), ("fig5.csv", fig5_rows(cfg, args.workers))):
        _write(out / name, render_csv(rows))
        print(f"wrote {out / name} ({len(rows)} rows)")
    return EXIT_OK


def cmd_recommend(cfg: RunConfig, args) -> int:
    _check_efficiency(cfg)
    cells = recommendation_table(cfg)
    text = render_recommend_text(cells)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        _write(out / "recommend.csv", render_recommend_csv(cells))
        _write(out / "recommend.txt", text)
    return EXIT_OK


def cmd_validate(cfg: RunConfig, args) -> int:
    results = run_validation(cfg, trials=args.trials, seed=args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if r.status == FAIL]
    if failed:
        print(f"{len(failed)} check(s) failed:", file=sys.stderr)
        for r in failed:
            print(f"  {r.name}: {r.detail}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"all {len(results)} checks passed or skipped")
    return EXIT_OK


COMMANDS = {
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "recommend": cmd_recommend,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (defaults reproduce the reference setup)")
    common.add_argument("--out", help="output directory (file for evaluate); evaluate defaults to stdout")
    common.add_argument("--seed", type=int, help="Monte-Carlo root seed (u64)")
    common.add_argument("--trials", type=int, help="Monte-Carlo trials")
    common.add_argument("--rate-mode", choices=("time-avg", "aggregate"),
                        help="metric used for recommendations (default time-avg)")
    common.add_argument("--workers", type=int, default=1, help="threads for grid evaluation")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="flexnum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("evaluate", parents=[common], help="expected rate for one (mu, tau) configuration")
    ev.add_argument("--env", required=True)
    ev.add_argument("--scenario", required=True)
    ev.add_argument("--distance", type=float, required=True, help="horizontal UE-AP distance (m)")
    ev.add_argument("--mu", type=int, required=True)
    ev.add_argument("--tau", type=str, required=True, help="scheduling interval (ms)")
    sub.add_parser("sweep", parents=[common], help="write fig4.csv and fig5.csv")
    sub.add_parser("recommend", parents=[common], help="best (mu, tau) per scenario vs the reference table")
    sub.add_parser("validate", parents=[common], help="run oracle cross-checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        overrides = {}
        if args.rate_mode:
            overrides["rate_mode"] = args.rate_mode.replace("-", "_")
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed", "seed must be an unsigned 64-bit integer")
            overrides["seed"] = args.seed
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError("--trials", "trials must be >= 1")
            overrides["trials"] = args.trials
        if overrides:
            cfg = dataclasses.replace(cfg, **overrides)
        check_grid(cfg)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error at {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, DomainError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
