"""Command-line entry point.

Exit codes: 0 success, 2 configuration or I/O error, 3 numerical degeneracy.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from redsbo.baselines import StrategyKind
from redsbo.errors import ConfigError, NumericalDegeneracyError, RedsError
from redsbo.harness.config import ExperimentConfig, load_config
from redsbo.harness.runner import run_experiment

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SUITES = ("branin", "hartmann4", "hartmann6")


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(out=args.out, seed=args.seed)
    result = run_experiment(cfg, workers=args.workers)
    for agg in result.aggregates.values():
        print(f"{agg.strategy:>8}  final regret {agg.final.mean():10.3f} +- {agg.final.std():8.3f}"
              f"   time {agg.wall_s.mean():8.3f} +- {agg.wall_s.std():.3f} s")
    print(f"results written to {result.out}")
    return 0


def _cmd_validate(args) -> int:
    from redsbo.theory import validate

    records = validate(beta=args.beta, tau=args.tau, seeds=args.seeds, J=args.J, delta=args.delta,
                       master_seed=args.seed, quick=args.quick)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = [r.to_dict() for r in records]
    (out / "theory_report.json").write_text(json.dumps(payload, indent=2, default=float) + "\n")
    for r in records:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<24} measured={r.measured:.6g} bound={r.bound}")
    return 0


def _cmd_bench(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    strategies = tuple(StrategyKind.parse(s) for s in args.strategies.split(","))
    rows = []
    for name in suites:
        cfg = ExperimentConfig(benchmark=name, strategies=strategies, T=args.T, replicas=args.replicas,
                               seed=args.seed, alpha=args.alpha, out=Path(args.out) / name)
        result = run_experiment(cfg, workers=args.workers)
        rows.append((name, result.aggregates))
    header = "benchmark    " + "".join(f"{s.value:>22}" for s in strategies)
    print("compute time per run (s), mean +- std")
    print(header)
    for name, aggs in rows:
        cells = "".join(f"{aggs[s].wall_s.mean():>13.3f} +- {aggs[s].wall_s.std():5.2f}" for s in strategies)
        print(f"{name:<13}{cells}")
    print("final cumulative regret, mean +- std")
    for name, aggs in rows:
        cells = "".join(f"{aggs[s].final.mean():>13.2f} +- {aggs[s].final.std():5.2f}" for s in strategies)
        print(f"{name:<13}{cells}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redsbo", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("validate-theory", help="numerical concentration checks on the Mercer kernel")
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--tau", type=float, default=0.2)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--out", default="theory")
    p.add_argument("--J", type=int, default=500)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("bench", help="regret and runtime comparison on the benchmark suite")
    p.add_argument("--suite", choices=SUITES + ("all",), default="branin")
    p.add_argument("--strategies", default="reds,bpe")
    p.add_argument("--replicas", type=int, default=10)
    p.add_argument("--T", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", default="bench")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NumericalDegeneracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RedsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
