"""Command line entry point: ``robustpac {gen,run,bounds,report}``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import bounds
from .harness.data import PRESETS, write_dataset_csv
from .harness.experiment import ExperimentConfig, parse_config_file, run_experiment, with_overrides
from .harness.report import build_report
from .oracles import OracleConfig, draw_labeled_sample, make_adversary, make_task


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(v) for v in s.split(",") if v)


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(v) for v in s.split(",") if v)


def cmd_gen(args) -> int:
    p, n = args.p, args.n
    if args.preset:
        spec = PRESETS[args.preset]
        p = p or spec.p
        n = n or spec.n_total
    if not p or not n:
        print("gen: need --preset or both --p and --n", file=sys.stderr)
        return 2
    task = make_task(p, args.separation, seed=args.seed)
    cfg = OracleConfig(args.lam, make_adversary(args.adversary), seed=args.seed + 1)
    data = draw_labeled_sample(task, cfg, n // 2, n - n // 2)
    write_dataset_csv(data, args.out)
    print(f"wrote {len(data)} examples (p={p}, outliers={int(data.outlier.sum())}) to {args.out}")
    return 0


def cmd_run(args) -> int:
    if args.config:
        cfg = parse_config_file(args.config)
    elif args.preset:
        cfg = ExperimentConfig.preset(args.preset)
    else:
        cfg = ExperimentConfig()
    seeds = args.seeds
    if args.seed is not None:
        seeds = (args.seed,)
    cfg = with_overrides(cfg, out=args.out, threads=args.threads, epsilon=args.epsilon,
                         lambdas=args.lambdas, seeds=seeds, protocols=args.protocols)
    report, rows = run_experiment(cfg)
    for r in report:
        print(",".join(r.csv_row()))
    failed = [r for r in rows if r.error]
    if args.figures:
        build_report([cfg.out], cfg.out)
    if failed:
        print(f"{len(failed)} cell(s) failed; see {cfg.out}/failures.csv", file=sys.stderr)
    return 0


_BOUND_OPS = ("all", "lb_2machine_1round", "lb_2machine_tround", "lb_kmachine_1round",
              "lb_kmachine_tround", "space_lb_online", "halfspace_lb", "sample_complexity",
              "cc_upper_bound")


def cmd_bounds(args) -> int:
    a = args
    ops = {
        "lb_2machine_1round": lambda: bounds.lb_2machine_1round(a.epsilon, a.lam, a.d),
        "lb_2machine_tround": lambda: bounds.lb_2machine_tround(a.epsilon, a.lam, a.d, a.t),
        "lb_kmachine_1round": lambda: bounds.lb_kmachine_1round(a.epsilon, a.lam, a.d, a.k),
        "lb_kmachine_tround": lambda: bounds.lb_kmachine_tround(a.epsilon, a.lam, a.d, a.k, a.t),
        "space_lb_online": lambda: bounds.space_lb_online(a.epsilon, a.lam, a.d, a.r),
        "halfspace_lb": lambda: bounds.halfspace_lb(a.epsilon, a.lam, a.d - 1),
        "sample_complexity": lambda: bounds.sample_complexity(a.epsilon, a.delta, a.lam, a.log2H),
        "cc_upper_bound": lambda: bounds.cc_upper_bound(a.epsilon, a.delta, a.lam, a.log2H, a.b),
    }
    names = list(ops) if a.op == "all" else [a.op]
    print("bound,value")
    status = 0
    for name in names:
        try:
            print(f"{name},{ops[name]()!r}")
        except ValueError as exc:
            print(f"{name},error: {exc}", file=sys.stderr)
            status = 1
    return status


def cmd_report(args) -> int:
    written = build_report(args.inputs, args.out, figures=not args.no_figures)
    for kind, path in written.items():
        print(f"{kind}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="robustpac", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic noisy dataset to CSV")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--p", type=int)
    g.add_argument("--n", type=int, help="total examples (balanced classes)")
    g.add_argument("--lambda", dest="lam", type=float, default=0.0)
    g.add_argument("--separation", type=float, default=6.0)
    g.add_argument("--adversary", default="gaussian-noise")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run an experiment and write report/trace CSVs")
    r.add_argument("--config", help="flat key = value experiment file")
    r.add_argument("--preset", choices=sorted(PRESETS))
    r.add_argument("--epsilon", type=float)
    r.add_argument("--lambdas", type=_floats)
    r.add_argument("--seeds", type=_ints)
    r.add_argument("--seed", type=int, help="run a single seed")
    r.add_argument("--protocols", type=lambda s: tuple(v for v in s.split(",") if v))
    r.add_argument("--out")
    r.add_argument("--threads", type=int)
    r.add_argument("--figures", action="store_true", help="also render PNG figures into --out")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bounds", help="evaluate complexity bounds")
    b.add_argument("--op", choices=_BOUND_OPS, default="all")
    b.add_argument("--epsilon", type=float, required=True)
    b.add_argument("--lambda", dest="lam", type=float, default=0.0)
    b.add_argument("--d", type=int, default=101, help="VC-dimension (half-spaces: p + 1)")
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--t", type=int, default=1)
    b.add_argument("--r", type=int, default=1)
    b.add_argument("--log2H", type=float, default=100.0)
    b.add_argument("--delta", type=float, default=0.1)
    b.add_argument("--b", type=float, default=101.0)
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("report", help="merge report/trace CSVs and render figures")
    m.add_argument("inputs", nargs="+", help="run directories or CSV files")
    m.add_argument("--out", required=True)
    m.add_argument("--no-figures", action="store_true")
    m.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
