"""Command line entry point: ``mlski run`` for convergence tables, ``mlski grid`` to export point sets."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from . import grids
from .errors import MLSKIError
from .harness import (METHODS, RunConfig, format_table, run, sidecar_path, write_csv, write_json,
                      write_plot)
from .kernels import SHAPE_RATIOS, KernelFamily


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlski", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="fit level by level and report errors")
    r.add_argument("--method", choices=METHODS, default="mlski")
    r.add_argument("--kernel", choices=[k.value for k in KernelFamily], default="gaussian")
    shape = r.add_mutually_exclusive_group()
    shape.add_argument("--shape", type=float, help="fixed shape parameter c for every level")
    shape.add_argument("--K", type=float, help="separation-distance rule constant (default 3)")
    r.add_argument("--shape-ratio", choices=SHAPE_RATIOS, default="coarse_over_fine",
                   help="orientation of the separation-distance ratio used with --K")
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--function", required=True)
    r.add_argument("--level-min", type=int, default=1)
    r.add_argument("--level-max", type=int, required=True)
    r.add_argument("--eval", default=None, help="evaluation points, 'halton:<count>'")
    r.add_argument("--cond", action="store_true", help="report 2-norm condition numbers")
    r.add_argument("--out", help="CSV output path; a JSON config echo is written next to it")
    r.add_argument("--plot", help="SVG output path for RMS error vs N and vs time")
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--max-centers", type=int, default=20_000,
                   help="largest full-grid system the baselines will attempt")
    r.add_argument("-v", "--verbose", action="store_true")

    g = sub.add_parser("grid", help="export a sparse or full grid as CSV")
    g.add_argument("--kind", choices=("sparse", "full"), default="sparse")
    g.add_argument("--level", type=int, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--out", required=True)
    return parser


def _cmd_run(args) -> int:
    cfg = RunConfig(
        method=args.method,
        kernel=args.kernel,
        shape=args.shape,
        K=args.K if args.K is not None else (None if args.shape is not None else 3.0),
        shape_ratio=args.shape_ratio,
        dim=args.dim,
        function=args.function,
        level_min=args.level_min,
        level_max=args.level_max,
        eval_count=grids.parse_eval_spec(args.eval) if args.eval else None,
        compute_cond=args.cond,
        threads=args.threads,
        max_centers=args.max_centers,
    )
    result = run(cfg)
    print(f"# {cfg.method} {cfg.kernel} {cfg.shape_rule().describe()} d={cfg.dim} "
          f"f={cfg.function} eval=halton:{cfg.eval_count} threads={cfg.threads}")
    print(format_table(result.records))
    for fail in result.failures:
        print(f"level {fail.level} FAILED: {fail.error}", file=sys.stderr)
    if args.out:
        write_csv(result.records, args.out)
        write_json(result, sidecar_path(args.out))
    else:
        print(json.dumps(asdict(cfg)))
    if args.plot:
        write_plot(result.records, args.plot,
                   title=f"{cfg.function}, {cfg.kernel}, {cfg.shape_rule().describe()}")
    return 0 if result.ok else 2


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.kind == "sparse":
            pts = grids.sparse_grid(args.level, args.dim).points
        else:
            pts = grids.full_grid(args.level, args.dim).points
        grids.write_points_csv(args.out, pts)
        print(f"wrote {pts.shape[0]} points to {args.out}")
        return 0
    except (MLSKIError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
