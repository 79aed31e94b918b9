"""
Experiment runner producing convergence tables.

One :class:`RunRecord` per level with the columns ``SGnode``, ``Max-error``,
``RMS-error``, ``Cond. no`` and the fit time.  Errors are measured at Halton
points; timing covers the fit and, for multilevel methods, the residual
evaluation at the new nodes, but not the error evaluation.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import grids
from .baselines import DEFAULT_MAX_CENTERS, iter_mlrbf, rbf_fit
from .errors import MLSKIError
from .functions import get_function
from .kernels import KernelFamily, KernelSpec, ShapeRule
from .mlski import iter_mlski, level_specs
from .ski import SparseInterpolant, ski_fit

logger = logging.getLogger(__name__)

METHODS = ("rbf", "mlrbf", "ski", "mlski")
DEFAULT_EVAL_COUNT = {1: 1000, 2: 25_600, 3: 125_000, 4: 194_481}
CSV_COLUMNS = ["method", "kernel", "shape", "level", "sgnode", "max_error", "rms_error",
               "cond_no", "time_level_sec", "time_cum_sec"]


def evaluate_errors(evaluator, f, points) -> tuple[float, float]:
    """Max-norm and root-mean-square error of ``evaluator`` against ``f`` at ``points``."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] == 0:
        raise ValueError("need at least one evaluation point")
    approx = evaluator(pts) if callable(evaluator) else np.asarray(evaluator, dtype=float)
    err = np.asarray(approx, dtype=float).reshape(-1) - np.asarray(f(pts), dtype=float).reshape(-1)
    return float(np.max(np.abs(err))), float(np.sqrt(np.mean(err * err)))


@dataclass
class RunConfig:
    method: str = "mlski"
    kernel: str = "gaussian"
    shape: float | None = None
    K: float | None = 3.0
    shape_ratio: str = "coarse_over_fine"
    dim: int = 2
    function: str = "franke2d"
    level_min: int = 1
    level_max: int = 4
    eval_count: int | None = None
    compute_cond: bool = False
    threads: int = 1
    max_centers: int = DEFAULT_MAX_CENTERS

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        KernelFamily(self.kernel)
        if self.shape is not None:
            self.K = None
        if self.eval_count is None:
            self.eval_count = DEFAULT_EVAL_COUNT.get(self.dim, 10_000)

    @property
    def grid_family(self) -> str:
        return "full" if self.method in ("rbf", "mlrbf") else "sparse"

    def shape_rule(self) -> ShapeRule:
        if self.shape is not None:
            return ShapeRule(shape=self.shape)
        return ShapeRule(K=self.K, grid=self.grid_family, ratio=self.shape_ratio)


@dataclass
class RunRecord:
    method: str
    kernel: str
    shape: float
    level: int
    sgnode: int
    max_error: float
    rms_error: float
    cond_no: float | None
    time_level_sec: float
    time_cum_sec: float


@dataclass
class LevelFailure:
    level: int
    error: str


@dataclass
class ExperimentResult:
    config: RunConfig
    records: list[RunRecord] = field(default_factory=list)
    failures: list[LevelFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _levels(cfg: RunConfig):
    return range(cfg.level_min, cfg.level_max + 1)


def run(config: RunConfig) -> ExperimentResult:
    """Run one experiment, collecting records for completed levels and failures for the rest."""
    cfg = config
    result = ExperimentResult(cfg)
    if cfg.level_max < cfg.level_min:
        return result
    f = get_function(cfg.function)
    if f.dim != cfg.dim:
        raise ValueError(f"function {f.name} is {f.dim}-d but dim={cfg.dim}")
    family = KernelFamily(cfg.kernel)
    KernelSpec(family, 1.0).check_dimension(cfg.dim)
    specs = level_specs(family, cfg.shape_rule(), cfg.dim)
    pts = grids.halton_points(cfg.eval_count, cfg.dim)
    exact = f(pts)
    workers = max(1, int(cfg.threads))
    cum = 0.0

    def record(level, nodes, shape, cond, dt, approx):
        err = approx - exact
        return RunRecord(cfg.method, cfg.kernel, shape, level, nodes,
                         float(np.max(np.abs(err))), float(np.sqrt(np.mean(err * err))),
                         cond, dt, cum)

    if cfg.method in ("ski", "rbf"):
        for level in _levels(cfg):
            spec = specs(level)
            t0 = time.perf_counter()
            try:
                if cfg.method == "ski":
                    interp = ski_fit(level, cfg.dim, f, spec, workers=workers)
                else:
                    interp = rbf_fit(level, cfg.dim, f, spec, max_centers=cfg.max_centers)
            except MLSKIError as exc:
                logger.error("level %d failed: %s", level, exc)
                result.failures.append(LevelFailure(level, str(exc)))
                continue
            dt = time.perf_counter() - t0
            cum += dt
            cond = interp.compute_conditions() if cfg.compute_cond else None
            result.records.append(record(level, interp.node_count, spec.shape, cond, dt,
                                         _eval(interp, pts, workers)))
        return result

    if cfg.method == "mlski":
        cascade = iter_mlski(cfg.level_min, cfg.level_max, cfg.dim, f, specs, workers=workers)
    else:
        cascade = iter_mlrbf(cfg.level_min, cfg.level_max, cfg.dim, f, specs, max_centers=cfg.max_centers)
    approx = np.zeros(pts.shape[0])
    level = cfg.level_min
    try:
        # the generator is suspended while we measure errors, so rep.time_sec excludes them
        for corr, rep in cascade:
            cum += rep.time_sec
            cond = corr.compute_conditions() if cfg.compute_cond else None
            approx = approx + _eval(corr, pts, workers)
            result.records.append(record(rep.level, rep.nodes, rep.shape, cond, rep.time_sec, approx))
            level = rep.level + 1
    except MLSKIError as exc:
        logger.error("level %d failed: %s", level, exc)
        result.failures.append(LevelFailure(level, str(exc)))
        # later levels depend on this one
        for lv in range(level + 1, cfg.level_max + 1):
            result.failures.append(LevelFailure(lv, f"not run: level {level} failed"))
    return result


def _eval(interp, pts, workers):
    if isinstance(interp, SparseInterpolant):
        return interp(pts, workers=workers)
    return interp(pts)


def run_experiment(config: RunConfig) -> list[RunRecord]:
    """Run ``config`` and return the records of all completed levels."""
    return run(config).records


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in records:
            row = asdict(r)
            if row["cond_no"] is None:
                row["cond_no"] = ""
            writer.writerow({k: row[k] for k in CSV_COLUMNS})


def write_json(result: ExperimentResult, path) -> None:
    import platform

    payload = {
        "config": asdict(result.config),
        "shape_rule": repr(result.config.shape_rule()),
        "workers": result.config.threads,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "records": [asdict(r) for r in result.records],
        "failures": [asdict(f) for f in result.failures],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=lambda o: None if o is None else str(o))


def write_plot(records, path, title: str = "") -> None:
    """Static SVG with RMS error against node count and against cumulative time."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    by_method: dict[str, list[RunRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    for method, rows in by_method.items():
        ax1.loglog([r.sgnode for r in rows], [r.rms_error for r in rows], "o-", label=method.upper())
        ax2.loglog([max(r.time_cum_sec, 1e-6) for r in rows], [r.rms_error for r in rows], "o-",
                   label=method.upper())
    ax1.set_xlabel("N")
    ax2.set_xlabel("Time [s]")
    for ax in (ax1, ax2):
        ax.set_ylabel("RMS-error")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def format_table(records) -> str:
    lines = [f"{'level':>5} {'SGnode':>8} {'Max-error':>11} {'RMS-error':>11} {'Cond. no':>11} "
             f"{'Time':>9} {'Cum.':>9}"]
    for r in records:
        cond = "-" if r.cond_no is None else ("inf" if math.isinf(r.cond_no) else f"{r.cond_no:.4e}")
        lines.append(f"{r.level:>5} {r.sgnode:>8} {r.max_error:>11.4e} {r.rms_error:>11.4e} "
                     f"{cond:>11} {r.time_level_sec:>9.3f} {r.time_cum_sec:>9.3f}")
    return "\n".join(lines)


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")
