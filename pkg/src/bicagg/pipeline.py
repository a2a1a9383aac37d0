"""End-to-end runs: enumerate, aggregate, clean, evaluate; and noise sweeps."""

from __future__ import annotations

import csv
import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .aggregate import aggregate_by_overlap, aggregate_single_linkage, single_linkage
from .baseline import BaselineParams, microcluster_pipeline
from .core import DataMatrix, Solution, remove_non_maximal
from .enumeration import EnumParams, enumerate_maximal
from .metrics import MetricReport, evaluate
from .outlier import clean
from .synthgen import SynthSpec, add_noise, generate

log = logging.getLogger(__name__)

METHODS = ("none", "sl", "ov", "mc")
LONG_FIELDS = (
    "sigma", "epsilon", "repetition", "method", "bicluster_count",
    "precision", "recall", "f_score", "ce", "diff_cov", "error",
)
MEAN_FIELDS = (
    "sigma", "epsilon", "method", "runs", "bicluster_count",
    "precision", "recall", "f_score", "ce", "diff_cov", "errors",
)
TARGET_PRECISION = 0.85


@dataclass(frozen=True)
class AggConfig:
    method: str = "none"
    k: int = 5
    th: float = 0.25
    eta: float = 0.15
    gamma: float = 0.15
    mc_order: str = "dm"
    remove_outliers: bool = False
    label: str | None = None  # method column in sweep output; defaults to ``method``

    @property
    def name(self) -> str:
        return self.label or self.method

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass
class PipelineResult:
    raw: Solution
    solution: Solution
    groups: list[list[int]]
    report: MetricReport | None = None
    heights: list[int] = field(default_factory=list)


def aggregate(s: Solution, cfg: AggConfig) -> tuple[Solution, list[list[int]], list[int]]:
    """Apply one aggregation method (and optional outlier removal) to ``s``.

    ``s`` is reduced to its maximal members first. Returns the result, the
    member indices (into the reduced ``s``) of every output bicluster and,
    for single linkage, the dendrogram heights. ``k`` larger than the
    number of biclusters is clamped.
    """
    s = remove_non_maximal(s)
    heights: list[int] = []
    if not len(s) or cfg.method == "none":
        out, groups = s, [[i] for i in range(len(s))]
    elif cfg.method == "sl":
        out, groups = aggregate_single_linkage(s, min(cfg.k, len(s)))
        heights = single_linkage(s).heights
    elif cfg.method == "ov":
        out, groups = aggregate_by_overlap(s, cfg.th, return_members=True)
    else:
        out = microcluster_pipeline(s, BaselineParams(cfg.eta, cfg.gamma, cfg.mc_order))
        # no membership tracking here: every input fragment participates
        groups = [list(range(len(s)))] * len(out)
    if cfg.remove_outliers and len(out):
        out = out.replace(clean(b, [s[i] for i in g]) for b, g in zip(out, groups))
    return out, groups, heights


def run_pipeline(m, params: EnumParams, cfg: AggConfig, truth: Solution | None = None) -> PipelineResult:
    raw = enumerate_maximal(m, params)
    out, groups, heights = aggregate(raw, cfg)
    report = evaluate(out, truth) if truth is not None else None
    return PipelineResult(raw, out, groups, report, heights)


def center_rows(m: DataMatrix) -> DataMatrix:
    """Subtract each row's mean."""
    v = m.values
    return DataMatrix(v - v.mean(axis=1, keepdims=True))


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepConfig:
    sigma_grid: tuple[float, ...]
    epsilons: tuple[float, ...]
    methods: tuple[AggConfig, ...] = ()
    repetitions: int = 30
    min_rows: int = 50
    min_cols: int = 4
    seed: int = 0
    synth: SynthSpec | None = field(default_factory=SynthSpec)
    matrix: DataMatrix | None = None
    truth: Solution | None = None

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.sigma_grid:
            raise ValueError("sigma grid must be non-empty")
        if not self.epsilons:
            raise ValueError("epsilon list must be non-empty")
        if any(s < 0 for s in self.sigma_grid):
            raise ValueError("sigma values must be >= 0")
        if self.matrix is None and self.synth is None:
            raise ValueError("need a synthetic benchmark or a dataset")
        if self.matrix is not None and self.truth is None:
            raise ValueError("a dataset sweep needs a truth solution")


def repetition_seed(seed: int, rep: int) -> int:
    return int(np.random.SeedSequence([seed, rep]).generate_state(1, dtype=np.uint64)[0])


def _instance(cfg: SweepConfig, rep: int) -> tuple[DataMatrix, Solution]:
    if cfg.matrix is not None:
        return cfg.matrix, cfg.truth
    inst = generate(replace(cfg.synth, seed=repetition_seed(cfg.seed, rep)))
    return inst.matrix, inst.truth


def _job(cfg: SweepConfig, rep: int, k_sigma: int) -> list[dict]:
    sigma = cfg.sigma_grid[k_sigma]
    rows = []
    try:
        clean_m, truth = _instance(cfg, rep)
        noisy = add_noise(clean_m, sigma, [cfg.seed, rep, k_sigma])
    except Exception as exc:  # noqa: BLE001 - recorded per row
        return [_error_row(sigma, e, rep, "raw", exc) for e in cfg.epsilons]
    for eps in cfg.epsilons:
        try:
            raw = enumerate_maximal(noisy, EnumParams(cfg.min_rows, cfg.min_cols, eps))
        except Exception as exc:  # noqa: BLE001
            rows.append(_error_row(sigma, eps, rep, "raw", exc))
            continue
        rows.append(_row(sigma, eps, rep, "raw", raw, truth))
        for agg in cfg.methods:
            try:
                out, _, _ = aggregate(raw, agg)
                rows.append(_row(sigma, eps, rep, agg.name, out, truth))
            except Exception as exc:  # noqa: BLE001
                rows.append(_error_row(sigma, eps, rep, agg.name, exc))
    return rows


def _row(sigma, eps, rep, method, sol, truth) -> dict:
    r = evaluate(sol, truth)
    return {
        "sigma": sigma, "epsilon": eps, "repetition": rep, "method": method,
        "bicluster_count": len(sol), "precision": r.precision, "recall": r.recall,
        "f_score": r.f_score, "ce": r.ce, "diff_cov": r.diff_cov, "error": "",
    }


def _error_row(sigma, eps, rep, method, exc) -> dict:
    log.warning("sweep job failed (sigma=%s eps=%s rep=%s): %s", sigma, eps, rep, exc)
    row = dict.fromkeys(LONG_FIELDS)
    row.update(sigma=sigma, epsilon=eps, repetition=rep, method=method,
               error=f"{type(exc).__name__}: {exc}")
    return row


def worker_count() -> int:
    env = os.environ.get("BICLUST_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer BICLUST_THREADS=%r", env)
    return os.cpu_count() or 1


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> list[dict]:
    """Run every (sigma, repetition) job; rows come back in deterministic order."""
    workers = worker_count() if workers is None else workers
    jobs = [(rep, k) for k in range(len(cfg.sigma_grid)) for rep in range(cfg.repetitions)]
    if workers <= 1 or len(jobs) == 1:
        chunks = [_job(cfg, rep, k) for rep, k in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            futs = [pool.submit(_job, cfg, rep, k) for rep, k in jobs]
            chunks = [f.result() for f in futs]
    method_rank = {"raw": -1, **{a.name: i for i, a in enumerate(cfg.methods)}}
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (cfg.sigma_grid.index(r["sigma"]), cfg.epsilons.index(r["epsilon"]),
                             r["repetition"], method_rank.get(r["method"], 99)))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _mean(vals):
    vals = [v for v in vals if v is not None]
    return sum(vals) / len(vals) if vals else None


def average_rows(rows: list[dict]) -> list[dict]:
    """Mean of each metric over repetitions, per (sigma, epsilon, method).

    Undefined values are skipped; a mean over no defined values stays undefined.
    """
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["sigma"], r["epsilon"], r["method"]), []).append(r)
    out = []
    for (sigma, eps, method), rs in groups.items():
        ok = [r for r in rs if not r["error"]]
        out.append({
            "sigma": sigma, "epsilon": eps, "method": method, "runs": len(ok),
            **{f: _mean([r[f] for r in ok]) for f in MEAN_FIELDS[4:-1]},
            "errors": len(rs) - len(ok),
        })
    return out


def select_epsilon(mean_rows: list[dict], target: float = TARGET_PRECISION) -> list[dict]:
    """Per sigma, the epsilon whose mean raw precision is closest to ``target``."""
    best: dict = {}
    for r in mean_rows:
        if r["method"] != "raw" or r["precision"] is None:
            continue
        key = (abs(r["precision"] - target), r["epsilon"])
        if r["sigma"] not in best or key < best[r["sigma"]][0]:
            best[r["sigma"]] = (key, r)
    sigmas = []
    for r in mean_rows:
        if r["sigma"] not in sigmas:
            sigmas.append(r["sigma"])
    return [
        {"sigma": s, "epsilon": best[s][1]["epsilon"] if s in best else None,
         "precision": best[s][1]["precision"] if s in best else None}
        for s in sigmas
    ]


def to_csv(rows: list[dict], fields) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r[f]) for f in fields])
    return buf.getvalue()
