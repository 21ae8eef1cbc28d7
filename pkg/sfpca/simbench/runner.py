# -*- coding: utf-8 -*-

# Seeded benchmark: every method on identically generated replicates, with
# per-replicate metrics and a mean/median aggregate per method.

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import man_sfpca, pipeline
from ..errors import ConfigError
from ..linalg_utils import l1_norm, smoother_for, thin_svd
from ..logger import LogMixin
from ..types.deflation import DeflationScheme
from ..types.manifold import ManConfig
from ..types.rank1 import Rank1Config
from ..types.run import BENCH_METHODS
from ..types.scenario import ScenarioSpec
from ..types.tuning import TuningGrid
from .metrics import MetricsReport, metric_cpve, metric_rss_error, metric_support
from .scenarios import GroundTruth, generate_scenario

SCHEMES = {"hd": "hotelling", "pd": "projection", "sd": "schur"}
SCHEMA_VERSION = 1

AGGREGATE_FIELDS = (
    "rss_error_u",
    "rss_error_v",
    "tpr_u",
    "fpr_u",
    "tpr_v",
    "fpr_v",
    "suboptimality",
)
STAT_FIELDS = ("svd_calls", "retraction_calls", "descent_solves")


@dataclass(frozen=True)
class BenchSettings:
    """Penalty levels shared by every method, near optimal for both scenarios."""

    lambda_u: float = 1.0
    lambda_v: float = 1.0
    alpha_u: float = 3.0
    alpha_v: float = 3.0
    penalty_order: int = 2
    tune: bool = False
    workers: int = 1
    record_timings: bool = False
    max_outer: int = 100


@dataclass
class MethodOutput:
    u: np.ndarray
    v: np.ndarray
    converged: bool
    engine_stats: Dict[str, int] = field(default_factory=dict)


@dataclass
class BenchmarkResult:
    scenario: ScenarioSpec
    methods: Tuple[str, ...]
    replicates: int
    seed: int
    settings: BenchSettings
    rows: List[MetricsReport]
    factors: Dict[Tuple[str, int], MethodOutput] = field(default_factory=dict)

    def aggregate(self) -> List[Dict]:
        out = []
        for method in self.methods:
            rows = [r for r in self.rows if r.method == method and not r.failed]
            failed = sum(1 for r in self.rows if r.method == method and r.failed)
            for stat, fold in (("mean", np.mean), ("median", np.median)):
                entry: Dict = {"method": method, "statistic": stat, "failed": failed}
                k = max((len(r.cpve) for r in rows), default=0)
                for j in range(k):
                    cpve = [r.cpve[j] for r in rows]
                    entry["cpve_{0}".format(j + 1)] = _fold(fold, cpve)
                for name in AGGREGATE_FIELDS:
                    entry[name] = _fold(fold, [getattr(r, name) for r in rows])
                for name in STAT_FIELDS:
                    entry[name] = _fold(
                        fold, [r.engine_stats.get(name) for r in rows if r.engine_stats]
                    )
                out.append(entry)
        return out

    def to_dict(self) -> Dict:
        timings = self.settings.record_timings
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": {
                "id": self.scenario.id,
                "n": self.scenario.n,
                "p": self.scenario.p,
                "target_snr": self.scenario.target_snr,
            },
            "seed": self.seed,
            "replicates": self.replicates,
            "methods": list(self.methods),
            "settings": {
                "lambda_u": self.settings.lambda_u,
                "lambda_v": self.settings.lambda_v,
                "alpha_u": self.settings.alpha_u,
                "alpha_v": self.settings.alpha_v,
                "penalty_order": self.settings.penalty_order,
                "tune": self.settings.tune,
            },
            "rows": [r.to_dict(record_timings=timings) for r in self.rows],
            "aggregate": self.aggregate(),
        }


def _fold(fold, values) -> Optional[float]:
    values = [w for w in values if w is not None]
    if not values:
        return None
    return float(fold(values))


class BenchmarkRunner(LogMixin):
    def __init__(
        self,
        scenario: ScenarioSpec,
        methods: Sequence[str],
        replicates: int,
        seed: int,
        settings: Optional[BenchSettings] = None,
        keep_factors: bool = False,
    ):
        unknown = [m for m in methods if m not in BENCH_METHODS]
        if unknown:
            raise ConfigError(
                "unknown benchmark method(s) {0}; valid tokens are {1}".format(
                    ", ".join(unknown), ", ".join(BENCH_METHODS)
                )
            )
        if replicates < 1:
            raise ConfigError("please set ‘replicates’ to at least 1")
        self.scenario = scenario
        self.methods = tuple(methods)
        self.replicates = replicates
        self.seed = seed
        self.settings = settings or BenchSettings()
        self.keep_factors = keep_factors

    def _fit(self, method: str, truth: GroundTruth) -> MethodOutput:
        x = truth.x_noisy
        n, p = x.shape
        k = truth.spec.k
        st = self.settings
        if method == "svd":
            left, _, right = thin_svd(x)
            return MethodOutput(left[:, :k], right[:, :k], True)
        s_u = smoother_for(n, st.alpha_u, st.penalty_order)
        s_v = smoother_for(p, st.alpha_v, st.penalty_order)
        if method in SCHEMES:
            grid: Optional[TuningGrid] = None
            if st.tune:
                grid = TuningGrid(penalty_order=st.penalty_order)  # type: ignore
            fit = pipeline.fit_pipeline(
                x,
                Rank1Config(st.lambda_u, st.lambda_v, s_u, s_v),
                k,
                DeflationScheme(SCHEMES[method]),  # type: ignore
                grid,
            )
            return MethodOutput(fit.u, fit.v, fit.converged)
        config = ManConfig(
            k=k,
            lambda_u=st.lambda_u,
            lambda_v=st.lambda_v,
            s_u=s_u,
            s_v=s_v,
            engine=method,  # type: ignore
            max_outer=st.max_outer,
        )
        block = man_sfpca.fit_manifold(x, config)
        return MethodOutput(
            block.u, block.v, block.converged, block.engine_stats.to_dict()
        )

    def _evaluate(
        self, method: str, index: int, truth: GroundTruth, svd
    ) -> Tuple[MetricsReport, Optional[MethodOutput]]:
        st = self.settings
        row = MetricsReport(method=method, replicate=index, seed=truth.spec.seed)
        start = time.perf_counter()
        try:
            out = self._fit(method, truth)
            x = truth.x_noisy
            row.cpve = metric_cpve(x, out.u, out.v)
            row.rss_error_u = metric_rss_error(out.u, truth.u_star, svd[0])
            row.rss_error_v = metric_rss_error(out.v, truth.v_star, svd[1])
            row.tpr_u, row.fpr_u = metric_support(out.u, truth.u_star)
            row.tpr_v, row.fpr_v = metric_support(out.v, truth.v_star)
            row.objective = float(
                -np.sum(np.diag(out.u.T @ x @ out.v))
                + st.lambda_u * l1_norm(out.u)
                + st.lambda_v * l1_norm(out.v)
            )
            row.converged = out.converged
            row.engine_stats = out.engine_stats
        except Exception as e:
            self.warn(
                "{0} failed on replicate {1}: {2}: {3}".format(
                    method, index, type(e).__name__, e
                )
            )
            row = MetricsReport(
                method=method,
                replicate=index,
                seed=truth.spec.seed,
                failed=True,
                error="{0}: {1}".format(type(e).__name__, e),
            )
            out = None
        row.wall_time = time.perf_counter() - start
        return row, out

    def replicate(
        self, index: int
    ) -> List[Tuple[MetricsReport, Optional[MethodOutput]]]:
        truth = generate_scenario(self.scenario.with_seed(self.seed + index))
        left, _, right = thin_svd(truth.x_noisy)
        k = truth.spec.k
        svd = (left[:, :k], right[:, :k])
        results = [self._evaluate(m, index, truth, svd) for m in self.methods]
        objectives = [r.objective for r, _ in results if r.objective is not None]
        if objectives:
            best = min(objectives)
            for row, _ in results:
                if row.objective is not None:
                    row.suboptimality = row.objective - best
        self.log("replicate {0} done".format(index))
        return results

    def run(self) -> BenchmarkResult:
        indices = range(self.replicates)
        if self.settings.workers > 1:
            with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
                per_replicate = list(pool.map(self.replicate, indices))
        else:
            per_replicate = [self.replicate(i) for i in indices]

        rows: List[MetricsReport] = []
        factors: Dict[Tuple[str, int], MethodOutput] = {}
        for i, results in enumerate(per_replicate):
            for row, out in results:
                rows.append(row)
                if self.keep_factors and out is not None:
                    factors[(row.method, i)] = out
        return BenchmarkResult(
            scenario=self.scenario,
            methods=self.methods,
            replicates=self.replicates,
            seed=self.seed,
            settings=self.settings,
            rows=rows,
            factors=factors,
        )


def run_benchmark(
    scenario: ScenarioSpec,
    methods: Sequence[str],
    replicates: int,
    seed: int,
    settings: Optional[BenchSettings] = None,
    keep_factors: bool = False,
) -> BenchmarkResult:
    return BenchmarkRunner(
        scenario, methods, replicates, seed, settings, keep_factors
    ).run()
