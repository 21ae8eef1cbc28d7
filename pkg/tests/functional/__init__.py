import functools
import unittest

from sfpca.simbench.runner import BenchSettings, run_benchmark
from sfpca.types.scenario import ScenarioSpec

WORKERS = 4


@functools.lru_cache(maxsize=None)
def benchmark(scenario, methods, replicates, seed=0, tune=False):
    settings = BenchSettings(workers=WORKERS, tune=tune)
    spec = ScenarioSpec.default(scenario)
    return run_benchmark(spec, methods, replicates, seed, settings)


class BenchmarkUsingTest(unittest.TestCase):
    """Monte-Carlo runs on the full-size scenarios, shared across test classes."""

    def run_bench(self, scenario, methods, replicates, tune=False):
        result = benchmark(scenario, tuple(methods), replicates, tune=tune)
        failed = [r for r in result.rows if r.failed]
        self.assertFalse(failed, [r.error for r in failed])
        return result

    def rows_by_method(self, result, method):
        return [r for r in result.rows if r.method == method]
