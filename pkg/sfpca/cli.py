# -*- coding: utf-8 -*-

# Command-line front end: simulate, fit, deflate and bench.
#
# Exit codes: 0 ok, 2 usage or input error, 3 fit did not converge,
# 4 numerical failure.

import argparse
import csv
import logging
import os
import sys
from dataclasses import replace
from typing import List, Optional

from . import __version__
from .deflation import (
    DeflationScheme,
    DeflationState,
    deflate_block,
    deflate_vector,
    orthogonality_report,
)
from .errors import NumericError, SFPCAError
from .io_utils import FLOAT_FORMAT, ensure_dir, read_matrix, write_json, write_matrix
from .linalg_utils import s_norm, smoother_for
from .man_sfpca import fit_manifold
from .pipeline import fit_pipeline
from .simbench.runner import BenchSettings, run_benchmark
from .simbench.scenarios import generate_scenario
from .types.manifold import ManConfig
from .types.rank1 import Rank1Config
from .types.run import BENCH_METHODS, METHODS, RunConfig
from .types.scenario import ScenarioSpec
from .types.tuning import TuningGrid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_NUMERIC = 4

SCHEMA_VERSION = 1


def cmd_simulate(config: RunConfig) -> int:
    spec = ScenarioSpec.default(config.scenario, config.seed)
    if config.overlap_shift is not None:
        spec = replace(spec, overlap_shift=config.overlap_shift)
    truth = generate_scenario(spec)
    out = ensure_dir(config.output)
    write_matrix(os.path.join(out, "x.csv"), truth.x_noisy)
    write_matrix(os.path.join(out, "u_star.csv"), truth.u_star)
    write_matrix(os.path.join(out, "v_star.csv"), truth.v_star)
    write_matrix(os.path.join(out, "d_star.csv"), truth.d_star)
    write_json(
        os.path.join(out, "meta.json"),
        dict(truth.to_meta(), schema_version=SCHEMA_VERSION),
    )
    return EXIT_OK


def _s_norms(fit, s_u, s_v):
    """S-norm of every component, under the smoothers it was fitted with."""
    norms_u, norms_v = [], []
    for comp, tuned in zip(fit.components, fit.tuning):
        su, sv = (tuned.config.s_u, tuned.config.s_v) if tuned else (s_u, s_v)
        norms_u.append(s_norm(comp.u, su))
        norms_v.append(s_norm(comp.v, sv))
    return norms_u, norms_v


def cmd_fit(config: RunConfig) -> int:
    x = read_matrix(config.input)
    n, p = x.shape
    s_u = smoother_for(n, config.alpha_u, config.penalty_order)
    s_v = smoother_for(p, config.alpha_v, config.penalty_order)
    report = {
        "schema_version": SCHEMA_VERSION,
        "method": config.method,
        "deflation": config.deflation,
        "rank": config.rank,
        "lambda_u": config.lambda_u,
        "lambda_v": config.lambda_v,
        "alpha_u": config.alpha_u,
        "alpha_v": config.alpha_v,
        "penalty_order": config.penalty_order,
        "tune": config.tune,
    }

    if config.method == "rank1":
        grid = None
        if config.tune:
            grid = TuningGrid(penalty_order=config.penalty_order)
        scheme = DeflationScheme(
            "schur" if config.deflation == "none" else config.deflation  # type: ignore
        )
        rank1 = Rank1Config(config.lambda_u, config.lambda_v, s_u, s_v)
        fit = fit_pipeline(x, rank1, config.rank, scheme, grid)
        u, v, d, converged = fit.u, fit.v, fit.d, fit.converged
        report.update(fit.to_dict())
        report["deflation"] = config.deflation
        report["s_norms_u"], report["s_norms_v"] = _s_norms(fit, s_u, s_v)
    else:
        options = {}
        if config.max_outer is not None:
            options["max_outer"] = config.max_outer
        man = ManConfig(
            k=config.rank,
            lambda_u=config.lambda_u,
            lambda_v=config.lambda_v,
            s_u=s_u,
            s_v=s_v,
            engine=config.method,  # type: ignore
            rho=config.rho,
            order_weight_epsilon=config.order_weight_epsilon,
            **options
        )
        block = fit_manifold(x, man)
        u, v, d, converged = block.u, block.v, block.d, block.converged
        report.update(block.to_dict())

    out = ensure_dir(config.output)
    write_matrix(os.path.join(out, "u_hat.csv"), u)
    write_matrix(os.path.join(out, "v_hat.csv"), v)
    write_matrix(os.path.join(out, "d_hat.csv"), d)
    write_json(os.path.join(out, "report.json"), report)
    if not converged:
        logger.warning("fit did not converge; wrote the best iterate")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_deflate(config: RunConfig) -> int:
    x = read_matrix(config.input)
    u = read_matrix(config.u_input)
    v = read_matrix(config.v_input)
    scheme = DeflationScheme(
        config.deflation, normalize=config.normalize  # type: ignore
    )
    state = DeflationState.start(x)
    if config.block:
        state = deflate_block(state, u, v, scheme)
    else:
        for j in range(u.shape[1]):
            state = deflate_vector(state, u[:, j], v[:, j], scheme)
    report = orthogonality_report(state)
    out = ensure_dir(config.output)
    write_matrix(os.path.join(out, "x_deflated.csv"), state.x_current)
    write_json(
        os.path.join(out, "orthogonality.json"),
        dict(report.to_dict(), schema_version=SCHEMA_VERSION),
    )
    print(report.table())
    return EXIT_OK


BENCH_COLUMNS = (
    "method",
    "statistic",
    "failed",
    "cpve_1",
    "cpve_2",
    "cpve_3",
    "rss_error_u",
    "rss_error_v",
    "tpr_u",
    "fpr_u",
    "tpr_v",
    "fpr_v",
    "suboptimality",
    "svd_calls",
    "retraction_calls",
    "descent_solves",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def cmd_bench(config: RunConfig) -> int:
    settings = BenchSettings(
        lambda_u=config.lambda_u,
        lambda_v=config.lambda_v,
        alpha_u=config.alpha_u,
        alpha_v=config.alpha_v,
        penalty_order=config.penalty_order,
        tune=config.tune,
        workers=config.workers,
        record_timings=config.record_timings,
        **({"max_outer": config.max_outer} if config.max_outer is not None else {})
    )
    result = run_benchmark(
        ScenarioSpec.default(config.scenario),
        config.methods,
        config.replicates,
        config.seed,
        settings,
        keep_factors=config.dump_factors,
    )
    out = ensure_dir(config.output)
    write_json(os.path.join(out, "bench.json"), result.to_dict())
    with open(os.path.join(out, "bench.csv"), "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        for entry in result.aggregate():
            writer.writerow([_cell(entry.get(name)) for name in BENCH_COLUMNS])
    if config.dump_factors:
        dump = ensure_dir(os.path.join(out, "factors"))
        for method, index in sorted(result.factors):
            fit = result.factors[(method, index)]
            stem = "{0}_{1}.csv".format(method, index)
            write_matrix(os.path.join(dump, "u_hat_" + stem), fit.u)
            write_matrix(os.path.join(dump, "v_hat_" + stem), fit.v)
    return EXIT_OK


def _method_list(parser: argparse.ArgumentParser, text: str):
    tokens = tuple(t.strip() for t in text.split(",") if t.strip())
    unknown = [t for t in tokens if t not in BENCH_METHODS]
    if unknown or not tokens:
        parser.error(
            "unknown method token(s) {0}; valid tokens are: {1}".format(
                ", ".join(unknown) or "(none given)", ", ".join(BENCH_METHODS)
            )
        )
    return tokens


def _penalty_args(p: argparse.ArgumentParser, lam: float, alpha: float) -> None:
    p.add_argument("--lambda-u", type=float, default=lam)
    p.add_argument("--lambda-v", type=float, default=lam)
    p.add_argument("--alpha-u", type=float, default=alpha)
    p.add_argument("--alpha-v", type=float, default=alpha)
    p.add_argument("--penalty-order", type=int, choices=(2, 4), default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfpca", description="Sparse and Functional PCA toolkit."
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log solver progress to stderr"
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("simulate", help="generate a simulation scenario")
    p.add_argument("--scenario", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--overlap-shift", type=int, default=None)
    p.add_argument("-o", "--output", default=".")

    p = sub.add_parser("fit", help="fit SFPCA components to a CSV matrix")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", default=".")
    p.add_argument("--method", choices=METHODS, default="rank1")
    p.add_argument(
        "--deflation",
        choices=("hotelling", "projection", "schur", "none"),
        default="none",
    )
    p.add_argument("--rank", type=int, default=1)
    _penalty_args(p, 0.0, 0.0)
    p.add_argument("--tune", action="store_true", help="BIC-tune every component")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--max-outer", type=int, default=None)
    p.add_argument("--order-weight-epsilon", type=float, default=0.0)

    p = sub.add_parser("deflate", help="deflate a matrix by given factor blocks")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--u-input", required=True)
    p.add_argument("--v-input", required=True)
    p.add_argument(
        "--scheme", choices=("hotelling", "projection", "schur"), required=True
    )
    p.add_argument(
        "--sequential",
        action="store_true",
        help="deflate one column pair at a time instead of the block form",
    )
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("-o", "--output", default=".")

    p = sub.add_parser("bench", help="run the simulation benchmark")
    p.add_argument("--scenario", type=int, choices=(1, 2), default=1)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="hd,pd,sd,madmm")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--record-timings", action="store_true")
    p.add_argument("--dump-factors", action="store_true")
    p.add_argument("--tune", action="store_true")
    p.add_argument("--max-outer", type=int, default=None)
    _penalty_args(p, 1.0, 3.0)
    p.add_argument("-o", "--output", default=".")
    return parser


def config_from_args(
    parser: argparse.ArgumentParser, args: argparse.Namespace
) -> RunConfig:
    common = dict(command=args.command, output=args.output)
    if args.command == "simulate":
        return RunConfig(
            scenario=args.scenario,
            seed=args.seed,
            overlap_shift=args.overlap_shift,
            **common
        )
    if args.command == "deflate":
        return RunConfig(
            input=args.input,
            u_input=args.u_input,
            v_input=args.v_input,
            deflation=args.scheme,
            block=not args.sequential,
            normalize=not args.no_normalize,
            **common
        )
    penalties = dict(
        lambda_u=args.lambda_u,
        lambda_v=args.lambda_v,
        alpha_u=args.alpha_u,
        alpha_v=args.alpha_v,
        penalty_order=args.penalty_order,
        tune=args.tune,
        seed=args.seed,
        max_outer=args.max_outer,
    )
    if args.command == "fit":
        return RunConfig(
            input=args.input,
            method=args.method,
            deflation=args.deflation,
            rank=args.rank,
            rho=args.rho,
            order_weight_epsilon=args.order_weight_epsilon,
            **common,
            **penalties
        )
    return RunConfig(
        scenario=args.scenario,
        replicates=args.replicates,
        methods=_method_list(parser, args.methods),
        workers=args.workers,
        record_timings=args.record_timings,
        dump_factors=args.dump_factors,
        **common,
        **penalties
    )


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "deflate": cmd_deflate,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        config = config_from_args(parser, args)
        return COMMANDS[config.command](config)
    except SystemExit as e:
        return int(e.code or 0)
    except NumericError as e:
        logger.error("numerical failure: %s", e)
        return EXIT_NUMERIC
    except (SFPCAError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
