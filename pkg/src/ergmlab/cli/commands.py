"""Built-in subcommands of the ergmlab command line."""

import argparse
import logging
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ..clt import edge_clt_experiment, histogram, lln_check, rate_scan, subgraph_clt_experiment
from ..curie_weiss import cw_family, cw_rate_scan
from ..decomp import centering_check, residual_variance_scan
from ..errors import ConfigError
from ..graphs import Template, edge_total, run_identity_suite
from ..model import hom_vector, solve_fixed_point
from ..oracle import build, exact_W_law
from ..sampling import Purpose, cftp_draws, sample_replicates, stream
from ..stein import ergm_family, estimate_all
from ..utils.config import get_config
from .registry import BaseCommand, CommandRegistry, CommandResult, RunConfig, int_list

logger = logging.getLogger(__name__)

# Violations listed in full in the identities report
MAX_LISTED_VIOLATIONS = 50


def _add_spec(parser: argparse.ArgumentParser, with_n: bool = True) -> None:
    parser.add_argument("--spec", required=True, help="Model file (JSON)")
    if with_n:
        parser.add_argument("--n", type=int, help="Vertex count (defaults to the file's 'n')")


def _add_chain_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--burn", type=int, help="Burn-in sweeps (default ceil(n^2 log n) updates)")
    parser.add_argument("--thin", type=int, default=1, help="Sweeps between retained graphs")
    parser.add_argument("--chains", type=int, default=1, help="Independent chains")


class SolveCommand(BaseCommand):
    """Fixed point, classification and sigma_n^2."""

    @property
    def name(self) -> str:
        return "solve"

    @property
    def description(self) -> str:
        return "Solve phi(a) = a and report roots, classification and sigma_n^2"

    def add_arguments(self, parser):
        _add_spec(parser)
        parser.add_argument("--tol", type=float, help="Root tolerance")

    def execute(self, run: RunConfig) -> CommandResult:
        spec = run.load_spec()
        report = solve_fixed_point(spec, run.tol)
        n = run.n if run.n is not None else spec.n
        return CommandResult(report.to_dict(n))


class ClassifyCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "classify"

    @property
    def description(self) -> str:
        return "Print the region classification and the Dobrushin check"

    def add_arguments(self, parser):
        _add_spec(parser, with_n=False)

    def execute(self, run: RunConfig) -> CommandResult:
        report = solve_fixed_point(run.load_spec())
        return CommandResult({
            "classification": report.classification.value,
            "dobrushin_value": report.dobrushin_value,
            "dobrushin": report.dobrushin,
            "p": report.p,
        })


class SampleCommand(BaseCommand):
    """Glauber chains or coupling from the past, CSV of per-sample statistics."""

    stochastic = True

    @property
    def name(self) -> str:
        return "sample"

    @property
    def description(self) -> str:
        return "Draw graphs with Glauber dynamics or coupling from the past"

    def add_arguments(self, parser):
        _add_spec(parser)
        _add_chain_options(parser)
        parser.add_argument("--count", type=int, default=1000, help="Graphs per chain")
        parser.add_argument("--sampler", choices=["glauber", "cftp"], default="glauber")
        parser.add_argument("--homs", action="store_true", help="Add per-template hom counts")
        parser.add_argument("--out", help="CSV of sample_id, edge_count[, hom_j]")
        parser.add_argument("--graphs", help="Write each graph as '<n> <hex>' on its own line")

    def execute(self, run: RunConfig) -> CommandResult:
        spec = run.load_spec()
        n = spec.resolve_n(run.n)
        args = run.args
        if args.sampler == "cftp":
            graphs = cftp_draws(spec, n, args.count, run.seed)
            runs_meta: List[Dict[str, Any]] = [{"sampler": "cftp", "count": args.count}]
        else:
            runs = sample_replicates(spec, n, run.burn, run.thin, args.count, args.chains, run.seed)
            graphs = [g for r in runs for g in r.graphs]
            runs_meta = [r.metadata for r in runs]

        rows = []
        for k, graph in enumerate(graphs):
            row: Dict[str, Any] = {"sample_id": k, "edge_count": graph.edge_count}
            if args.homs:
                for j, count in enumerate(hom_vector(spec, graph), start=1):
                    row[f"hom_{j}"] = int(count)
            rows.append(row)

        edges = np.array([r["edge_count"] for r in rows], dtype=float)
        result = CommandResult({
            "n": n,
            "betas": list(spec.betas),
            "samples": len(graphs),
            "mean_edges": float(edges.mean()) if len(edges) else None,
            "mean_density": float(edges.mean() / edge_total(n)) if len(edges) else None,
            "runs": runs_meta,
        })
        if run.out_path:
            result.tables[run.out_path] = rows
        if args.graphs:
            result.text_outputs[Path(args.graphs)] = "".join(f"{n} {g.to_hex()}\n" for g in graphs)
        return result


class ExactCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "exact"

    @property
    def description(self) -> str:
        return "Enumerate every graph for n <= 6: Z, mu_n, edge-count law and d_K of W"

    def add_arguments(self, parser):
        _add_spec(parser)

    def execute(self, run: RunConfig) -> CommandResult:
        spec = run.load_spec()
        n = spec.resolve_n(run.n)
        measure = build(spec, n)
        region = solve_fixed_point(spec)
        body = measure.to_dict()
        try:
            body["Z"] = math.exp(measure.log_Z)
        except OverflowError:
            body["Z"] = None
        body["log_Z_pairwise"] = measure.log_partition_pairwise()
        body["classification"] = region.classification.value
        body["dK"] = body["dW"] = body["sigma_sq"] = None
        if region.is_subcritical:
            sigma_sq = region.sigma_sq(n)
            law = exact_W_law(measure, sigma_sq)
            body.update(sigma_sq=sigma_sq, dK=law.kolmogorov(), dW=law.wasserstein())
        return CommandResult(body)


class SteinCommand(BaseCommand):
    stochastic = True

    @property
    def name(self) -> str:
        return "stein"

    @property
    def description(self) -> str:
        return "Monte-Carlo estimates of b, delta_2 and delta_3 for the ERGM edge statistic"

    def add_arguments(self, parser):
        _add_spec(parser)
        parser.add_argument("--outer", type=int, default=20_000, help="Tilted draws")
        parser.add_argument("--inner", type=int, help="Resampled copies per coordinate")
        parser.add_argument("--pilot", type=int, default=2000, help="Pilot draws for mu_n when n > 6")
        parser.add_argument("--diagnostics", action="store_true",
                            help="Add the importance-weighted delta_1 diagnostic")

    def execute(self, run: RunConfig) -> CommandResult:
        spec = run.load_spec()
        n = spec.resolve_n(run.n)
        family = ergm_family(spec, n, pilot_draws=run.args.pilot, seed=run.seed)
        rng = stream(run.seed, Purpose.STEIN, n)
        estimates = estimate_all(family, run.outer, run.inner, rng, diagnostics=run.args.diagnostics)
        body = estimates.to_dict()
        body["family"] = family.metadata
        return CommandResult(body)


class CurieWeissCommand(BaseCommand):
    stochastic = True

    @property
    def name(self) -> str:
        return "cw"

    @property
    def description(self) -> str:
        return "Exact Curie-Weiss distances, variance ratio and optional Stein estimates"

    def add_arguments(self, parser):
        parser.add_argument("--N", type=int_list, required=True, help="Particle count(s), e.g. 64,128")
        parser.add_argument("--beta", type=float, required=True, help="Inverse temperature in (0, 1)")
        parser.add_argument("--stein", action="store_true", help="Estimate b, delta_2, delta_3 at the first N")
        parser.add_argument("--outer", type=int, default=20_000)
        parser.add_argument("--inner", type=int)

    def uses_seed(self, run: RunConfig) -> bool:
        return bool(run.args.stein)

    def execute(self, run: RunConfig) -> CommandResult:
        body = cw_rate_scan(run.args.N, run.args.beta)
        if run.args.stein:
            N = run.args.N[0]
            rng = stream(run.seed, Purpose.CURIE_WEISS, N)
            estimates = estimate_all(cw_family(N, run.args.beta), run.outer, run.inner, rng)
            body["stein"] = estimates.to_dict()
            body["stein"]["expected_b"] = 1.0 - run.args.beta
        return CommandResult(body)


class DecompCommand(BaseCommand):
    stochastic = True

    @property
    def name(self) -> str:
        return "decomp"

    @property
    def description(self) -> str:
        return "Residual-variance scan of a subgraph count, or an exact Hoeffding centering check"

    def add_arguments(self, parser):
        _add_spec(parser, with_n=False)
        _add_chain_options(parser)
        parser.add_argument("--template", default="triangle", help="Named template")
        parser.add_argument("--ns", type=int_list, help="Sizes, e.g. 20,40,80")
        parser.add_argument("--samples", type=int, default=5000)
        parser.add_argument("--exact-n", type=int, help="Check E g_I = 0 by enumeration at this n")
        parser.add_argument("--max-order", type=int, default=3)
        parser.add_argument("--multiplicity", choices=["amended", "original"])

    def uses_seed(self, run: RunConfig) -> bool:
        return run.args.exact_n is None

    def execute(self, run: RunConfig) -> CommandResult:
        spec = run.load_spec()
        args = run.args
        if args.exact_n is not None:
            measure = build(spec, args.exact_n)
            edges = list(range(min(4, measure.size)))
            body = centering_check(measure, edges, args.max_order, args.multiplicity)
            body["n"] = args.exact_n
            return CommandResult(body)
        ns = run.ns or ([spec.n] if spec.n else [])
        template = Template.from_name(args.template)
        body = residual_variance_scan(spec, template, ns, run.samples, run.seed,
                                      run.burn, run.thin, args.chains)
        return CommandResult(body)


class CltCommand(BaseCommand):
    """Edge and subgraph CLT experiments, rate scans and the LLN table."""

    stochastic = True

    @property
    def name(self) -> str:
        return "clt"

    @property
    def description(self) -> str:
        return "Empirical Kolmogorov and Wasserstein distances of the standardized edge count"

    def add_arguments(self, parser):
        _add_spec(parser, with_n=False)
        _add_chain_options(parser)
        parser.add_argument("--ns", type=int_list, help="Sizes, e.g. 20,40,80")
        parser.add_argument("--samples", type=int, default=10_000)
        parser.add_argument("--mode", choices=["edge", "rate", "lln"], default="edge")
        parser.add_argument("--template", help="Named template for the subgraph statistic W_H")
        parser.add_argument("--out", help="CSV with one row per n")
        parser.add_argument("--emit-hist", help="CSV histogram of W against N(0, 1)")
        parser.add_argument("--bins", type=int, default=30)

    def execute(self, run: RunConfig) -> CommandResult:
        spec = run.load_spec()
        args = run.args
        ns = run.ns or [spec.resolve_n(None)]
        if args.mode == "rate":
            return CommandResult(rate_scan(spec, ns, run.samples, run.seed, run.burn, run.thin, args.chains))
        if args.mode == "lln":
            return CommandResult(lln_check(spec, ns, run.samples, run.seed, run.burn, run.thin, args.chains))

        region = solve_fixed_point(spec)
        template = Template.from_name(args.template) if args.template else None
        reports, rows, hist = [], [], []
        for n in ns:
            if template is None:
                report = edge_clt_experiment(spec, n, run.samples, run.seed,
                                             run.burn, run.thin, args.chains, region)
            else:
                report = subgraph_clt_experiment(spec, template, n, run.samples, run.seed,
                                                 run.burn, run.thin, args.chains, region)
            reports.append(report.to_dict())
            rows.append(report.csv_row())
            if args.emit_hist:
                hist.extend({"n": n, **row} for row in histogram(report.values, args.bins))
        result = CommandResult({"betas": list(spec.betas), "p": region.p, "reports": reports})
        if run.out_path:
            result.tables[run.out_path] = rows
        if args.emit_hist:
            result.tables[Path(args.emit_hist)] = hist
        return result


class IdentitiesCommand(BaseCommand):
    stochastic = True

    @property
    def name(self) -> str:
        return "identities"

    @property
    def description(self) -> str:
        return "Check the counting identities on random graphs; nonzero exit on any violation"

    def add_arguments(self, parser):
        parser.add_argument("--n", type=int, default=12)
        parser.add_argument("--trials", type=int, default=1000)
        parser.add_argument("--max-v", type=int, default=4, help="Largest random template")

    def execute(self, run: RunConfig) -> CommandResult:
        args = run.args
        cap = get_config().template_max_v
        if not 2 <= args.max_v <= cap:
            raise ConfigError(f"--max-v must lie in 2..{cap}, got {args.max_v}")
        rng = stream(run.seed, Purpose.IDENTITIES, args.n)
        violations = run_identity_suite(args.n, args.trials, rng, args.max_v)
        body = {
            "n": args.n,
            "trials": args.trials,
            "violation_count": len(violations),
            "violations": violations[:MAX_LISTED_VIOLATIONS],
        }
        return CommandResult(body, exit_code=1 if violations else 0)


def initialize_builtin_commands(registry: CommandRegistry) -> None:
    """Register every built-in subcommand."""
    commands = [
        SolveCommand(),
        ClassifyCommand(),
        SampleCommand(),
        ExactCommand(),
        SteinCommand(),
        CurieWeissCommand(),
        DecompCommand(),
        CltCommand(),
        IdentitiesCommand(),
    ]
    for command in commands:
        try:
            registry.register(command)
        except ValueError as e:
            logger.warning(f"Failed to register command: {e}")
    logger.debug(f"Initialized {len(commands)} built-in commands")
