"""Command line entry point: ``sbm-mf {generate,fit,experiment,eval,theory}``.

Exit codes: 0 success, 1 validation error, 2 runtime error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..exceptions import DomainError, InputError, ParseError, RegimeError, SBMError
from ..initializers import corrupt_truth, spectral_init
from ..loss import l1_loss, misclustered_count
from ..model import BlockParams, HardAssignment, PriorConfig, balanced_sizes, harden, sample_assignment, sample_sbm
from ..theory import rate_report
from ..variational import default_iterations
from .config import ALGORITHMS, load_config, validate
from .io import read_edgelist, read_labels, write_edgelist, write_labels
from .runner import run_algorithm, run_experiment

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2
VALIDATION_ERRORS = (InputError, ParseError, DomainError, RegimeError)


def _sizes_arg(text):
    if text is None or text == "balanced":
        return "balanced"
    return [int(s) for s in text.split(",")]


def _add_common(p):
    p.add_argument("--seed", type=int, help="base seed (unsigned 64-bit)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--quiet", action="store_true", help="only log warnings")


def build_parser():
    parser = argparse.ArgumentParser(prog="sbm-mf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a truth assignment and an SBM graph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--q", type=float, required=True)
    g.add_argument("--sizes", help="comma-separated community sizes (default: balanced)")
    _add_common(g)

    f = sub.add_parser("fit", help="fit one algorithm to an edge-list file")
    f.add_argument("graph", help="edge-list file")
    f.add_argument("--algorithm", choices=ALGORITHMS, default="bcavi-digamma")
    f.add_argument("--iterations", type=int)
    f.add_argument("--init", choices=("spectral", "corrupt", "file"), default="spectral")
    f.add_argument("--init-file", help="labels file for --init file")
    f.add_argument("--fraction", type=float, default=0.1, help="corruption fraction for --init corrupt")
    f.add_argument("--truth", help="labels file used for per-iteration loss")
    f.add_argument("--timings", action="store_true", help="include wall-clock seconds in the trace")
    _add_common(f)

    e = sub.add_parser("experiment", help="run a replicated experiment from a config file")
    e.add_argument("--config", required=True)
    e.add_argument("--threads", type=int, help="worker processes (default: $SBM_MF_THREADS or CPU count)")
    e.add_argument("--algorithm", choices=ALGORITHMS)
    e.add_argument("--iterations", type=int)
    _add_common(e)

    v = sub.add_parser("eval", help="loss between two label files")
    v.add_argument("labels")
    v.add_argument("truth")
    v.add_argument("--k", type=int)

    t = sub.add_parser("theory", help="print rate diagnostics as JSON")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--p", type=float, required=True)
    t.add_argument("--q", type=float, required=True)
    t.add_argument("--sizes", help="comma-separated community sizes (default: balanced)")
    t.add_argument("--w", type=float, default=1.0, help="prior odds ratio (1 for a uniform prior)")
    return parser


def cmd_generate(args):
    sizes = _sizes_arg(args.sizes)
    sizes = balanced_sizes(args.n, args.k) if sizes == "balanced" else sizes
    seed = args.seed or 0
    truth_ss, graph_ss = np.random.SeedSequence(seed).spawn(2)
    truth = sample_assignment(args.n, args.k, sizes, truth_ss)
    A = sample_sbm(BlockParams(args.p, args.q, args.k), truth, graph_ss)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_edgelist(out / "graph.edgelist", A, args.k)
    write_labels(out / "truth.labels", truth)
    logging.info("wrote %s (%d edges) and truth labels to %s", A, A.n_edges, out)


def cmd_fit(args):
    A, k = read_edgelist(args.graph)
    truth = read_labels(args.truth, k) if args.truth else None
    seed = args.seed or 0
    init_ss, algo_ss = np.random.SeedSequence(seed).spawn(2)
    if args.init == "spectral":
        init = spectral_init(A, k, init_ss)
    elif args.init == "corrupt":
        if truth is None:
            raise InputError("--init corrupt needs --truth")
        init = corrupt_truth(truth, args.fraction, init_ss)
    else:
        if not args.init_file:
            raise InputError("--init file needs --init-file")
        init = read_labels(args.init_file, k)
    iterations = args.iterations or default_iterations(A.n)
    final, trace = run_algorithm(args.algorithm, A, k, PriorConfig.uniform(A.n, k), init, iterations, algo_ss, truth)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_labels(out / "fit.labels", harden(final))
    (out / "trace.jsonl").write_text(trace.to_jsonl(include_timing=args.timings))
    if truth is not None:
        logging.info("misclustered: %d", misclustered_count(harden(final), truth))


def cmd_experiment(args):
    cfg = load_config(args.config)
    cfg = validate(cfg.override(seed=args.seed, out=args.out, algorithm=args.algorithm,
                                iterations=args.iterations))
    summary = run_experiment(cfg, threads=args.threads)
    print(json.dumps(summary.aggregates, indent=2))
    if summary.aggregates["errors"] == summary.aggregates["replications"]:
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_eval(args):
    truth = read_labels(args.truth, args.k)
    labels = read_labels(args.labels, args.k)
    k = max(truth.k, labels.k)
    truth, labels = HardAssignment(truth.labels, k), HardAssignment(labels.labels, k)
    loss, phi = l1_loss(labels, truth)
    print(json.dumps({"misclustered": misclustered_count(labels, truth), "l1_loss": loss,
                      "relabeling": phi.tolist()}))


def cmd_theory(args):
    sizes = _sizes_arg(args.sizes)
    sizes = balanced_sizes(args.n, args.k) if sizes == "balanced" else sizes
    if len(sizes) != args.k or sum(sizes) != args.n:
        raise InputError("--sizes must have k entries summing to n")
    s = sorted(sizes)
    report = rate_report(args.n, args.k, args.p, args.q, (s[0] + s[1]) / 2.0, args.w,
                         rho=min(sizes) * args.k / args.n)
    print(json.dumps(report.to_dict(), indent=2))


COMMANDS = {
    "generate": cmd_generate,
    "fit": cmd_fit,
    "experiment": cmd_experiment,
    "eval": cmd_eval,
    "theory": cmd_theory,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SBMError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
