"""Command line entry point: ``vlmc sample|estimate|analyze|experiment``.

Exit codes: 0 success, 2 precondition violation, 3 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .core_tree import load_model
from .empirical import build_counts
from .errors import InvalidInput, PreconditionViolation, VLMCError
from .estimator import EstimationParams, estimate, trees_equal_truncated
from .experiments import ExperimentConfig, run_recovery_experiment
from .model_analysis import bound_report
from .sampler import MIN_BURN_IN, SamplePath, sample_path

EXIT_OK, EXIT_PRECONDITION, EXIT_INVALID = 0, 2, 3


def _cmd_sample(args) -> int:
    model = load_model(args.model)
    path = sample_path(model, args.n, args.seed, args.burn_in)
    path.write(args.out)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    truth = load_model(args.truth) if args.truth else None
    alphabet = truth.alphabet if truth is not None else None
    sample = SamplePath.read(args.sample, alphabet)
    if len(sample) <= args.depth:
        raise PreconditionViolation(f"need depth < n, got {args.depth} >= {len(sample)}")
    trie = build_counts(sample, args.depth)
    result = estimate(trie, EstimationParams(args.delta, args.depth, args.K or 1))
    out = result.to_dict()
    out["match_at_K"] = None
    if truth is not None and args.K:
        out["match_at_K"] = trees_equal_truncated(result.tree, truth, args.K)
    if args.dump_counts:
        for line in trie.to_csv_lines():
            print(line)
    print(json.dumps(out))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    model = load_model(args.model)
    report = bound_report(model, k_max=args.kmax, K=args.K, n=args.n,
                          delta=args.delta, d=args.depth)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = ExperimentConfig.load(args.config)
    curve = run_recovery_experiment(config, workers=args.workers)
    out = args.out or config.out
    if out:
        curve.write_csv(out)
    else:
        sys.stdout.write(curve.to_csv())
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vlmc", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="simulate a sample path")
    s.add_argument("--model", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--burn-in", type=int, default=MIN_BURN_IN)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_sample)

    e = sub.add_parser("estimate", help="estimate a context tree from a sample file")
    e.add_argument("--sample", required=True)
    e.add_argument("--delta", type=float, required=True)
    e.add_argument("--depth", type=int, required=True)
    e.add_argument("--K", type=int)
    e.add_argument("--truth")
    e.add_argument("--dump-counts", action="store_true")
    e.set_defaults(func=_cmd_estimate)

    a = sub.add_parser("analyze", help="theoretical quantities of a model as JSON")
    a.add_argument("--model", required=True)
    a.add_argument("--kmax", type=int, default=20)
    a.add_argument("--K", type=int, default=1)
    a.add_argument("--n", type=int)
    a.add_argument("--delta", type=float)
    a.add_argument("--depth", type=int)
    a.set_defaults(func=_cmd_analyze)

    x = sub.add_parser("experiment", help="Monte Carlo recovery experiment")
    x.add_argument("--config", required=True)
    x.add_argument("--out")
    x.add_argument("--workers", type=int, default=1)
    x.set_defaults(func=_cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionViolation as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InvalidInput, VLMCError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
