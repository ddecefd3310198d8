"""Command-line interface: ``gencomm verify | search | repro | eval``."""

import argparse
import re
import sys

import numpy as np

from . import reports
from .bounds import BOUND_IDS, NotApplicableError, Tolerance
from .io import MalformedInputError, read_instance

DEFAULT_SEED = 20240607


def parse_shapes(text):
    """``"2x2,1x3"`` -> ``[(2, 2), (1, 3)]``."""
    shapes = []
    for part in text.split(","):
        mt = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", part)
        if not mt or int(mt.group(1)) < 1 or int(mt.group(2)) < 1:
            raise argparse.ArgumentTypeError(f"invalid shape {part!r}, expected MxN")
        shapes.append((int(mt.group(1)), int(mt.group(2))))
    return shapes


def parse_seed(text):
    if text == "entropy":
        return int(np.random.SeedSequence().entropy % (1 << 64))
    try:
        seed = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer or 'entropy', got {text!r}") from None
    if not 0 <= seed < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return seed


def _nonneg_int(text):
    val = int(text)
    if val < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return val


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("structured", "tabular"), default="structured")
    common.add_argument("--tol", type=float, default=1e-10, help="absolute and relative tolerance for 'holds'")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--shapes", type=parse_shapes, default=[(2, 2)], help="comma-separated MxN list")
    sampling.add_argument("--trials", type=_nonneg_int, default=1000)
    sampling.add_argument("--seed", type=parse_seed, default=DEFAULT_SEED, help="u64 seed or 'entropy'")
    sampling.add_argument("--dist", default="complex_gaussian",
                          help="complex_gaussian | real_gaussian | unit_sphere | low_rank(r)")

    parser = argparse.ArgumentParser(prog="gencomm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common, sampling], help="check every bound on random triples")
    p = sub.add_parser("search", parents=[common, sampling], help="hill-climb one bound's ratio")
    p.add_argument("--bound", required=True, choices=BOUND_IDS)
    p.add_argument("--steps", type=_nonneg_int, default=1000)
    p.add_argument("--step-size", type=float, default=0.5)
    sub.add_parser("repro", parents=[common], help="reproduce the exact counterexamples")
    p = sub.add_parser("eval", parents=[common], help="evaluate one instance file")
    p.add_argument("instance", help="JSON file with matrix blocks A, B, C")
    return parser


def run(args):
    tol = Tolerance(args.tol, args.tol)
    if args.command == "verify":
        return reports.cmd_verify(args.shapes, args.trials, args.seed, tol, args.dist)
    if args.command == "search":
        return reports.cmd_search(args.bound, args.shapes, args.trials, args.steps, args.seed,
                                  args.dist, args.step_size)
    if args.command == "repro":
        return reports.cmd_repro()
    return reports.cmd_eval(read_instance(args.instance), tol)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = run(args)
    except (MalformedInputError, NotApplicableError, ValueError, OSError) as exc:
        print(f"gencomm {args.command}: error: {exc}", file=sys.stderr)
        return reports.EXIT_MALFORMED

    text = reports.dumps(report) if args.format == "structured" else reports.dumps_tabular(report)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"gencomm: cannot write {args.out}: {exc}", file=sys.stderr)
            return reports.EXIT_MALFORMED
    else:
        sys.stdout.write(text)
    if report["discovery"]:
        print("gencomm: DISCOVERY - a conjectured bound was violated; see report", file=sys.stderr)
    if status and report["command"] == "repro":
        for e in report["entries"]:
            if not e["match"]:
                print(f"gencomm repro: {e['name']} mismatch: lhs {e['lhs']!r} vs {e['expected_lhs']!r}, "
                      f"rhs {e['rhs']!r} vs {e['expected_rhs']!r}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
