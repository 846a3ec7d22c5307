"""Command-line front end.

    lllhnf hnf FILE [--alpha P/Q] [--check LEVEL] [--report PATH] [--print-transform]
    lllhnf verify FILE [--check LEVEL] [--report PATH]
    lllhnf gen KIND --m M --n N [--bound B] [--rank R] [--seed S] [-o PATH]
    lllhnf gen canonical -o DIR
    lllhnf bench (--corpus DIR | --canonical) --report PATH [--full-max-m M] [--workers W]

Matrices go to stdout, logs to stderr. Exit status: 0 success, 1 a hard
violation or engine failure, 2 bad input or flags.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from fractions import Fraction
from typing import Sequence

from .constants import (
    BENCH_DEFAULT_WORKERS,
    DEFAULT_ALPHA,
    EXIT_BAD_INPUT,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    FULL_CHECK_MAX_ROWS,
)
from .corpus import GenKind, GenSpec, canonical_corpus, generate, load_corpus, write_corpus
from .engine import CheckLevel, EngineConfig, parse_alpha
from .errors import HnfError, InvalidConfigError, MalformedMatrixError
from .instance import ProblemInstance
from .matrix_file import format_matrix, read_matrix_file, write_matrix_file
from .pipeline import RunOutcome, run_pipeline
from .report import bench_report, run_report, write_report
from .workers import BenchWorker

log = logging.getLogger(__name__)


def _alpha_arg(text: str) -> Fraction:
    try:
        return parse_alpha(text)
    except InvalidConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="lllhnf",
        description="LLL-based Hermite normal form with live coefficient-growth checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    levels = [lvl.value for lvl in CheckLevel]

    p = sub.add_parser("hnf", parents=[common], help="compute the Hermite normal form of a matrix file")
    p.add_argument("file")
    p.add_argument("--alpha", type=_alpha_arg, default=DEFAULT_ALPHA, help="Lovász parameter P/Q, 1/4 < P/Q <= 1")
    p.add_argument("--check", choices=levels, default=CheckLevel.CHECKPOINTS.value)
    p.add_argument("--report", help="write the JSON run report here")
    p.add_argument("--print-transform", action="store_true", help="also print the unimodular b with b·G = A")

    p = sub.add_parser("verify", parents=[common], help="run every check on a matrix file")
    p.add_argument("file")
    p.add_argument("--alpha", type=_alpha_arg, default=DEFAULT_ALPHA)
    p.add_argument(
        "--check",
        choices=levels,
        default=None,
        help=f"default: full for at most {FULL_CHECK_MAX_ROWS} rows, checkpoints otherwise",
    )
    p.add_argument("--report")

    p = sub.add_parser("gen", parents=[common], help="generate a test matrix or the canonical corpus")
    p.add_argument("kind", choices=[k.value for k in GenKind] + ["canonical"])
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--bound", type=int, default=30)
    p.add_argument("--rank", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="file (or directory for canonical); stdout when omitted")

    p = sub.add_parser("bench", parents=[common], help="run a corpus and write the aggregate report")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--corpus", help="directory of matrix files")
    source.add_argument("--canonical", action="store_true", help="the checked-in corpus under corpus/canonical")
    p.add_argument("--report", required=True)
    p.add_argument("--alpha", type=_alpha_arg, default=DEFAULT_ALPHA)
    p.add_argument("--check", choices=levels, default=CheckLevel.CHECKPOINTS.value)
    p.add_argument("--full-max-m", type=int, default=0, help=f"run inputs with m <= M at full level (M <= {FULL_CHECK_MAX_ROWS})")
    p.add_argument("--workers", type=int, default=BENCH_DEFAULT_WORKERS)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _load(path: str) -> ProblemInstance:
    return ProblemInstance(read_matrix_file(path), name=path)


def _summarise(outcome: RunOutcome) -> int:
    hard = outcome.hard_violations
    if hard:
        for item in hard:
            log.error("%s", item)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def _cmd_hnf(args: argparse.Namespace) -> int:
    instance = _load(args.file)
    config = EngineConfig(alpha=args.alpha, check_level=CheckLevel(args.check))
    outcome = run_pipeline(instance, config)
    if outcome.result is not None:
        out = format_matrix(outcome.result.A)
        if args.print_transform:
            out += "# transform\n" + format_matrix(outcome.result.b)
        sys.stdout.write(out)
    if args.report:
        write_report(args.report, run_report(outcome))
    return _summarise(outcome)


def _cmd_verify(args: argparse.Namespace) -> int:
    instance = _load(args.file)
    if args.check is None:
        level = CheckLevel.FULL if instance.m <= FULL_CHECK_MAX_ROWS else CheckLevel.CHECKPOINTS
    else:
        level = CheckLevel(args.check)
    outcome = run_pipeline(instance, EngineConfig(alpha=args.alpha, check_level=level))
    if args.report:
        write_report(args.report, run_report(outcome))
    status = _summarise(outcome)
    print(
        f"{args.file}: {'ok' if status == EXIT_OK else 'FAILED'} "
        f"({len(outcome.hard_violations)} hard, {outcome.soft_violations} soft)"
    )
    return status


def _cmd_gen(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.kind == "canonical":
        if not args.output:
            parser.error("gen canonical needs -o DIR")
        write_corpus(args.output, canonical_corpus())
        return EXIT_OK
    n = args.n if args.n is not None else (1 if args.kind == GenKind.GCD_VECTOR.value else None)
    if args.m is None or n is None:
        parser.error(f"gen {args.kind} needs --m and --n")
    spec = GenSpec(GenKind(args.kind), args.m, n, args.bound, target_rank=args.rank, seed=args.seed)
    matrix = generate(spec)
    comments = [f"kind={spec.kind.value} bound={spec.entry_bound} seed={spec.seed}"]
    if args.output:
        write_matrix_file(args.output, matrix, comments)
    else:
        sys.stdout.write(format_matrix(matrix, comments))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.canonical:
        entries = [(e.name, e.matrix) for e in canonical_corpus()]
    else:
        entries = load_corpus(args.corpus)
        if not entries:
            log.error("no *.txt matrices in %s", args.corpus)
            return EXIT_BAD_INPUT
    config = EngineConfig(alpha=args.alpha, check_level=CheckLevel(args.check))
    done = 0

    def progress(name: str, outcome: RunOutcome) -> None:
        nonlocal done
        done += 1
        log.debug("[%d/%d] %s %s", done, len(entries), name, "ok" if outcome.ok else "FAILED")

    started = time.perf_counter()
    outcomes = BenchWorker(entries, config, args.workers, args.full_max_m, progress).run()
    elapsed = time.perf_counter() - started
    doc = bench_report(outcomes, elapsed)
    write_report(args.report, doc)
    failed = doc["failed_runs"]
    print(
        f"{doc['runs']} runs in {elapsed:.1f}s: {len(failed)} failed, "
        f"{doc['soft_violations']} soft violations, max empirical_c {doc['empirical_c']['max']}"
    )
    return EXIT_VERIFICATION_FAILED if failed else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args)
    try:
        if args.command == "hnf":
            return _cmd_hnf(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "gen":
            return _cmd_gen(args, parser)
        return _cmd_bench(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (MalformedMatrixError, InvalidConfigError) as exc:
        log.error("%s", exc)
        return EXIT_BAD_INPUT
    except OSError as exc:
        log.error("cannot read or write %s: %s", exc.filename or "file", exc.strerror or exc)
        return EXIT_BAD_INPUT
    except HnfError as exc:
        log.error("%s", exc)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
