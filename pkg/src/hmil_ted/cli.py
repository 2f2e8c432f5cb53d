"""hmil-ted command line.

Exit codes: 0 ok, 1 validation failure, 2 bad input, 3 bad cost config,
4 resource limit.
"""

from __future__ import annotations

import argparse
import os
import sys
from decimal import Decimal
from typing import IO, Optional, Sequence

from . import validate as validation
from .costs import Cost, CostModel, format_cost, load_cost_config
from .corpus import distance_matrix, load_corpus, write_matrix_csv
from .engine import distance, explain
from .errors import HmilTedError, InputError, ResourceLimitError
from .rlt import DEFAULT_MAX_DEPTH, RltTree, dump_json, format_path, parse_json, to_rlt

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_RESOURCE = 4

DEPTH_ENV = "HMIL_TED_MAX_DEPTH"


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _max_depth(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(DEPTH_ENV)
    if env is None or not env.strip():
        return DEFAULT_MAX_DEPTH
    try:
        value = int(env)
    except ValueError:
        raise InputError(f"{DEPTH_ENV} must be an integer, got {env!r}") from None
    if value < 1:
        raise InputError(f"{DEPTH_ENV} must be at least 1")
    return value


def _model(path: Optional[str]) -> CostModel:
    return load_cost_config(path) if path else CostModel.unit()


def _read_tree(path: str, max_depth: int) -> RltTree:
    try:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return to_rlt(parse_json(data, max_depth), max_depth)
    except HmilTedError as exc:
        if isinstance(exc, ResourceLimitError):
            raise ResourceLimitError(f"{path}: {exc}") from None
        raise InputError(f"{path}: {exc}") from None


def _pair(args) -> tuple[RltTree, RltTree, CostModel, int]:
    depth = _max_depth(args.max_depth)
    model = _model(args.cost_config)
    if args.empty and args.file_b is not None:
        raise InputError("give either a second file or --empty, not both")
    if not args.empty and args.file_b is None:
        raise InputError("a second file (or --empty) is required")
    a = _read_tree(args.file_a, depth)
    b = RltTree(None) if args.empty else _read_tree(args.file_b, depth)
    return a, b, model, depth


def _number(cost: Cost) -> Decimal:
    # JSON number with exactly the digits the distance command prints
    return Decimal(format_cost(cost))


def cmd_distance(args, out: IO[str]) -> int:
    a, b, model, depth = _pair(args)
    out.write(format_cost(distance(a, b, model, max_depth=depth)) + "\n")
    return EXIT_OK


def cmd_explain(args, out: IO[str]) -> int:
    a, b, model, depth = _pair(args)
    mapping, script = explain(a, b, model, max_depth=depth)
    report = {"cost": _number(mapping.cost), "relabels": [], "deletes": [], "inserts": []}
    for op in script.ops:
        if op.kind == "relabel":
            report["relabels"].append({
                "path_a": format_path(op.path),
                "path_b": format_path(op.target_path),
                "from": op.old_label,
                "to": op.label,
                "cost": _number(op.cost),
            })
        else:
            report[op.kind + "s"].append({"path": format_path(op.path), "cost": _number(op.cost)})
    out.write(dump_json(report) + "\n")
    return EXIT_OK


def cmd_matrix(args, out: IO[str]) -> int:
    depth = _max_depth(args.max_depth)
    model = _model(args.cost_config)
    records = load_corpus(args.corpus, depth)
    matrix = distance_matrix([r.doc for r in records], model, parallelism=args.parallelism, max_depth=depth)
    ids = [r.id for r in records]
    if args.output and args.output != "-":
        try:
            with open(args.output, "w", newline="", encoding="utf-8") as fh:
                write_matrix_csv(ids, matrix, fh)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        write_matrix_csv(ids, matrix, out)
    return EXIT_OK


def cmd_validate(args, out: IO[str]) -> int:
    report = validation.run_validation(args.seed, args.iterations)
    out.write(report.summary() + "\n")
    if report.ok:
        return EXIT_OK
    for failure in report.failures:
        out.write(dump_json(failure.to_json()) + "\n")
    return EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmil-ted", description="Edit distance between JSON documents.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cost-config", metavar="PATH", help="JSON cost configuration")
        p.add_argument("--max-depth", type=_positive_int, metavar="N",
                       help=f"nesting limit (default ${DEPTH_ENV} or {DEFAULT_MAX_DEPTH})")

    for name, fn, text in (
        ("distance", cmd_distance, "print the distance between two documents"),
        ("explain", cmd_explain, "print a minimum-cost edit script as JSON"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("file_a", help="JSON document ('-' for stdin)")
        p.add_argument("file_b", nargs="?", help="JSON document")
        p.add_argument("--empty", action="store_true", help="compare against the empty tree")
        common(p)
        p.set_defaults(handler=fn)

    p = sub.add_parser("matrix", help="pairwise distances over an NDJSON corpus, as CSV")
    p.add_argument("corpus", help="NDJSON file, one document per line")
    p.add_argument("--output", metavar="PATH", help="CSV destination (default stdout)")
    p.add_argument("--parallelism", type=_positive_int, default=1, metavar="N")
    common(p)
    p.set_defaults(handler=cmd_matrix)

    p = sub.add_parser("validate", help="check the engine against brute force")
    p.add_argument("--seed", type=int, default=validation.DEFAULT_SEED)
    p.add_argument("--iterations", type=_positive_int, default=validation.DEFAULT_ITERATIONS)
    p.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[IO[str]] = None, err: Optional[IO[str]] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.handler(args, out)
    except HmilTedError as exc:
        err.write(f"hmil-ted: {exc}\n")
        return exc.exit_code
    except MemoryError:
        err.write("hmil-ted: out of memory\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
