"""Command-line entry point: ``potsolver solve|gen|verify|bench``.

Exit codes: ``solve`` returns 10 (satisfiable) or 20 (unsatisfiable),
``verify`` returns 0 (model satisfies the instance) or 20, ``gen`` and
``bench`` return 0; every error returns 1.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import structlog

from .bench import BenchPlan, leaf_ratio_table, parse_size_range, run_bench, write_csv
from .config import Config
from .errors import InputError, PotError
from .formats import format_instance, format_model, parse_instance, parse_model
from .instancegen import GenMode, GenSpec, generate
from .network import from_instance, verify_model
from .orders import compose_with, ptop_at
from .solver import solve
from .structure import render_diagnostics
from .utils import setup_logging

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_YES = 10
EXIT_NO = 20


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports flag errors as ``InputError``."""

    def error(self, message: str):  # type: ignore[override]
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="potsolver", description="Exact solvers for partially ordered time networks")
    parser.add_argument("--config", default=None, help="YAML config file (default: $POTSOLVER_CONFIG or config.yaml)")
    parser.add_argument("--log-level", default=None, help="override logging.level from the config")
    commands = parser.add_subparsers(dest="command", required=True)

    p_solve = commands.add_parser("solve", help="decide an instance file")
    p_solve.add_argument("--algo", choices=["ptop", "total", "brute"], default=None)
    p_solve.add_argument("--input", required=True, help="instance file")
    p_solve.add_argument("--model-out", default=None, help="write the model file here instead of stdout")
    p_solve.add_argument("--stats", action="store_true", help="print key=value statistics")
    p_solve.add_argument("--threads", type=int, default=None)
    p_solve.add_argument("--explain", action="store_true", help="print links and chains of the first scaffold")
    p_solve.add_argument("--strict-determinism", action="store_true", default=None)

    p_gen = commands.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--density", type=float, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--mode", choices=["planted", "uniform"], default=None)
    p_gen.add_argument("-o", "--output", required=True, help="instance file to write")

    p_verify = commands.add_parser("verify", help="check a model file against an instance file")
    p_verify.add_argument("--input", required=True)
    p_verify.add_argument("--model", required=True)

    p_bench = commands.add_parser("bench", help="run solvers over generated instances")
    p_bench.add_argument("--algos", default="ptop,total", help="comma separated list")
    p_bench.add_argument("--sizes", required=True, help="A..B inclusive")
    p_bench.add_argument("--per-size", type=int, default=None)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--csv", required=True)
    p_bench.add_argument("--timeout-ms", type=float, default=None)
    p_bench.add_argument("--density", type=float, default=None)
    p_bench.add_argument("--mode", choices=["planted", "uniform"], default=None)
    return parser


def cmd_solve(args: argparse.Namespace, config: Config) -> int:
    ins = parse_instance(Path(args.input).read_bytes())
    if args.explain:
        scaffold = ptop_at(ins.n, 0)
        for line in render_diagnostics(scaffold, compose_with(scaffold, from_instance(ins))):
            print(line)
    answer = solve(
        ins,
        args.algo or config.algo,
        config.threads if args.threads is None else args.threads,
        strict_determinism=bool(args.strict_determinism) or config.strict_determinism,
        brute_limit=config.brute_max_n,
        k=config.local_consistency_k,
    )
    text = format_model(answer.model)
    if args.model_out:
        Path(args.model_out).write_text(text, encoding="utf-8")
        print(f"s {answer.verdict.value}")
    else:
        print(text, end="")
    if args.stats:
        for line in answer.stats.as_lines():
            print(line)
    return EXIT_YES if answer.is_yes else EXIT_NO


def cmd_gen(args: argparse.Namespace, config: Config) -> int:
    spec = GenSpec(
        n=args.n,
        density=config.density if args.density is None else args.density,
        seed=args.seed,
        mode=GenMode(args.mode or config.gen_mode),
        edge_probability=config.edge_probability,
    )
    ins, model = generate(spec)
    comment = f"potsolver gen mode={spec.mode.value} n={spec.n} density={spec.density} seed={spec.seed}"
    out = Path(args.output)
    out.write_text(format_instance(ins, comment), encoding="utf-8")
    if model is not None:
        Path(f"{out}.model").write_text(format_model(model), encoding="utf-8")
    logger.info("instance_written", path=str(out), n=ins.n, m=len(ins.constraints))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    ins = parse_instance(Path(args.input).read_bytes())
    model = parse_model(Path(args.model).read_bytes())
    if model is None:
        raise InputError("model file says 's no'; there is no model to verify")
    return EXIT_OK if verify_model(ins, model) else EXIT_NO


def cmd_bench(args: argparse.Namespace, config: Config) -> int:
    plan = BenchPlan(
        algos=[a.strip() for a in args.algos.split(",") if a.strip()],
        sizes=parse_size_range(args.sizes),
        per_size=config.per_size if args.per_size is None else args.per_size,
        seed=args.seed,
        timeout_ms=config.timeout_ms if args.timeout_ms is None else args.timeout_ms,
        density=config.density if args.density is None else args.density,
        mode=GenMode(args.mode or config.gen_mode),
        edge_probability=config.edge_probability,
        brute_max_n=config.brute_max_n,
        k=config.local_consistency_k,
    )
    frame = run_bench(plan)
    write_csv(frame, args.csv)
    print(leaf_ratio_table(frame).to_string())
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the command and return its exit status."""
    command = "potsolver"
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        config = Config(args.config)
        setup_logging(level=args.log_level or config.log_level, log_file=config.log_file)
        return COMMANDS[command](args, config)
    except (PotError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        logger.error(f"{command}_failed", error=str(e))
        return EXIT_ERROR


def main() -> None:
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
