"""Benchmark harness: generate instances, run solvers, collect a CSV table."""

from dataclasses import dataclass
from typing import List, Sequence

import pandas as pd
import structlog

from .errors import InputError, SolveTimeout
from .instancegen import GenMode, GenSpec, generate
from .solver import Algorithm, solve

logger = structlog.get_logger()

CSV_COLUMNS = ["algo", "n", "seed", "instance", "verdict", "leaves", "millis", "timeout"]


def parse_size_range(text: str) -> range:
    """Parse ``A..B`` (inclusive) or a single size ``A``.

    Raises:
        InputError: malformed text, non-positive bounds or an empty range
    """
    lo_text, sep, hi_text = text.partition("..")
    try:
        lo = int(lo_text)
        hi = int(hi_text) if sep else lo
    except ValueError:
        raise InputError(f"size range must look like A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise InputError(f"empty or invalid size range {text!r}")
    return range(lo, hi + 1)


@dataclass
class BenchPlan:
    """What to run.

    Attributes:
        algos: solver selectors, each run on every generated instance
        sizes: variable counts
        per_size: instances per size
        seed: base seed; instance ``idx`` of size ``n`` uses ``seed + 1000 * n + idx``
        timeout_ms: per (algo, instance) deadline
        density / mode / edge_probability: generator settings
        brute_max_n: size guard for the brute-force solver
    """

    algos: Sequence[str]
    sizes: range
    per_size: int = 5
    seed: int = 0
    timeout_ms: float = 60000
    density: float = 0.5
    mode: GenMode = GenMode.UNIFORM
    edge_probability: float = 0.3
    brute_max_n: int = 8
    k: int = 4

    def validate(self) -> None:
        if not self.algos:
            raise InputError("no algorithms selected")
        for algo in self.algos:
            try:
                Algorithm(algo)
            except ValueError:
                raise InputError(f"unknown algorithm {algo!r}") from None
        if len(self.sizes) == 0:
            raise InputError("empty size range")
        if self.per_size < 1:
            raise InputError(f"per_size must be positive, got {self.per_size}")
        if self.timeout_ms <= 0:
            raise InputError(f"timeout_ms must be positive, got {self.timeout_ms}")
        if "brute" in self.algos and self.sizes[-1] > self.brute_max_n:
            raise InputError(f"brute force is limited to n <= {self.brute_max_n}")


def instance_seed(base: int, n: int, idx: int) -> int:
    return base + 1000 * n + idx


def run_bench(plan: BenchPlan) -> pd.DataFrame:
    """Run every algorithm on every generated instance; one row per pair."""
    plan.validate()
    rows: List[dict] = []
    for n in plan.sizes:
        for idx in range(plan.per_size):
            seed = instance_seed(plan.seed, n, idx)
            spec = GenSpec(
                n=n,
                density=plan.density,
                seed=seed,
                mode=plan.mode,
                edge_probability=plan.edge_probability,
            )
            ins, _ = generate(spec)
            for algo in plan.algos:
                row = {"algo": algo, "n": n, "seed": seed, "instance": idx}
                try:
                    answer = solve(ins, algo, brute_limit=plan.brute_max_n, k=plan.k, timeout_ms=plan.timeout_ms)
                except SolveTimeout as exc:
                    stats = exc.stats
                    row.update(
                        verdict="",
                        leaves=stats.leaves if stats is not None else 0,
                        millis=round(plan.timeout_ms, 3),
                        timeout=1,
                    )
                else:
                    row.update(
                        verdict=answer.verdict.value,
                        leaves=answer.stats.leaves,
                        millis=round(answer.stats.millis, 3),
                        timeout=0,
                    )
                logger.info("bench_row", **row)
                rows.append(row)
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_csv(frame: pd.DataFrame, path: str) -> None:
    frame.to_csv(path, index=False, columns=CSV_COLUMNS)


def leaf_ratio_table(frame: pd.DataFrame) -> pd.DataFrame:
    """Mean leaves and millis per size and algorithm over finished rows.

    When both ``total`` and ``ptop`` ran, ``leaf_ratio`` is total/ptop.
    """
    finished = frame[frame["timeout"] == 0]
    if finished.empty:
        return pd.DataFrame(index=pd.Index([], name="n"))
    table = finished.pivot_table(index="n", columns="algo", values=["leaves", "millis"], aggfunc="mean")
    table.columns = [f"{value}_{algo}" for value, algo in table.columns]
    if "leaves_total" in table.columns and "leaves_ptop" in table.columns:
        table["leaf_ratio"] = table["leaves_total"] / table["leaves_ptop"]
    return table
