"""Top-level decision procedures: brute force, total orders and PTOPs."""

import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, fields
from enum import Enum
from itertools import product
from math import factorial
from typing import Callable, Iterator, List, Optional, Tuple

import structlog

from .algebra import ATOMS, EQ, converse
from .consistency import ConsistencyCounters, solve_under_total_order
from .errors import InputError, ResourceLimitError, SolveTimeout
from .network import Instance, Model, Network, extract_model, from_instance, rows_realizable, verify_model
from .orders import PairedOrder, enumerate_ptops, enumerate_total_orders, ptop_count
from .reduction import ReductionStats, r_tot
from .utils import deadline_after

logger = structlog.get_logger()

BRUTE_MAX_N = 8


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"


class Algorithm(str, Enum):
    PTOP = "ptop"
    TOTAL = "total"
    BRUTE = "brute"


@dataclass
class SolveStats:
    """Counters collected by a solver run.

    Attributes:
        leaves: scaffolds (or complete assignments, for brute force) tried
        greedy_steps: speculative pair orientations made by R_tot
        rule2_fires / rule3_fires / rule4_fires: simplification rule firings
        millis: wall time in milliseconds
        verification_failures: unrealizable results of the total-order solver
            plus models rejected by the independent verifier
    """

    leaves: int = 0
    greedy_steps: int = 0
    rule2_fires: int = 0
    rule3_fires: int = 0
    rule4_fires: int = 0
    millis: float = 0.0
    verification_failures: int = 0

    def absorb(self, other: "SolveStats") -> None:
        """Add the counters of ``other`` (wall time excluded)."""
        for f in fields(self):
            if f.name != "millis":
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def absorb_reduction(self, stats: ReductionStats) -> None:
        self.greedy_steps += stats.greedy_steps
        self.rule2_fires += stats.rule2_fires
        self.rule3_fires += stats.rule3_fires
        self.rule4_fires += stats.rule4_fires

    def as_lines(self) -> List[str]:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name}={value:.3f}" if isinstance(value, float) else f"{f.name}={value}")
        return lines


@dataclass
class Answer:
    verdict: Verdict
    model: Optional[Model] = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def is_yes(self) -> bool:
        return self.verdict is Verdict.YES


# Set in worker processes by the pool initializer; a set flag means some
# worker already found a model.
_STOP_FLAG = None


def _install_stop_flag(flag) -> None:
    global _STOP_FLAG
    _STOP_FLAG = flag


def _should_stop() -> bool:
    return _STOP_FLAG is not None and _STOP_FLAG.is_set()


def _check_deadline(deadline: Optional[float], stats: SolveStats) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise SolveTimeout("search deadline exceeded", stats)


def _accept(ins: Instance, model: Optional[Model], stats: SolveStats, algo: str) -> bool:
    if model is None:
        return False
    if verify_model(ins, model):
        return True
    stats.verification_failures += 1
    logger.error("model_rejected", algo=algo, n=ins.n)
    return False


def _realizable_triples() -> frozenset:
    """Atomic triples ``(x?y, y?z, x?z)`` realizable on three points."""
    ok = set()
    for r_xy, r_yz, r_xz in product([int(a) for a in ATOMS], repeat=3):
        rows = [
            [int(EQ), r_xy, r_xz],
            [int(converse(r_xy)), int(EQ), r_yz],
            [int(converse(r_xz)), int(converse(r_yz)), int(EQ)],
        ]
        if rows_realizable(rows):
            ok.add((r_xy, r_yz, r_xz))
    return frozenset(ok)


_TRIPLES = _realizable_triples()
_ATOM_VALUES = tuple(int(a) for a in ATOMS)
_CONVERSE = {a: int(converse(a)) for a in _ATOM_VALUES}


def solve_brute(ins: Instance, limit: int = BRUTE_MAX_N, deadline: Optional[float] = None) -> Answer:
    """Exhaustive depth-first assignment of atoms to pairs.

    Variables are added one at a time; when variable ``k`` receives its
    relation to ``i`` every triple ``(i, j, k)`` with ``j`` already related to
    ``k`` is checked for realizability.  Complete assignments are confirmed
    with the full realizability test.

    Raises:
        ResourceLimitError: ``ins.n`` exceeds ``limit``
    """
    if ins.n > limit:
        raise ResourceLimitError(f"brute force is limited to n <= {limit}, got n={ins.n}")
    started = time.monotonic()
    stats = SolveStats()
    allowed = from_instance(ins).rows()
    n = ins.n
    order = [(i, k) for k in range(1, n) for i in range(k)]
    assign = [[int(EQ) if i == j else 0 for j in range(n)] for i in range(n)]
    nodes = 0

    def consistent(i: int, k: int) -> bool:
        return all((assign[i][j], assign[j][k], assign[i][k]) in _TRIPLES for j in range(i))

    def search(idx: int) -> bool:
        nonlocal nodes
        if idx == len(order):
            stats.leaves += 1
            return rows_realizable(assign)
        i, k = order[idx]
        for atom in _ATOM_VALUES:
            if not atom & allowed[i][k]:
                continue
            nodes += 1
            if nodes & 0x3FF == 0:
                _check_deadline(deadline, stats)
            assign[i][k] = atom
            assign[k][i] = _CONVERSE[atom]
            if consistent(i, k) and search(idx + 1):
                return True
        assign[i][k] = assign[k][i] = 0
        return False

    found = search(0)
    model = extract_model(Network.from_rows(assign)) if found else None
    if found and not _accept(ins, model, stats, Algorithm.BRUTE.value):
        model = None
    stats.millis = (time.monotonic() - started) * 1000
    return Answer(Verdict.YES if model else Verdict.NO, model, stats)


def _scan(
    algo: Algorithm,
    ins: Instance,
    start: int,
    stop: Optional[int],
    k: int,
    deadline: Optional[float],
) -> Answer:
    """Try scaffolds of one rank range in order; first verified model wins."""
    started = time.monotonic()
    stats = SolveStats()
    counters = ConsistencyCounters()
    f = from_instance(ins)
    scaffolds: Iterator[PairedOrder]
    if algo is Algorithm.PTOP:
        scaffolds = enumerate_ptops(ins.n, start, stop)
    else:
        scaffolds = enumerate_total_orders(ins.n, start, stop)
    model: Optional[Model] = None
    try:
        for p in scaffolds:
            if _should_stop():
                break
            _check_deadline(deadline, stats)
            stats.leaves += 1
            if algo is Algorithm.PTOP:
                reduction = ReductionStats()
                t, g = r_tot(p, f, k=k, stats=reduction)
                stats.absorb_reduction(reduction)
            else:
                t, g = p, f
            if g.has_empty():
                continue
            candidate = solve_under_total_order(t, g, counters)
            if _accept(ins, candidate, stats, algo.value):
                model = candidate
                break
    finally:
        stats.verification_failures += counters.verification_failures
        stats.millis = (time.monotonic() - started) * 1000
    return Answer(Verdict.YES if model else Verdict.NO, model, stats)


def solve_total_orders(
    ins: Instance, *, start: int = 0, stop: Optional[int] = None, deadline: Optional[float] = None
) -> Answer:
    """Baseline: try all n! total orders with the polynomial sub-solver."""
    return _scan(Algorithm.TOTAL, ins, start, stop, 4, deadline)


def solve_ptop(
    ins: Instance,
    *,
    k: int = 4,
    start: int = 0,
    stop: Optional[int] = None,
    deadline: Optional[float] = None,
) -> Answer:
    """Try every PTOP: reduce it with R_tot, then solve under the total order."""
    return _scan(Algorithm.PTOP, ins, start, stop, k, deadline)


def brute_oracle(limit: int = BRUTE_MAX_N) -> Callable[[Instance], bool]:
    """Exact satisfiability oracle backed by ``solve_brute``."""

    def oracle(ins: Instance) -> bool:
        return solve_brute(ins, limit=limit).is_yes

    return oracle


def rank_space(algo: Algorithm, n: int) -> int:
    """Number of scaffolds ``algo`` enumerates for ``n`` variables."""
    return ptop_count(n) if algo is Algorithm.PTOP else factorial(n)


def partition_ranks(total: int, parts: int) -> List[Tuple[int, int]]:
    """Split ``0..total`` into at most ``parts`` contiguous non-empty ranges."""
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    ranges = []
    start = 0
    for idx in range(parts):
        stop = start + size + (1 if idx < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def _solve_parallel(algo: Algorithm, ins: Instance, threads: int, k: int, deadline: Optional[float]) -> Answer:
    ranges = partition_ranks(rank_space(algo, ins.n), threads)
    ctx = mp.get_context()
    stop_flag = ctx.Event()
    merged = SolveStats()
    winner: Optional[Answer] = None
    timeout: Optional[SolveTimeout] = None
    with ProcessPoolExecutor(
        max_workers=len(ranges), mp_context=ctx, initializer=_install_stop_flag, initargs=(stop_flag,)
    ) as pool:
        futures = [pool.submit(_scan, algo, ins, a, b, k, deadline) for a, b in ranges]
        for future in as_completed(futures):
            try:
                part = future.result()
            except SolveTimeout as exc:
                stop_flag.set()
                if exc.stats is not None:
                    merged.absorb(exc.stats)
                timeout = exc
                continue
            merged.absorb(part.stats)
            if part.is_yes and winner is None:
                winner = part
                stop_flag.set()
    if winner is not None:
        return Answer(Verdict.YES, winner.model, merged)
    if timeout is not None:
        raise SolveTimeout(str(timeout), merged)
    return Answer(Verdict.NO, None, merged)


def solve(
    ins: Instance,
    algo: str = "ptop",
    threads: int = 1,
    *,
    strict_determinism: bool = False,
    brute_limit: int = BRUTE_MAX_N,
    k: int = 4,
    timeout_ms: Optional[float] = None,
) -> Answer:
    """Dispatch to the selected algorithm.

    With ``threads > 1`` the PTOP or permutation rank space is split into
    contiguous ranges, one worker process each; the first verified model
    wins.  ``strict_determinism`` forces the sequential scan.

    Raises:
        InputError: unknown algorithm or non-positive thread count
        ResourceLimitError: brute force asked for more than ``brute_limit`` variables
        SolveTimeout: ``timeout_ms`` elapsed
    """
    try:
        selected = Algorithm(algo)
    except ValueError:
        raise InputError(f"unknown algorithm {algo!r}; choose one of ptop, total, brute") from None
    if threads < 1:
        raise InputError(f"threads must be positive, got {threads}")
    deadline = deadline_after(timeout_ms)
    started = time.monotonic()
    if selected is Algorithm.BRUTE:
        answer = solve_brute(ins, limit=brute_limit, deadline=deadline)
    elif threads == 1 or strict_determinism:
        answer = _scan(selected, ins, 0, None, k, deadline)
    else:
        answer = _solve_parallel(selected, ins, threads, k, deadline)
    answer.stats.millis = (time.monotonic() - started) * 1000
    logger.info(
        "solve_finished",
        algo=selected.value,
        n=ins.n,
        verdict=answer.verdict.value,
        leaves=answer.stats.leaves,
        millis=round(answer.stats.millis, 3),
    )
    return answer
