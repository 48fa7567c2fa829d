"""Triple propagation, the polynomial total-order solver and subset local consistency."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .algebra import ATOMS, COMPOSE_TABLE, CONVERSE_TABLE, EQ, FULL, INC, POPCOUNT_TABLE, converse
from .errors import InputError
from .network import Model, Network, extract_model, rows_realizable
from .orders import PairedOrder, compose_with

logger = structlog.get_logger()


@dataclass
class PropagationReport:
    """Outcome of ``propagate_triples``.

    Attributes:
        changed: some mask shrank
        empty_pair_found: some mask became empty
        rounds: number of propagation generations run
    """

    changed: bool = False
    empty_pair_found: bool = False
    rounds: int = 0


@dataclass
class ConsistencyCounters:
    """Diagnostic counters of the total-order solver."""

    verification_failures: int = 0


def propagate_triples(f: Network) -> Tuple[Network, PropagationReport]:
    """Path consistency: refine x?z by compose(x?y, y?z) until a fixpoint.

    Work is organised in generations of dirty pairs.  Each pair (i, j) of a
    generation tightens row i against row j and column j against column i in
    one vectorised step; every pair that shrank joins the next generation.
    Stops early on the first empty mask.
    """
    g = f.copy()
    m = g.masks
    n = g.n
    report = PropagationReport()
    if g.has_empty():
        report.empty_pair_found = True
        return g, report
    pending = [(i, j) for i in range(n) for j in range(i + 1, n)]
    while pending:
        report.rounds += 1
        dirty = set()
        for i, j in pending:
            rel = m[i, j]
            if rel == FULL:
                continue
            # i?k  <=  i?j ∘ j?k
            row = m[i] & COMPOSE_TABLE[rel][m[j]]
            changed_k = np.flatnonzero(row != m[i])
            if changed_k.size:
                m[i, changed_k] = row[changed_k]
                m[changed_k, i] = CONVERSE_TABLE[row[changed_k]]
                dirty.update((min(i, k), max(i, k)) for k in changed_k.tolist())
            # k?j  <=  k?i ∘ i?j
            rel = m[i, j]
            col = m[:, j] & COMPOSE_TABLE[m[:, i], rel]
            changed_k = np.flatnonzero(col != m[:, j])
            if changed_k.size:
                m[changed_k, j] = col[changed_k]
                m[j, changed_k] = CONVERSE_TABLE[col[changed_k]]
                dirty.update((min(k, j), max(k, j)) for k in changed_k.tolist())
            if not row.all() or not col.all():
                report.changed = True
                report.empty_pair_found = True
                return g, report
        if dirty:
            report.changed = True
        pending = sorted(dirty)
    report.empty_pair_found = g.has_empty()
    return g, report


def solve_under_total_order(
    t: PairedOrder, f: Network, counters: Optional[ConsistencyCounters] = None
) -> Optional[Model]:
    """Decide T∘f for a total order ``t`` in polynomial time.

    Returns:
        A model of T∘f, or None when T∘f is unsatisfiable.

    Raises:
        InputError: ``t`` is not total or does not match ``f``
    """
    if not t.is_total:
        raise InputError("solve_under_total_order needs a total order")
    g, report = propagate_triples(compose_with(t, f))
    if report.empty_pair_found:
        return None
    masks = g.masks
    # drop '=' from every mask that still has an alternative
    ambiguous = POPCOUNT_TABLE[masks] > 1
    masks[ambiguous] &= np.uint8(~int(EQ) & 0xF)
    g, report = propagate_triples(g)
    if report.empty_pair_found:
        return None
    masks = g.masks
    masks[(masks & int(INC)) != 0] = int(INC)
    if g.has_empty():
        return None
    if not rows_realizable(g.rows()):
        if counters is not None:
            counters.verification_failures += 1
        logger.warning("total_order_unrealizable", order=list(t.order()))
        return None
    return extract_model(g)


@lru_cache(maxsize=None)
def realizable_assignments(k: int) -> np.ndarray:
    """Realizable atomic assignments to the pairs of a k-variable subset.

    Rows are ordered like ``combinations(range(k), 2)``.
    """
    pairs = list(combinations(range(k), 2))
    survivors: List[Tuple[int, ...]] = []
    for combo in product([int(a) for a in ATOMS], repeat=len(pairs)):
        rows = [[int(EQ)] * k for _ in range(k)]
        for (u, v), atom in zip(pairs, combo):
            rows[u][v] = atom
            rows[v][u] = int(converse(atom))
        if rows_realizable(rows):
            survivors.append(combo)
    return np.array(survivors, dtype=np.uint8).reshape(len(survivors), len(pairs))


@lru_cache(maxsize=1 << 18)
def _tighten(k: int, masks: Tuple[int, ...]) -> Tuple[int, ...]:
    cands = realizable_assignments(k)
    fits = ((cands & np.asarray(masks, dtype=np.uint8)) != 0).all(axis=1)
    if not fits.any():
        return (0,) * len(masks)
    return tuple(int(x) for x in np.bitwise_or.reduce(cands[fits], axis=0))


def tighten_rows(rows: List[List[int]], subset: Sequence[int]) -> bool:
    """Local consistency on ``subset`` applied in place to a nested-list table.

    Returns:
        True when some mask inside the subset shrank
    """
    pairs = list(combinations(subset, 2))
    before = tuple(rows[u][v] for u, v in pairs)
    after = _tighten(len(subset), before)
    if after == before:
        return False
    for (u, v), mask in zip(pairs, after):
        rows[u][v] = mask
        rows[v][u] = int(CONVERSE_TABLE[mask])
    return True


def local_consistency(f: Network, s: Sequence[int], k_max: int = 4) -> Network:
    """Replace every mask inside ``s`` by the union of the consistent atomic
    networks on ``s`` that refine ``f``; masks leaving ``s`` are untouched.

    Raises:
        InputError: ``s`` is larger than ``k_max`` or names unknown variables
    """
    subset = sorted(set(s))
    if len(subset) > k_max:
        raise InputError(f"subset of {len(subset)} variables exceeds k_max={k_max}")
    if subset and not (0 <= subset[0] and subset[-1] < f.n):
        raise InputError(f"subset {subset} has variables outside 0..{f.n - 1}")
    if len(subset) < 2:
        return f.copy()
    rows = f.rows()
    tighten_rows(rows, subset)
    return Network.from_rows(rows)
