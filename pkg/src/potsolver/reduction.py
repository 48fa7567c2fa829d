"""Scaffold reduction: the simplification rules, greedy R_tot and oracle-checked R_corr.

The reduction state always keeps its network composed with its scaffold, so
every rule reads P∘f directly.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional, Tuple

import numpy as np
import structlog

from .algebra import FULL, GT, LT
from .consistency import tighten_rows
from .network import Instance, Network
from .orders import PairedOrder, compose_with
from .structure import find_chains, unopposed_chain_links

logger = structlog.get_logger()

Oracle = Callable[[Instance], bool]

_KEEP_BEFORE = int(FULL) & ~int(GT)


@dataclass
class ReductionStats:
    rule2_fires: int = 0
    rule3_fires: int = 0
    rule4_fires: int = 0
    greedy_steps: int = 0


@dataclass
class ReductionState:
    """Scaffold and scaffold-composed network threaded through the rules."""

    scaffold: PairedOrder
    net: Network
    stats: ReductionStats = field(default_factory=ReductionStats)

    @classmethod
    def start(cls, p: PairedOrder, f: Network, stats: Optional[ReductionStats] = None) -> "ReductionState":
        return cls(p, compose_with(p, f), stats if stats is not None else ReductionStats())

    def split(self, first: int, second: int) -> None:
        """Extend the scaffold with ``first`` before ``second`` and recompose."""
        self.scaffold = self.scaffold.extend(first, second)
        self.net.refine(first, second, _KEEP_BEFORE)

    def split_remaining(self) -> int:
        """Split every pair slot smaller variable first, without simplifying.

        Returns:
            Number of pairs split
        """
        pairs = [slot for _, slot in self.scaffold.pair_slots()]
        for x, y in pairs:
            self.net.refine(x, y, _KEEP_BEFORE)
        self.scaffold = self.scaffold.linearize()
        return len(pairs)


def _apply_free_orientations(state: ReductionState) -> bool:
    fired = False
    for _, (x, y) in state.scaffold.pair_slots():
        mask = state.net.mask(x, y)
        if not mask & GT:
            state.split(x, y)
        elif not mask & LT:
            state.split(y, x)
        else:
            continue
        state.stats.rule2_fires += 1
        fired = True
    return fired


def _apply_local_consistency(state: ReductionState, k: int) -> bool:
    n = state.net.n
    size = min(k, n)
    if size < 2:
        return False
    rows = state.net.rows()
    fired = False
    for subset in combinations(range(n), size):
        if tighten_rows(rows, subset):
            state.stats.rule4_fires += 1
            fired = True
            # an unsatisfiable subset empties all of its masks
            if rows[subset[0]][subset[1]] == 0:
                break
    if fired:
        state.net = Network(np.array(rows, dtype=np.uint8))
    return fired


def _apply_unopposed_links(state: ReductionState) -> bool:
    chains = find_chains(state.scaffold, state.net)
    if not chains:
        return False
    links = unopposed_chain_links(state.scaffold, state.net, chains)
    fired = False
    for link in sorted(links):
        broken = False
        for a, b in link.pairs:
            if state.scaffold.mate(a) == b:
                state.split(b, a)
                broken = True
        if broken:
            state.stats.rule3_fires += 1
            fired = True
    return fired


def simplify(state: ReductionState, k: int = 4) -> ReductionState:
    """Run rule 2, rule 4 and rule 3 (in that priority) until none applies.

    Stops as soon as some mask is empty; the state is updated in place and
    returned.
    """
    while not state.net.has_empty():
        if _apply_free_orientations(state):
            continue
        if _apply_local_consistency(state, k):
            continue
        if _apply_unopposed_links(state):
            continue
        break
    return state


def r_tot(
    p: PairedOrder, f: Network, *, k: int = 4, stats: Optional[ReductionStats] = None
) -> Tuple[PairedOrder, Network]:
    """Reduce ``p`` to a total order, orienting undecided pairs greedily.

    Returns:
        The total order and the network composed with it.  A total ``p`` is
        returned with ``f`` unchanged.  Once some mask is empty the remaining
        pairs are split greedily without further simplification.
    """
    if p.is_total:
        return p, f.copy()
    state = ReductionState.start(p, f, stats)
    while True:
        simplify(state, k)
        if state.net.has_empty():
            state.stats.greedy_steps += state.split_remaining()
            return state.scaffold, state.net
        pair = state.scaffold.first_pair()
        if pair is None:
            return state.scaffold, state.net
        x, y = pair
        state.split(x, y)
        state.stats.greedy_steps += 1


def _oracle_accepts(state: ReductionState, first: int, second: int, oracle: Oracle) -> bool:
    candidate = state.net.copy()
    candidate.refine(first, second, _KEEP_BEFORE)
    if candidate.has_empty():
        return False
    return oracle(candidate.to_instance())


def _corrected_steps(p: PairedOrder, f: Network, oracle: Oracle, k: int):
    """Drive R_corr, yielding ``(state, accepted_greedy)`` before each split."""
    state = ReductionState.start(p, f)
    while True:
        simplify(state, k)
        pair = state.scaffold.first_pair()
        if pair is None:
            yield state, None
            return
        x, y = pair
        greedy_ok = _oracle_accepts(state, x, y, oracle)
        yield state, greedy_ok
        if greedy_ok:
            state.split(x, y)
        elif _oracle_accepts(state, y, x, oracle):
            state.split(y, x)
        else:
            return
        state.stats.greedy_steps += 1


def r_corr(p: PairedOrder, f: Network, oracle: Oracle, *, k: int = 4) -> Tuple[PairedOrder, Network]:
    """Like ``r_tot`` but only splits a pair when ``oracle`` keeps the
    restricted instance satisfiable; stops when neither orientation does."""
    if p.is_total:
        return p, f.copy()
    state = None
    for state, _ in _corrected_steps(p, f, oracle, k):
        pass
    assert state is not None
    return state.scaffold, state.net


def is_reducible(p: PairedOrder, f: Network, oracle: Oracle, *, k: int = 4) -> bool:
    """True iff R_tot and R_corr agree on ``(p, f)``."""
    t_tot, f_tot = r_tot(p, f, k=k)
    t_corr, f_corr = r_corr(p, f, oracle, k=k)
    return t_tot == t_corr and f_tot == f_corr


def divergence_state(p: PairedOrder, f: Network, oracle: Oracle, *, k: int = 4) -> Optional[ReductionState]:
    """State at which R_corr first rejects the greedy orientation, if ever."""
    if p.is_total:
        return None
    for state, greedy_ok in _corrected_steps(p, f, oracle, k):
        if greedy_ok is False:
            logger.debug("reduction_diverged", scaffold=str(state.scaffold))
            return ReductionState(state.scaffold, state.net.copy(), state.stats)
    return None
