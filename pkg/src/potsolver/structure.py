"""Links and chains of a scaffold-composed network.

Role convention: inside a link every pair is oriented ``(a, b)``.  A chain
with head ``x`` and tail ``y`` attaches ``x`` to the a-side of its first pair,
bridges the b-side of the last pair of each link to the a-side of the first
pair of the next link, and reaches ``y`` from the b-side of its last pair.
A link is broken when all its pairs are ordered ``b`` before ``a``.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .algebra import EQ, GT, INC, LT
from .network import Network
from .orders import PairedOrder

OrientedPair = Tuple[int, int]

_NO_EQ = 0b1011
_AMBIGUOUS = int(LT | GT)
_SOFT = int(LT | INC)


@dataclass(frozen=True, order=True)
class Link:
    """Oriented pairs ``(a_i, b_i)`` from distinct pair slots, ascending by slot."""

    pairs: Tuple[OrientedPair, ...]

    @property
    def a_side(self) -> Tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def b_side(self) -> Tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    def reversed(self) -> "Link":
        return Link(tuple((b, a) for a, b in self.pairs))

    def __str__(self) -> str:
        return " ".join(f"({a},{b})" for a, b in self.pairs)


@dataclass(frozen=True, order=True)
class Chain:
    """Head/tail pair forced incomparable plus the links that connect them."""

    head: int
    tail: int
    links: Tuple[Link, ...]

    @property
    def length(self) -> int:
        return len(self.links)

    @property
    def pairs(self) -> FrozenSet[OrientedPair]:
        return frozenset(pair for link in self.links for pair in link.pairs)

    def __str__(self) -> str:
        inner = ", ".join("[" + str(link) + "]" for link in self.links)
        return f"head={self.head} tail={self.tail} links=[{inner}]"


class _View:
    """Mask lookups over a nested-list snapshot of the composed network."""

    def __init__(self, p: PairedOrder, g: Network):
        self.position = p.position
        self.rows = g.rows()

    def core(self, u: int, v: int) -> int:
        return self.rows[u][v] & _NO_EQ

    def strict(self, u: int, v: int) -> bool:
        return self.core(u, v) == LT

    def soft(self, u: int, v: int) -> bool:
        return self.core(u, v) == _SOFT

    def below(self, u: int, v: int) -> bool:
        """``u == v`` or mask(u, v) ⊆ {<, =}."""
        return u == v or (self.rows[u][v] & ~int(LT | EQ) & 0xF) == 0

    def slot(self, pair: OrientedPair) -> int:
        return self.position[pair[0]]

    def link_compatible(self, p: OrientedPair, q: OrientedPair) -> bool:
        """Link conditions between pairs with slot(p) < slot(q)."""
        (ap, bp), (aq, bq) = p, q
        return (
            self.strict(ap, aq)
            and self.strict(bp, bq)
            and bool(self.rows[ap][bq] & INC)
            and bool(self.rows[aq][bp] & INC)
        )


def _oriented_pairs(p: PairedOrder, view: _View) -> List[OrientedPair]:
    pairs: List[OrientedPair] = []
    for _, (x, y) in p.pair_slots():
        if view.core(x, y) == _AMBIGUOUS:
            pairs.extend([(x, y), (y, x)])
    return pairs


def find_links(p: PairedOrder, g: Network) -> Set[Link]:
    """All maximal links of ``g`` in both orientations."""
    view = _View(p, g)
    cands = _oriented_pairs(p, view)
    found: Set[Link] = set()

    def grow(link: List[OrientedPair], start: int) -> Iterator[Tuple[OrientedPair, ...]]:
        yield tuple(link)
        for idx in range(start, len(cands)):
            q = cands[idx]
            if view.slot(q) > view.slot(link[-1]) and all(view.link_compatible(p_, q) for p_ in link):
                link.append(q)
                yield from grow(link, idx + 1)
                link.pop()

    for idx, first in enumerate(cands):
        for pairs in grow([first], idx + 1):
            if _is_maximal(pairs, cands, view):
                found.add(Link(pairs))
    return found


def _is_maximal(pairs: Sequence[OrientedPair], cands: Sequence[OrientedPair], view: _View) -> bool:
    used = {view.slot(pair) for pair in pairs}
    for q in cands:
        sq = view.slot(q)
        if sq in used:
            continue
        before = [pair for pair in pairs if view.slot(pair) < sq]
        after = [pair for pair in pairs if view.slot(pair) > sq]
        if all(view.link_compatible(pair, q) for pair in before) and all(
            view.link_compatible(q, pair) for pair in after
        ):
            return False
    return True


def _heads_and_tails(p: PairedOrder, view: _View) -> List[Tuple[int, int]]:
    n = p.n
    return [
        (x, y)
        for x in range(n)
        for y in range(n)
        if x != y and p.position[x] < p.position[y] and view.core(x, y) == INC
    ]


def _chains_between(head: int, tail: int, cands: Sequence[OrientedPair], view: _View) -> List[Chain]:
    found: List[Chain] = []
    ends = (head, tail)

    def cross_ok(q: OrientedPair, links: Iterable[Sequence[OrientedPair]]) -> bool:
        return all(view.soft(a, q[0]) and view.soft(b, q[1]) for link in links for a, b in link)

    def walk(closed: List[Tuple[OrientedPair, ...]], current: List[OrientedPair]) -> None:
        last = current[-1]
        b_last = last[1]
        if view.below(b_last, tail):
            found.append(Chain(head, tail, tuple(Link(l) for l in closed + [tuple(current)])))
        if b_last == tail:
            return
        for q in cands:
            a, b = q
            if view.slot(q) <= view.slot(last) or a in ends or b == head:
                continue
            if all(view.link_compatible(pair, q) for pair in current) and cross_ok(q, closed):
                current.append(q)
                walk(closed, current)
                current.pop()
            if view.strict(b_last, a):
                cross_links = closed + [tuple(current)]
                if cross_ok(q, cross_links):
                    walk(cross_links, [q])

    for q in cands:
        a, b = q
        if b == head or a == tail:
            continue
        if a == head or view.below(head, a):
            walk([], [q])
    return found


def _maximal_chains(chains: Iterable[Chain]) -> Set[Chain]:
    grouped: Dict[Tuple[int, int], Set[Chain]] = defaultdict(set)
    for chain in chains:
        grouped[(chain.head, chain.tail)].add(chain)
    kept: Set[Chain] = set()
    for group in grouped.values():
        for chain in group:
            if not any(chain.pairs < other.pairs for other in group):
                kept.add(chain)
    return kept


def find_chains(p: PairedOrder, g: Network) -> Set[Chain]:
    """All chains of ``g``, keeping per head/tail only pair-maximal ones."""
    view = _View(p, g)
    cands = _oriented_pairs(p, view)
    if not cands:
        return set()
    chains: List[Chain] = []
    for head, tail in _heads_and_tails(p, view):
        chains.extend(_chains_between(head, tail, cands, view))
    return _maximal_chains(chains)


def is_broken(c: Chain, g: Network) -> bool:
    """True iff some link of ``c`` has every pair fixed to ``b`` before ``a``."""
    return any(all(g.mask(a, b) == GT for a, b in link.pairs) for link in c.links)


def chain_links(p: PairedOrder, g: Network, chains: Optional[Set[Chain]] = None) -> Set[Link]:
    """Links that are constituents of some chain."""
    if chains is None:
        chains = find_chains(p, g)
    return {link for chain in chains for link in chain.links}


def unopposed_chain_links(p: PairedOrder, g: Network, chains: Optional[Set[Chain]] = None) -> Set[Link]:
    """Chain links none of whose pairs occurs reversed in another chain link."""
    links = chain_links(p, g, chains)
    oriented = {pair for link in links for pair in link.pairs}
    return {link for link in links if not any((b, a) in oriented for a, b in link.pairs)}


def render_diagnostics(p: PairedOrder, g: Network) -> List[str]:
    """``L:`` line per maximal link and ``C:`` line per chain, sorted."""
    lines = [f"L: {link}" for link in sorted(find_links(p, g))]
    lines.extend(f"C: {chain}" for chain in sorted(find_chains(p, g)))
    return lines
