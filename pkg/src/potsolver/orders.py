"""Paired orders (TOP / PTOP scaffolds), P∘f and scaffold enumeration."""

from dataclasses import dataclass, field
from itertools import combinations, islice, permutations
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import EQ, FULL, GT, INC, LT
from .errors import ContractViolation, InputError
from .network import Network, rows_realizable

Slot = Tuple[int, ...]


@dataclass(frozen=True)
class PairedOrder:
    """Totally ordered sequence of slots, each a variable pair or a singleton.

    Variables in earlier slots precede variables in later slots; the two
    members of a pair slot are incomparable.  Pair slots are stored with the
    smaller index first.

    Attributes:
        slots: the slots in order
        position: slot index of every variable (derived)
    """

    slots: Tuple[Slot, ...]
    position: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        slots = tuple(tuple(sorted(slot)) for slot in self.slots)
        n = sum(len(slot) for slot in slots)
        position = [-1] * n
        for idx, slot in enumerate(slots):
            if len(slot) not in (1, 2):
                raise InputError(f"slot {slot} must hold one or two variables")
            for v in slot:
                if not 0 <= v < n:
                    raise InputError(f"variable {v} out of range for {n} variables")
                if position[v] >= 0:
                    raise InputError(f"variable {v} occurs in more than one slot")
                position[v] = idx
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "position", tuple(position))

    @classmethod
    def total(cls, sequence: Sequence[int]) -> "PairedOrder":
        """Total order listing the variables in ``sequence`` order."""
        return cls(tuple((v,) for v in sequence))

    @property
    def n(self) -> int:
        return len(self.position)

    @property
    def is_total(self) -> bool:
        return all(len(slot) == 1 for slot in self.slots)

    @property
    def is_proper(self) -> bool:
        """PTOP check: all pair slots, plus a final singleton for odd n."""
        pairs = self.slots if self.n % 2 == 0 else self.slots[:-1]
        return all(len(slot) == 2 for slot in pairs) and len(self.slots) == (self.n + 1) // 2

    def order(self) -> Tuple[int, ...]:
        """Variables of a total order in sequence."""
        if not self.is_total:
            raise ContractViolation("order() needs a total order")
        return tuple(slot[0] for slot in self.slots)

    def mate(self, x: int) -> Optional[int]:
        """Pair partner of ``x`` or None when ``x`` sits in a singleton."""
        slot = self.slots[self.position[x]]
        if len(slot) == 1:
            return None
        return slot[1] if slot[0] == x else slot[0]

    def pair_slots(self) -> List[Tuple[int, Slot]]:
        """``(slot index, (x, y))`` for every remaining pair slot, ascending."""
        return [(idx, slot) for idx, slot in enumerate(self.slots) if len(slot) == 2]

    def first_pair(self) -> Optional[Slot]:
        for slot in self.slots:
            if len(slot) == 2:
                return slot
        return None

    def relation(self, u: int, v: int) -> int:
        """Atomic relation between ``u`` and ``v`` under the scaffold."""
        pu, pv = self.position[u], self.position[v]
        if u == v:
            return EQ
        if pu < pv:
            return LT
        if pu > pv:
            return GT
        return INC

    def relation_matrix(self) -> np.ndarray:
        pos = np.asarray(self.position)
        before = pos[:, None] < pos[None, :]
        rel = np.full((self.n, self.n), int(INC), dtype=np.uint8)
        rel[before] = int(LT)
        rel[before.T] = int(GT)
        np.fill_diagonal(rel, int(EQ))
        return rel

    def extend(self, x: int, y: int) -> "PairedOrder":
        """Split the pair slot ``{x, y}`` so that ``x`` comes right before ``y``.

        Raises:
            ContractViolation: ``x`` and ``y`` are not pair-mates
        """
        if x == y or self.mate(x) != y:
            raise ContractViolation(f"variables {x} and {y} are not pair-mates")
        idx = self.position[x]
        return PairedOrder(self.slots[:idx] + ((x,), (y,)) + self.slots[idx + 1:])

    def linearize(self) -> "PairedOrder":
        """Split every pair slot with its smaller variable first."""
        if self.is_total:
            return self
        return PairedOrder.total([v for slot in self.slots for v in slot])

    def is_stub_of(self, other: "PairedOrder") -> bool:
        """True iff every order decision of self also holds in ``other``."""
        if self.n != other.n:
            return False
        for u in range(self.n):
            for v in range(self.n):
                if self.position[u] < self.position[v] and not other.position[u] < other.position[v]:
                    return False
        return True

    def __str__(self) -> str:
        return " ".join("{" + ",".join(map(str, slot)) + "}" for slot in self.slots)


# Mask kept for (u, v) given the scaffold relation between u and v.
_RESTRICT = np.zeros(16, dtype=np.uint8)
_RESTRICT[int(LT)] = int(FULL) & ~int(GT)
_RESTRICT[int(GT)] = int(FULL) & ~int(LT)
_RESTRICT[int(EQ)] = int(EQ)
_RESTRICT[int(INC)] = int(FULL)


def compose_with_relation(f: Network, rel: np.ndarray) -> Network:
    """P∘f for an arbitrary atomic relation matrix ``rel`` of P.

    ``u < v`` drops ``>``, ``u = v`` keeps only ``=`` and ``u || v`` leaves the
    mask alone.
    """
    if rel.shape != f.masks.shape:
        raise InputError(f"relation matrix shape {rel.shape} does not match network size {f.n}")
    return Network(f.masks & _RESTRICT[rel])


def compose_with(p: PairedOrder, f: Network) -> Network:
    """Restrict ``f`` by the order decisions of scaffold ``p``.

    Args:
        p: Scaffold over the same variables
        f: Network to restrict

    Returns:
        A new network P∘f; ``f`` is left untouched

    Raises:
        InputError: sizes differ
    """
    if p.n != f.n:
        raise InputError(f"scaffold has {p.n} variables, network has {f.n}")
    return compose_with_relation(f, p.relation_matrix())


def ptop_count(n: int) -> int:
    """Number of PTOPs on ``n`` variables: n! / 2^floor(n/2)."""
    count = 1
    while n > 1:
        count *= comb(n, 2)
        n -= 2
    return count


def _ptop_slots(remaining: Tuple[int, ...]) -> Iterator[Tuple[Slot, ...]]:
    if len(remaining) <= 1:
        yield (remaining,) if remaining else ()
        return
    for a, b in combinations(remaining, 2):
        rest = tuple(v for v in remaining if v != a and v != b)
        for tail in _ptop_slots(rest):
            yield ((a, b),) + tail


def enumerate_ptops(n: int, start: int = 0, stop: Optional[int] = None) -> Iterator[PairedOrder]:
    """Stream the PTOPs on ``n`` variables in rank order.

    Ranks are mixed-radix: the first pair is the ``d``-th 2-combination of the
    unused variables, lexicographically, and so on; an odd variable count
    leaves its last variable as the top singleton.  ``start``/``stop`` select
    a contiguous rank range.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if stop is not None and stop <= start:
        return
    if start > 0:
        if start >= ptop_count(n):
            return
        # resume at ``start`` without walking the prefix
        yield from islice(_ptops_from(ptop_at(n, start)), 0, None if stop is None else stop - start)
        return
    for slots in islice(_ptop_slots(tuple(range(n))), 0, stop):
        yield PairedOrder(slots)


def _ptops_from(first: PairedOrder) -> Iterator[PairedOrder]:
    """Continue the rank order from ``first`` onwards."""
    yield first
    current = first
    while True:
        nxt = _next_ptop(current)
        if nxt is None:
            return
        yield nxt
        current = nxt


def _next_ptop(p: PairedOrder) -> Optional[PairedOrder]:
    """Successor of ``p`` in rank order, or None for the last PTOP."""
    slots = list(p.slots)
    pairs = [slot for slot in slots if len(slot) == 2]
    # odometer over the pair digits, least significant (last pair) first
    for depth in range(len(pairs) - 1, -1, -1):
        used = {v for slot in pairs[:depth] for v in slot}
        pool = tuple(v for v in range(p.n) if v not in used)
        options = list(combinations(pool, 2))
        digit = options.index(pairs[depth])
        if digit + 1 < len(options):
            head = pairs[:depth] + [options[digit + 1]]
            rest = tuple(v for v in pool if v not in options[digit + 1])
            tail = next(_ptop_slots(rest))
            return PairedOrder(tuple(head) + tail)
    return None


def ptop_at(n: int, rank: int) -> PairedOrder:
    """The PTOP with the given rank in ``enumerate_ptops`` order."""
    total = ptop_count(n)
    if not 0 <= rank < total:
        raise InputError(f"rank {rank} outside 0..{total - 1}")
    remaining = list(range(n))
    slots: List[Slot] = []
    while len(remaining) > 1:
        block = ptop_count(len(remaining) - 2)
        digit, rank = divmod(rank, block)
        a, b = next(islice(combinations(remaining, 2), digit, None))
        slots.append((a, b))
        remaining = [v for v in remaining if v != a and v != b]
    if remaining:
        slots.append((remaining[0],))
    return PairedOrder(tuple(slots))


def enumerate_total_orders(n: int, start: int = 0, stop: Optional[int] = None) -> Iterator[PairedOrder]:
    """Stream all ``n!`` total orders in lexicographic permutation order."""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    for perm in islice(permutations(range(n)), start, stop):
        yield PairedOrder.total(perm)


def topological_sorts(a: Network) -> Iterator[PairedOrder]:
    """All total orders linearizing the strict order of a realizable atomic network.

    Raises:
        ContractViolation: ``a`` is not realizable
    """
    if not a.is_atomic():
        raise InputError("topological_sorts needs an atomic network")
    rows = a.rows()
    if not rows_realizable(rows):
        raise ContractViolation("topological_sorts needs a realizable network")
    n = a.n
    preds = [{u for u in range(n) if rows[u][v] == LT} for v in range(n)]
    placed: List[int] = []
    used = [False] * n

    def backtrack() -> Iterator[PairedOrder]:
        if len(placed) == n:
            yield PairedOrder.total(placed)
            return
        for v in range(n):
            if not used[v] and all(used[u] for u in preds[v]):
                used[v] = True
                placed.append(v)
                yield from backtrack()
                placed.pop()
                used[v] = False

    yield from backtrack()
