"""Atomic relations of the partially ordered time point algebra.

A relation set is stored as a 4-bit mask (``RelSet``).  The bit order follows
the canonical text order ``<``, ``>``, ``=``, ``|`` so that ``str()`` and
``parse_rels`` agree with the instance file format.
"""

from enum import IntFlag
from itertools import product
from typing import Dict, Iterator, Tuple

import numpy as np


class RelSet(IntFlag):
    """Set of atomic relations allowed between two time points.

    The four members are the atoms; unions of them are ordinary ``RelSet``
    values.  ``RelSet(0)`` is the empty set and marks an inconsistent pair.
    """

    LT = 1
    GT = 2
    EQ = 4
    INC = 8

    def __str__(self) -> str:
        return format_rels(self)


LT = RelSet.LT
GT = RelSet.GT
EQ = RelSet.EQ
INC = RelSet.INC
EMPTY = RelSet(0)
FULL = LT | GT | EQ | INC

# Atoms in canonical order, paired with their serialization character.
ATOMS: Tuple[RelSet, ...] = (LT, GT, EQ, INC)
_SYMBOLS: Tuple[Tuple[RelSet, str], ...] = ((LT, "<"), (GT, ">"), (EQ, "="), (INC, "|"))
_BY_SYMBOL: Dict[str, RelSet] = {ch: atom for atom, ch in _SYMBOLS}

POPCOUNT: Tuple[int, ...] = tuple(bin(mask).count("1") for mask in range(16))


def format_rels(s: int) -> str:
    """Serialize a relation set, e.g. ``{<,||}`` becomes ``"<|"``."""
    return "".join(ch for atom, ch in _SYMBOLS if s & atom)


def parse_rels(text: str) -> RelSet:
    """Parse a non-empty relation string over ``<``, ``>``, ``=``, ``|``.

    Raises:
        ValueError: unknown character, repeated character or empty string
    """
    if not text:
        raise ValueError("empty relation string")
    result = EMPTY
    for ch in text:
        atom = _BY_SYMBOL.get(ch)
        if atom is None:
            raise ValueError(f"unknown relation character {ch!r} in {text!r}")
        if result & atom:
            raise ValueError(f"repeated relation character {ch!r} in {text!r}")
        result |= atom
    return result


def atoms_of(s: int) -> Iterator[RelSet]:
    """Yield the atoms contained in ``s`` in canonical order."""
    for atom in ATOMS:
        if s & atom:
            yield atom


def is_atomic(s: int) -> bool:
    """True iff ``s`` holds exactly one atomic relation."""
    return POPCOUNT[int(s)] == 1


def _converse_mask(mask: int) -> int:
    mask = int(mask)
    return (mask & 0b1100) | ((mask & 0b0001) << 1) | ((mask & 0b0010) >> 1)


def converse(s: int) -> RelSet:
    """Swap ``<`` and ``>``; ``||`` and ``=`` are self-converse."""
    return RelSet(_converse_mask(int(s)))


# x r1 y, y r2 z  ->  possible x ? z
_ATOMIC_COMPOSITION: Dict[Tuple[RelSet, RelSet], RelSet] = {
    (LT, LT): LT,
    (LT, GT): FULL,
    (LT, EQ): LT,
    (LT, INC): LT | INC,
    (GT, LT): FULL,
    (GT, GT): GT,
    (GT, EQ): GT,
    (GT, INC): GT | INC,
    (EQ, LT): LT,
    (EQ, GT): GT,
    (EQ, EQ): EQ,
    (EQ, INC): INC,
    (INC, LT): LT | INC,
    (INC, GT): GT | INC,
    (INC, EQ): INC,
    (INC, INC): FULL,
}


def _build_mask_table() -> list[list[int]]:
    table = [[0] * 16 for _ in range(16)]
    for m1, m2 in product(range(16), repeat=2):
        acc = 0
        for a1 in atoms_of(m1):
            for a2 in atoms_of(m2):
                acc |= _ATOMIC_COMPOSITION[(a1, a2)]
        table[m1][m2] = int(acc)
    return table


_COMPOSE_LIST = _build_mask_table()

# Vectorised lookups used by the propagator: COMPOSE_TABLE[m1, m2] and
# CONVERSE_TABLE[m] for every 4-bit mask.
COMPOSE_TABLE = np.array(_COMPOSE_LIST, dtype=np.uint8)
CONVERSE_TABLE = np.array([_converse_mask(m) for m in range(16)], dtype=np.uint8)
POPCOUNT_TABLE = np.array(POPCOUNT, dtype=np.uint8)


def compose(s1: int, s2: int) -> RelSet:
    """Weak composition: every x?z compatible with x s1 y and y s2 z."""
    return RelSet(_COMPOSE_LIST[int(s1)][int(s2)])


def composition_table() -> Dict[Tuple[RelSet, RelSet], RelSet]:
    """Return a copy of the hard-coded atomic composition table."""
    return dict(_ATOMIC_COMPOSITION)


def derive_composition_table() -> Dict[Tuple[RelSet, RelSet], RelSet]:
    """Rebuild the atomic table from realizable 3-variable atomic networks.

    Every assignment of atoms to the pairs (x,y), (y,z), (x,z) is checked with
    ``network.realizable``; the surviving x?z relations are collected per
    (x?y, y?z).
    """
    from .network import Network, realizable

    table: Dict[Tuple[RelSet, RelSet], RelSet] = {
        (r1, r2): EMPTY for r1, r2 in product(ATOMS, repeat=2)
    }
    for r_xy, r_yz, r_xz in product(ATOMS, repeat=3):
        net = Network.full(3)
        net.set_rel(0, 1, r_xy)
        net.set_rel(1, 2, r_yz)
        net.set_rel(0, 2, r_xz)
        if realizable(net):
            table[(r_xy, r_yz)] |= r_xz
    return table
