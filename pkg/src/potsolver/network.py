"""Instances, multi relational networks, models and model verification."""

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    CONVERSE_TABLE,
    EQ,
    FULL,
    GT,
    INC,
    LT,
    POPCOUNT,
    POPCOUNT_TABLE,
    RelSet,
    converse,
    format_rels,
)
from .errors import ContractViolation, InputError


@dataclass(frozen=True)
class Constraint:
    """Constraint ``i rels j`` as read from an instance file."""

    i: int
    j: int
    rels: RelSet


@dataclass
class Instance:
    """A POT instance: ``n`` variables and a list of binary constraints."""

    n: int
    constraints: List[Constraint] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"instance needs at least one variable, got n={self.n}")
        for c in self.constraints:
            self._check(c.i, c.j)

    def _check(self, i: int, j: int) -> None:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise InputError(f"variable index out of range in constraint ({i}, {j}) for n={self.n}")
        if i == j:
            raise InputError(f"constraint on a single variable ({i}, {j})")

    def add(self, i: int, j: int, rels: int) -> "Instance":
        """Append constraint ``i rels j`` and return self for chaining."""
        self._check(i, j)
        self.constraints.append(Constraint(i, j, RelSet(rels)))
        return self


class Network:
    """Multi relational network over variables ``0..n-1``.

    ``masks[i, j]`` holds the ``RelSet`` bits allowed for ``(i, j)``.  The
    matrix is converse-coherent (``masks[j, i]`` is the converse of
    ``masks[i, j]``) and its diagonal is ``{=}``.  An empty mask is legal
    state and means the pair can no longer be satisfied.
    """

    __slots__ = ("masks",)

    def __init__(self, masks: np.ndarray):
        self.masks = masks

    @classmethod
    def full(cls, n: int) -> "Network":
        """Unconstrained network on ``n`` variables."""
        masks = np.full((n, n), int(FULL), dtype=np.uint8)
        np.fill_diagonal(masks, int(EQ))
        return cls(masks)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Network":
        return cls(np.array(rows, dtype=np.uint8))

    @property
    def n(self) -> int:
        return self.masks.shape[0]

    def mask(self, i: int, j: int) -> int:
        """Get the raw bitmask of ``(i, j)``."""
        return int(self.masks[i, j])

    def rel(self, i: int, j: int) -> RelSet:
        """Get ``(i, j)`` as a ``RelSet``."""
        return RelSet(int(self.masks[i, j]))

    def set_rel(self, i: int, j: int, s: int) -> None:
        """Overwrite ``(i, j)`` and its converse."""
        self.masks[i, j] = int(s)
        self.masks[j, i] = int(converse(s))

    def refine(self, i: int, j: int, s: int) -> bool:
        """Intersect ``(i, j)`` with ``s``; return True when the mask shrank."""
        if i == j:
            raise InputError(f"refine needs two distinct variables, got ({i}, {j})")
        old = int(self.masks[i, j])
        new = old & int(s)
        if new == old:
            return False
        self.set_rel(i, j, new)
        return True

    def copy(self) -> "Network":
        """Independent copy of the mask matrix."""
        return Network(self.masks.copy())

    def rows(self) -> List[List[int]]:
        """Plain nested-list snapshot for scalar-heavy loops."""
        return self.masks.tolist()

    def is_atomic(self) -> bool:
        off_diagonal = ~np.eye(self.n, dtype=bool)
        return bool((POPCOUNT_TABLE[self.masks][off_diagonal] == 1).all())

    def has_empty(self) -> bool:
        return bool((self.masks == 0).any())

    def total_mass(self) -> int:
        """Number of atoms left over all unordered pairs."""
        return (int(POPCOUNT_TABLE[self.masks].sum()) - self.n) // 2

    def is_coherent(self) -> bool:
        diagonal_ok = bool((np.diag(self.masks) == int(EQ)).all())
        return diagonal_ok and bool((CONVERSE_TABLE[self.masks] == self.masks.T).all())

    def to_instance(self) -> Instance:
        """Emit one constraint per non-full pair ``i < j``.

        Raises:
            ContractViolation: some mask is empty; the instance format has
                no constraint line for it
        """
        if self.has_empty():
            raise ContractViolation("an empty mask has no instance form")
        ins = Instance(self.n)
        rows = self.rows()
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if rows[i][j] != FULL:
                    ins.constraints.append(Constraint(i, j, RelSet(rows[i][j])))
        return ins

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.masks.shape == other.masks.shape and bool((self.masks == other.masks).all())

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        rows = self.rows()
        cells = [
            f"{i}{format_rels(rows[i][j]) or '{}'}{j}"
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if rows[i][j] != FULL
        ]
        return f"Network(n={self.n}, {' '.join(cells)})"


def from_instance(ins: Instance) -> Network:
    """Build the network of an instance; repeated pairs are intersected."""
    net = Network.full(ins.n)
    for c in ins.constraints:
        ins._check(c.i, c.j)
        net.refine(c.i, c.j, c.rels)
    return net


def preceq(f: Network, g: Network) -> bool:
    """True iff every mask of ``f`` is a subset of the matching mask of ``g``."""
    if f.n != g.n:
        raise InputError(f"network size mismatch: {f.n} vs {g.n}")
    return not bool(np.bitwise_and(f.masks, np.bitwise_not(g.masks)).any())


def _atomic_rows(a: Network) -> List[List[int]]:
    if not a.is_atomic():
        raise InputError("operation needs an atomic network")
    return a.rows()


def parallel_larger(f: Network, g: Network) -> bool:
    """True iff ``f`` is ||-larger than ``g``.

    Every ``||`` of ``g`` stays ``||`` in ``f``, every ``<`` (``>``) of ``g``
    becomes ``<`` or ``||`` (``>`` or ``||``) in ``f``, and the two networks
    differ somewhere.
    """
    if f.n != g.n:
        raise InputError(f"network size mismatch: {f.n} vs {g.n}")
    fr, gr = _atomic_rows(f), _atomic_rows(g)
    differs = False
    for i in range(f.n):
        for j in range(f.n):
            if i == j:
                continue
            fv, gv = fr[i][j], gr[i][j]
            if fv != gv:
                differs = True
            if gv == INC and fv != INC:
                return False
            if gv == LT and fv not in (LT, INC):
                return False
            if gv == GT and fv not in (GT, INC):
                return False
    return differs


def _eq_classes(rows: Sequence[Sequence[int]]) -> Optional[Tuple[List[int], List[int]]]:
    """Group variables by ``=``; None when ``=`` is not an equivalence."""
    n = len(rows)
    class_of = [-1] * n
    reps: List[int] = []
    for i in range(n):
        if class_of[i] >= 0:
            continue
        class_of[i] = len(reps)
        reps.append(i)
        for j in range(i + 1, n):
            if rows[i][j] == EQ:
                if class_of[j] >= 0:
                    return None
                class_of[j] = class_of[i]
    for i in range(n):
        for j in range(i + 1, n):
            if (class_of[i] == class_of[j]) != (rows[i][j] == EQ):
                return None
    return class_of, reps


def rows_realizable(rows: Sequence[Sequence[int]]) -> bool:
    """Realizability of an atomic mask table given as nested lists."""
    grouped = _eq_classes(rows)
    if grouped is None:
        return False
    class_of, reps = grouped
    n = len(rows)
    # congruence: every member relates like its class representative
    for i in range(n):
        ri = reps[class_of[i]]
        for j in range(n):
            if class_of[i] != class_of[j] and rows[i][j] != rows[ri][reps[class_of[j]]]:
                return False
    k = len(reps)
    for a in range(k):
        ra = reps[a]
        for b in range(k):
            if rows[ra][reps[b]] != LT:
                continue
            rb = reps[b]
            for c in range(k):
                if rows[rb][reps[c]] == LT and rows[ra][reps[c]] != LT:
                    return False
    return True


def realizable(a: Network) -> bool:
    """True iff some partial order (with merging) induces exactly ``a``."""
    return rows_realizable(_atomic_rows(a))


@dataclass(frozen=True)
class Model:
    """Witness: variable classes plus a strict order between classes."""

    class_of: Tuple[int, ...]
    strict_edges: FrozenSet[Tuple[int, int]] = frozenset()

    @property
    def num_classes(self) -> int:
        return max(self.class_of) + 1 if self.class_of else 0

    def closure(self) -> List[int]:
        """Reachability bitsets over classes.

        Raises:
            InputError: class ids not dense, dangling edge ids or a cycle
        """
        k = self.num_classes
        if set(self.class_of) != set(range(k)):
            raise InputError("class ids must be dense from 0")
        reach = [0] * k
        for c1, c2 in self.strict_edges:
            if not (0 <= c1 < k and 0 <= c2 < k):
                raise InputError(f"edge ({c1}, {c2}) names an unknown class")
            reach[c1] |= 1 << c2
        for mid in range(k):
            bit = 1 << mid
            for c in range(k):
                if reach[c] & bit:
                    reach[c] |= reach[mid]
        for c in range(k):
            if reach[c] >> c & 1:
                raise InputError(f"strict order has a cycle through class {c}")
        return reach

    def relation(self, i: int, j: int, reach: Optional[List[int]] = None) -> RelSet:
        """Atomic relation the model induces between variables ``i`` and ``j``."""
        if reach is None:
            reach = self.closure()
        ci, cj = self.class_of[i], self.class_of[j]
        if ci == cj:
            return EQ
        if reach[ci] >> cj & 1:
            return LT
        if reach[cj] >> ci & 1:
            return GT
        return INC


def extract_model(a: Network) -> Model:
    """Read a witness off a realizable atomic network.

    Raises:
        ContractViolation: ``a`` is not realizable
    """
    rows = _atomic_rows(a)
    if not rows_realizable(rows):
        raise ContractViolation("extract_model needs a realizable atomic network")
    class_of, reps = _eq_classes(rows)  # type: ignore[misc]
    k = len(reps)
    before = [[rows[reps[x]][reps[y]] == LT for y in range(k)] for x in range(k)]
    edges = frozenset(
        (x, y)
        for x in range(k)
        for y in range(k)
        if before[x][y] and not any(before[x][z] and before[z][y] for z in range(k))
    )
    return Model(tuple(class_of), edges)


def verify_model(ins: Instance, m: Model) -> bool:
    """Check every constraint of ``ins`` against the relations ``m`` induces.

    Raises:
        InputError: model size differs from the instance or is malformed
    """
    if len(m.class_of) != ins.n:
        raise InputError(f"model covers {len(m.class_of)} variables, instance has {ins.n}")
    reach = m.closure()
    return all(m.relation(c.i, c.j, reach) & c.rels for c in ins.constraints)
