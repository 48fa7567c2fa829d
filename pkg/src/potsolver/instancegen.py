"""Seeded instance generators: planted-satisfiable and uniform random."""

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Tuple

import numpy as np
import structlog

from .algebra import ATOMS, EQ, GT, INC, LT, RelSet, parse_rels
from .errors import InputError
from .network import Constraint, Instance, Model, Network, extract_model

logger = structlog.get_logger()


class GenMode(str, Enum):
    PLANTED = "planted"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class GenSpec:
    """Generator parameters; equal specs give identical instances.

    Attributes:
        n: number of variables
        density: probability that a pair is constrained
        seed: RNG seed (non-negative)
        mode: planted or uniform
        mask_weights: uniform mode only, relation string -> weight
            (e.g. ``{"<": 1.0}``); default is uniform over the 15 non-empty sets
        edge_probability: planted mode only, chance of an order edge between
            two classes of the hidden partial order
    """

    n: int
    density: float = 0.5
    seed: int = 0
    mode: GenMode = GenMode.UNIFORM
    mask_weights: Optional[Mapping[str, float]] = None
    edge_probability: float = 0.3

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"n must be positive, got {self.n}")
        if not 0.0 <= self.density <= 1.0:
            raise InputError(f"density must lie in [0, 1], got {self.density}")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise InputError(f"edge_probability must lie in [0, 1], got {self.edge_probability}")
        if self.seed < 0:
            raise InputError(f"seed must be non-negative, got {self.seed}")
        object.__setattr__(self, "mode", GenMode(self.mode))
        if self.mask_weights is not None:
            _weight_vector(self.mask_weights)


def _weight_vector(weights: Optional[Mapping[str, float]]) -> np.ndarray:
    """Probabilities over masks 1..15 (index 0 is mask 1)."""
    if weights is None:
        return np.full(15, 1.0 / 15)
    vector = np.zeros(15)
    for text, weight in weights.items():
        try:
            mask = int(parse_rels(text))
        except ValueError as exc:
            raise InputError(f"bad mask_weights key {text!r}: {exc}") from None
        if weight < 0:
            raise InputError(f"negative weight for {text!r}")
        vector[mask - 1] += weight
    total = vector.sum()
    if total <= 0:
        raise InputError("mask_weights must have positive total weight")
    return vector / total


def _planted_relations(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    n = spec.n
    num_classes = int(rng.integers(max(1, (n + 1) // 2), n + 1))
    raw = rng.integers(0, num_classes, size=n)
    # dense class ids by first occurrence
    relabel: dict = {}
    class_of = np.array([relabel.setdefault(int(c), len(relabel)) for c in raw])
    k = len(relabel)
    rank = rng.permutation(k)
    reach = np.zeros((k, k), dtype=bool)
    for lo in range(k):
        for hi in range(lo + 1, k):
            if rng.random() < spec.edge_probability:
                reach[rank[lo], rank[hi]] = True
    # transitive closure (Warshall)
    for mid in range(k):
        reach |= reach[:, [mid]] & reach[[mid], :]
    same = class_of[:, None] == class_of[None, :]
    before = reach[class_of][:, class_of]
    rel = np.full((n, n), int(INC), dtype=np.uint8)
    rel[before] = int(LT)
    rel[before.T] = int(GT)
    rel[same] = int(EQ)
    return rel


def gen_planted(spec: GenSpec) -> Tuple[Instance, Model]:
    """Instance relaxed from a hidden partial order, plus that order as a model.

    Each pair is constrained with probability ``density``; a constraint is a
    uniformly chosen superset of the true atomic relation.
    """
    rng = np.random.default_rng(spec.seed)
    rel = _planted_relations(spec, rng)
    model = extract_model(Network(rel.copy()))
    ins = Instance(spec.n)
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            keep = rng.random() < spec.density
            extras = int(rng.integers(0, 8))
            if not keep:
                continue
            truth = int(rel[i, j])
            others = [int(a) for a in ATOMS if a != truth]
            rels = truth
            for bit, atom in enumerate(others):
                if extras >> bit & 1:
                    rels |= atom
            ins.constraints.append(Constraint(i, j, RelSet(rels)))
    logger.debug("instance_generated", mode="planted", n=spec.n, m=len(ins.constraints), seed=spec.seed)
    return ins, model


def gen_uniform(spec: GenSpec) -> Instance:
    """Each pair constrained with probability ``density`` by a mask drawn from
    ``mask_weights``; satisfiability is not controlled."""
    rng = np.random.default_rng(spec.seed)
    weights = _weight_vector(spec.mask_weights)
    ins = Instance(spec.n)
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            keep = rng.random() < spec.density
            mask = int(rng.choice(15, p=weights)) + 1
            if keep:
                ins.constraints.append(Constraint(i, j, RelSet(mask)))
    logger.debug("instance_generated", mode="uniform", n=spec.n, m=len(ins.constraints), seed=spec.seed)
    return ins


def generate(spec: GenSpec) -> Tuple[Instance, Optional[Model]]:
    """Dispatch on ``spec.mode``; the model is None for uniform instances."""
    if spec.mode is GenMode.PLANTED:
        return gen_planted(spec)
    return gen_uniform(spec), None
