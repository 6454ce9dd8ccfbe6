"""Small network builders shared by the test suites."""

import os
import unittest
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from mergmkit.core.models import ModelSpec, StatDescriptor, TieLevel
from mergmkit.core.network import MultilevelNetwork

RUN_SLOW = os.environ.get("MERGMKIT_RUN_SLOW") == "1"

slow = unittest.skipUnless(RUN_SLOW, "set MERGMKIT_RUN_SLOW=1 to run")

Pairs = Iterable[Tuple[int, int]]


def make_network(
    n_actors: int,
    n_objects: int,
    a: Pairs = (),
    b: Pairs = (),
    x: Pairs = (),
    actor_groups: Optional[Sequence[str]] = None,
    object_groups: Optional[Sequence[str]] = None,
    attributes: Optional[Mapping[str, Sequence[str]]] = None,
) -> MultilevelNetwork:
    net = MultilevelNetwork(
        actor_labels=[f"a{k}" for k in range(n_actors)],
        object_labels=[f"o{k}" for k in range(n_objects)],
        actor_groups=actor_groups or ["1"] * n_actors,
        object_groups=object_groups or ["1"] * n_objects,
        attributes=attributes,
    )
    for level, pairs in ((TieLevel.A, a), (TieLevel.B, b), (TieLevel.X, x)):
        for i, j in pairs:
            net.flip(level, i, j)
    return net


def model_of(*ids: str, free_levels: Sequence[TieLevel] = (TieLevel.A,), **params) -> ModelSpec:
    return ModelSpec(stats=[StatDescriptor(id=name, **params) for name in ids], free_levels=list(free_levels))
