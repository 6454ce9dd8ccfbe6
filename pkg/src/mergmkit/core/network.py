# mergmkit/core/network.py
"""
Two-level socio-material network: actors, objects, three undirected tie
sets (A actor-actor, B object-object, X actor-object) and a group partition
whose between-group dyads are structural zeros.
"""

from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..utils.logger import get_logger
from .errors import (
    DyadRangeError,
    LevelMismatchError,
    MissingAttributeError,
    SchemaMismatchError,
    SelfTieError,
    StructuralZeroError,
    UnknownAttributeError,
    UnknownNodeError,
)
from .models import DyadRef, EdgeRecord, NodeId, NodeLevel, NodeRecord, TieLevel

logger = get_logger(__name__)

DEFAULT_ATTRIBUTES = ("gender", "education", "genre")


def id_sort_key(label: Any) -> Tuple[int, float, str]:
    """Numeric ids sort numerically, everything else lexicographically."""
    text = str(label)
    try:
        number = float(text)
    except ValueError:
        return (1, 0.0, text)
    if number != number:  # nan
        return (1, 0.0, text)
    return (0, number, text)


class MultilevelNetwork:
    """Adjacency-matrix representation of a multilevel network.

    The matrices are int64 numpy arrays. They are mutated in place by
    ``toggle``; everything else treats the network as a value.
    """

    def __init__(
        self,
        actor_labels: Sequence[Any],
        object_labels: Sequence[Any],
        actor_groups: Sequence[Any],
        object_groups: Sequence[Any],
        attributes: Optional[Mapping[str, Sequence[Any]]] = None,
        A: Optional[np.ndarray] = None,
        B: Optional[np.ndarray] = None,
        X: Optional[np.ndarray] = None,
        validate: bool = True,
    ):
        self.actor_labels: List[str] = [str(l) for l in actor_labels]
        self.object_labels: List[str] = [str(l) for l in object_labels]
        self.actor_groups: List[str] = [str(g) for g in actor_groups]
        self.object_groups: List[str] = [str(g) for g in object_groups]
        n_a, n_o = len(self.actor_labels), len(self.object_labels)

        if len(self.actor_groups) != n_a or len(self.object_groups) != n_o:
            raise ValueError("Group partition must cover every node")

        self.A = np.zeros((n_a, n_a), dtype=np.int64) if A is None else np.array(A, dtype=np.int64)
        self.B = np.zeros((n_o, n_o), dtype=np.int64) if B is None else np.array(B, dtype=np.int64)
        self.X = np.zeros((n_a, n_o), dtype=np.int64) if X is None else np.array(X, dtype=np.int64).reshape(n_a, n_o)

        self.attributes: Dict[str, List[str]] = {
            name: [str(v) for v in values] for name, values in (attributes or {}).items()
        }

        self.groups: List[str] = sorted(set(self.actor_groups) | set(self.object_groups), key=id_sort_key)
        code = {g: k for k, g in enumerate(self.groups)}
        self.actor_group_codes = np.array([code[g] for g in self.actor_groups], dtype=np.int64)
        self.object_group_codes = np.array([code[g] for g in self.object_groups], dtype=np.int64)

        self._actor_index = {label: k for k, label in enumerate(self.actor_labels)}
        self._object_index = {label: k for k, label in enumerate(self.object_labels)}
        self._attribute_codes: Dict[str, np.ndarray] = {}
        self._dyads: Dict[TieLevel, np.ndarray] = {}
        self.duplicates_collapsed = 0

        if validate:
            self._validate()
        self._recount()

    # -- construction helpers -------------------------------------------------

    def _validate(self) -> None:
        n_a, n_o = self.n_actors, self.n_objects
        if self.A.shape != (n_a, n_a) or self.B.shape != (n_o, n_o) or self.X.shape != (n_a, n_o):
            raise ValueError("Adjacency shapes do not match node counts")
        for name, mat in (("A", self.A), ("B", self.B), ("X", self.X)):
            if mat.size and not np.isin(mat, (0, 1)).all():
                raise ValueError(f"{name} must be binary")
        for name, mat in (("A", self.A), ("B", self.B)):
            if not np.array_equal(mat, mat.T):
                raise ValueError(f"{name} must be symmetric")
            if mat.size and np.any(np.diag(mat)):
                raise SelfTieError(f"{name} has self-ties on its diagonal")
        if np.any(self.A[self.actor_group_codes[:, None] != self.actor_group_codes[None, :]]):
            raise StructuralZeroError("A contains a tie between groups")
        if np.any(self.B[self.object_group_codes[:, None] != self.object_group_codes[None, :]]):
            raise StructuralZeroError("B contains a tie between groups")
        if np.any(self.X[self.actor_group_codes[:, None] != self.object_group_codes[None, :]]):
            raise StructuralZeroError("X contains a tie between groups")
        for name, values in self.attributes.items():
            if len(values) != n_a:
                raise MissingAttributeError(f"Attribute '{name}' does not cover every actor", attribute=name)
            for label, value in zip(self.actor_labels, values):
                if value == "":
                    raise MissingAttributeError(
                        f"Actor '{label}' has no value for attribute '{name}'", actor=label, attribute=name
                    )

    def _recount(self) -> None:
        self.deg_a = self.A.sum(axis=1)
        self.deg_b = self.B.sum(axis=1)
        self.deg_xa = self.X.sum(axis=1)
        self.deg_xo = self.X.sum(axis=0)

    # -- queries --------------------------------------------------------------

    @property
    def n_actors(self) -> int:
        return len(self.actor_labels)

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def attribute_names(self) -> List[str]:
        return list(self.attributes)

    def matrix(self, level: TieLevel) -> np.ndarray:
        if level == TieLevel.A:
            return self.A
        if level == TieLevel.B:
            return self.B
        return self.X

    def degrees(self, which: str) -> np.ndarray:
        """Degree sequence by name: 'A', 'B', 'XA' (actors in X) or 'XB' (objects in X)."""
        return {"A": self.deg_a, "B": self.deg_b, "XA": self.deg_xa, "XB": self.deg_xo}[which]

    def edge_count(self, level: TieLevel) -> int:
        if level == TieLevel.X:
            return int(self.X.sum())
        return int(self.matrix(level).sum()) // 2

    def edges(self, level: TieLevel) -> List[Tuple[int, int]]:
        mat = self.matrix(level)
        if level == TieLevel.X:
            rows, cols = np.nonzero(mat)
        else:
            rows, cols = np.nonzero(np.triu(mat, k=1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]

    def has_tie(self, level: TieLevel, i: int, j: int) -> bool:
        return bool(self.matrix(level)[i, j])

    def node_id(self, level: NodeLevel, label: Any) -> NodeId:
        index = (self._actor_index if level == NodeLevel.ACTOR else self._object_index).get(str(label))
        if index is None:
            raise UnknownNodeError(f"Unknown {level.value.lower()} id: {label}", node=str(label))
        return NodeId(level=level, index=index)

    def label(self, node: NodeId) -> str:
        labels = self.actor_labels if node.level == NodeLevel.ACTOR else self.object_labels
        return labels[node.index]

    def group_of(self, node: NodeId) -> str:
        groups = self.actor_groups if node.level == NodeLevel.ACTOR else self.object_groups
        return groups[node.index]

    def attribute_codes(self, name: str) -> np.ndarray:
        """Integer category codes of an actor attribute (cached)."""
        codes = self._attribute_codes.get(name)
        if codes is None:
            if name not in self.attributes:
                raise UnknownAttributeError(
                    f"Unknown attribute '{name}'. Available attributes: {', '.join(self.attributes) or 'none'}",
                    attribute=name,
                )
            values = self.attributes[name]
            categories = {v: k for k, v in enumerate(sorted(set(values), key=id_sort_key))}
            codes = np.array([categories[v] for v in values], dtype=np.int64)
            self._attribute_codes[name] = codes
        return codes

    def toggleable_dyads(self, level: TieLevel) -> np.ndarray:
        """All within-group dyads of a level as an (m, 2) array in canonical order."""
        dyads = self._dyads.get(level)
        if dyads is None:
            if level == TieLevel.X:
                same = self.actor_group_codes[:, None] == self.object_group_codes[None, :]
                rows, cols = np.nonzero(same)
            else:
                codes = self.actor_group_codes if level == TieLevel.A else self.object_group_codes
                same = np.triu(codes[:, None] == codes[None, :], k=1)
                rows, cols = np.nonzero(same)
            dyads = np.column_stack([rows, cols]).astype(np.int64) if rows.size else np.zeros((0, 2), dtype=np.int64)
            self._dyads[level] = dyads
        return dyads

    def n_toggleable(self, level: TieLevel) -> int:
        return int(self.toggleable_dyads(level).shape[0])

    def check_dyad(self, dyad: DyadRef) -> None:
        level, i, j = dyad.level, dyad.source, dyad.target
        n_i = self.n_objects if level == TieLevel.B else self.n_actors
        n_j = self.n_actors if level == TieLevel.A else self.n_objects
        if i >= n_i or j >= n_j:
            raise DyadRangeError(f"Dyad {level.value}({i}, {j}) is out of range", dyad=(level.value, i, j))
        if level != TieLevel.X and i == j:
            raise SelfTieError(f"Dyad {level.value}({i}, {j}) is a self-tie", dyad=(level.value, i, j))
        if level == TieLevel.A:
            gi, gj = self.actor_group_codes[i], self.actor_group_codes[j]
        elif level == TieLevel.B:
            gi, gj = self.object_group_codes[i], self.object_group_codes[j]
        else:
            gi, gj = self.actor_group_codes[i], self.object_group_codes[j]
        if gi != gj:
            raise StructuralZeroError(
                f"Dyad {level.value}({i}, {j}) spans groups {self.groups[gi]} and {self.groups[gj]}",
                dyad=(level.value, i, j),
            )

    # -- mutation -------------------------------------------------------------

    def flip(self, level: TieLevel, i: int, j: int) -> int:
        """Flip a dyad without checks and return its new state. Callers guarantee validity."""
        if level == TieLevel.X:
            value = 1 - self.X[i, j]
            self.X[i, j] = value
            step = 1 if value else -1
            self.deg_xa[i] += step
            self.deg_xo[j] += step
            return int(value)
        if level == TieLevel.A:
            mat, deg = self.A, self.deg_a
        else:
            mat, deg = self.B, self.deg_b
        value = 1 - mat[i, j]
        mat[i, j] = value
        mat[j, i] = value
        step = 1 if value else -1
        deg[i] += step
        deg[j] += step
        return int(value)

    def toggle(self, dyad: DyadRef) -> int:
        """Validated in-place toggle; returns the new tie state."""
        self.check_dyad(dyad)
        return self.flip(dyad.level, dyad.source, dyad.target)

    # -- derived networks -----------------------------------------------------

    def copy(self) -> "MultilevelNetwork":
        net = MultilevelNetwork.__new__(MultilevelNetwork)
        net.__dict__.update(self.__dict__)
        net.A, net.B, net.X = self.A.copy(), self.B.copy(), self.X.copy()
        net.attributes = {k: list(v) for k, v in self.attributes.items()}
        net._attribute_codes = dict(self._attribute_codes)
        net._dyads = dict(self._dyads)
        net._recount()
        return net

    def empty_like(self, levels: Iterable[TieLevel] = (TieLevel.A, TieLevel.B, TieLevel.X)) -> "MultilevelNetwork":
        """Copy with the ties of the given levels removed."""
        net = self.copy()
        for level in levels:
            net.matrix(level)[...] = 0
        net._recount()
        return net

    def subnetwork(self, actor_labels: Sequence[str], object_labels: Sequence[str]) -> "MultilevelNetwork":
        ai = np.array([self._actor_index[str(l)] for l in actor_labels], dtype=np.int64)
        oi = np.array([self._object_index[str(l)] for l in object_labels], dtype=np.int64)
        return MultilevelNetwork(
            actor_labels=[self.actor_labels[k] for k in ai],
            object_labels=[self.object_labels[k] for k in oi],
            actor_groups=[self.actor_groups[k] for k in ai],
            object_groups=[self.object_groups[k] for k in oi],
            attributes={name: [values[k] for k in ai] for name, values in self.attributes.items()},
            A=self.A[np.ix_(ai, ai)],
            B=self.B[np.ix_(oi, oi)],
            X=self.X[np.ix_(ai, oi)],
            validate=False,
        )

    def split_groups(self) -> Dict[str, "MultilevelNetwork"]:
        """One network per group id, in group order."""
        parts = {}
        for group in self.groups:
            actors = [l for l, g in zip(self.actor_labels, self.actor_groups) if g == group]
            objects = [l for l, g in zip(self.object_labels, self.object_groups) if g == group]
            parts[group] = self.subnetwork(actors, objects)
        return parts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultilevelNetwork):
            return NotImplemented
        return (
            self.actor_labels == other.actor_labels
            and self.object_labels == other.object_labels
            and self.actor_groups == other.actor_groups
            and self.object_groups == other.object_groups
            and self.attributes == other.attributes
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.B, other.B)
            and np.array_equal(self.X, other.X)
        )

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return (
            f"MultilevelNetwork(actors={self.n_actors}, objects={self.n_objects}, "
            f"A={self.edge_count(TieLevel.A)}, B={self.edge_count(TieLevel.B)}, "
            f"X={self.edge_count(TieLevel.X)}, groups={len(self.groups)})"
        )


def _resolve_endpoints(
    edge: EdgeRecord,
    actor_index: Mapping[str, int],
    object_index: Mapping[str, int],
) -> Tuple[int, int]:
    src, tgt = edge.source, edge.target
    for label in (src, tgt):
        if label not in actor_index and label not in object_index:
            raise UnknownNodeError(f"Edge references unknown node id: {label}", node=label)
    if edge.level == TieLevel.A:
        if src not in actor_index or tgt not in actor_index:
            raise LevelMismatchError(f"A tie {src}-{tgt} must join two actors", edge=(src, tgt))
        i, j = actor_index[src], actor_index[tgt]
    elif edge.level == TieLevel.B:
        if src not in object_index or tgt not in object_index:
            raise LevelMismatchError(f"B tie {src}-{tgt} must join two objects", edge=(src, tgt))
        i, j = object_index[src], object_index[tgt]
    else:
        if src in actor_index and tgt in object_index:
            return actor_index[src], object_index[tgt]
        if tgt in actor_index and src in object_index:
            return actor_index[tgt], object_index[src]
        raise LevelMismatchError(f"X tie {src}-{tgt} must join an actor and an object", edge=(src, tgt))
    if i == j:
        raise SelfTieError(f"Self-tie on node {src}", node=src)
    return (i, j) if i < j else (j, i)


def build_network(
    nodes: Sequence[NodeRecord],
    edges: Sequence[EdgeRecord],
    attributes: Optional[Mapping[str, Mapping[str, Any]]] = None,
    partition: Optional[Mapping[str, Any]] = None,
) -> MultilevelNetwork:
    """
    Build and validate a network from node and edge tables.

    Args:
        nodes: Node rows; node ids must be unique across both levels
        edges: Edge rows; the wave column is ignored here
        attributes: Optional actor id -> {attribute: value} overriding row attributes
        partition: Optional node id -> group overriding row groups

    Returns:
        Validated network with duplicate edges collapsed
    """
    seen = set()
    actors: List[NodeRecord] = []
    objects: List[NodeRecord] = []
    for node in nodes:
        if node.id in seen:
            raise UnknownNodeError(f"Duplicate node id: {node.id}", node=node.id)
        seen.add(node.id)
        (actors if node.level == NodeLevel.ACTOR else objects).append(node)
    actors.sort(key=lambda n: id_sort_key(n.id))
    objects.sort(key=lambda n: id_sort_key(n.id))

    partition = {str(k): str(v) for k, v in (partition or {}).items()}
    for label in partition:
        if label not in seen:
            raise UnknownNodeError(f"Partition references unknown node id: {label}", node=label)

    def group(node: NodeRecord) -> str:
        return partition.get(node.id, node.group)

    actor_attrs: Dict[str, Dict[str, str]] = {}
    for node in actors:
        values = {k: str(v).strip() for k, v in node.attributes.items()}
        if attributes and node.id in attributes:
            values.update({k: str(v).strip() for k, v in attributes[node.id].items()})
        actor_attrs[node.id] = values
    declared = sorted({name for values in actor_attrs.values() for name in values})
    for node in actors:
        for name in declared:
            if not actor_attrs[node.id].get(name):
                raise MissingAttributeError(
                    f"Actor '{node.id}' has no value for attribute '{name}'", actor=node.id, attribute=name
                )

    actor_index = {n.id: k for k, n in enumerate(actors)}
    object_index = {n.id: k for k, n in enumerate(objects)}
    actor_groups = [group(n) for n in actors]
    object_groups = [group(n) for n in objects]

    n_a, n_o = len(actors), len(objects)
    mats = {
        TieLevel.A: np.zeros((n_a, n_a), dtype=np.int64),
        TieLevel.B: np.zeros((n_o, n_o), dtype=np.int64),
        TieLevel.X: np.zeros((n_a, n_o), dtype=np.int64),
    }
    duplicates = 0
    for edge in edges:
        i, j = _resolve_endpoints(edge, actor_index, object_index)
        if edge.level == TieLevel.A:
            gi, gj = actor_groups[i], actor_groups[j]
        elif edge.level == TieLevel.B:
            gi, gj = object_groups[i], object_groups[j]
        else:
            gi, gj = actor_groups[i], object_groups[j]
        if gi != gj:
            raise StructuralZeroError(
                f"{edge.level.value} tie {edge.source}-{edge.target} crosses groups {gi} and {gj}",
                edge=(edge.source, edge.target),
            )
        mat = mats[edge.level]
        if mat[i, j]:
            duplicates += 1
            continue
        mat[i, j] = 1
        if edge.level != TieLevel.X:
            mat[j, i] = 1

    net = MultilevelNetwork(
        actor_labels=[n.id for n in actors],
        object_labels=[n.id for n in objects],
        actor_groups=actor_groups,
        object_groups=object_groups,
        attributes={name: [actor_attrs[n.id][name] for n in actors] for name in declared},
        A=mats[TieLevel.A],
        B=mats[TieLevel.B],
        X=mats[TieLevel.X],
    )
    net.duplicates_collapsed = duplicates
    if duplicates:
        logger.debug(f"Collapsed {duplicates} duplicate edge rows")
    return net


def conform_waves(
    net_wave1: MultilevelNetwork, net_wave2: MultilevelNetwork
) -> Tuple[MultilevelNetwork, MultilevelNetwork]:
    """Restrict both waves to the actors and objects present in both."""
    if set(net_wave1.attribute_names) != set(net_wave2.attribute_names):
        raise SchemaMismatchError(
            "Waves declare different actor attributes",
            wave1=sorted(net_wave1.attribute_names),
            wave2=sorted(net_wave2.attribute_names),
        )

    def common(labels1: List[str], groups1: List[str], labels2: List[str], groups2: List[str]) -> List[str]:
        g2 = dict(zip(labels2, groups2))
        kept = []
        for label, g in zip(labels1, groups1):
            if label in g2:
                if g2[label] != g:
                    raise SchemaMismatchError(
                        f"Node '{label}' belongs to group {g} in wave 1 and {g2[label]} in wave 2", node=label
                    )
                kept.append(label)
        return sorted(kept, key=id_sort_key)

    actors = common(net_wave1.actor_labels, net_wave1.actor_groups, net_wave2.actor_labels, net_wave2.actor_groups)
    objects = common(
        net_wave1.object_labels, net_wave1.object_groups, net_wave2.object_labels, net_wave2.object_groups
    )
    dropped = (
        net_wave1.n_actors + net_wave1.n_objects + net_wave2.n_actors + net_wave2.n_objects
        - 2 * (len(actors) + len(objects))
    )
    if dropped:
        logger.info(f"Wave conformance kept {len(actors)} actors and {len(objects)} objects")
    out1 = net_wave1.subnetwork(actors, objects)
    out2 = net_wave2.subnetwork(actors, objects)
    # attribute column order follows wave 1
    out2.attributes = {name: out2.attributes[name] for name in out1.attributes}
    return out1, out2


def apply_toggle(net: MultilevelNetwork, dyad: DyadRef) -> MultilevelNetwork:
    """Return a copy of ``net`` with one dyad flipped."""
    net.check_dyad(dyad)
    result = net.copy()
    result.flip(dyad.level, dyad.source, dyad.target)
    return result


def lagged_network(
    net_wave1: MultilevelNetwork, net_wave2: MultilevelNetwork
) -> Tuple[MultilevelNetwork, List[TieLevel]]:
    """Social ties from wave 1, usage and material ties from wave 2.

    Returns the combined network and the levels to leave free (B and X).
    """
    w1, w2 = conform_waves(net_wave1, net_wave2)
    combined = w2.copy()
    combined.A = w1.A.copy()
    combined._recount()
    return combined, [TieLevel.B, TieLevel.X]


def filter_min_usage(net: MultilevelNetwork, min_users: int = 2) -> Tuple[MultilevelNetwork, int]:
    """Drop objects used by fewer than ``min_users`` actors, with all their ties."""
    keep = [label for label, users in zip(net.object_labels, net.deg_xo) if users >= min_users]
    dropped = net.n_objects - len(keep)
    if not dropped:
        return net, 0
    logger.info(f"Usage filter dropped {dropped} objects used by fewer than {min_users} actors")
    return net.subnetwork(net.actor_labels, keep), dropped


def random_network(
    n_actors: int,
    n_objects: int,
    n_groups: int = 1,
    density: Optional[Mapping[TieLevel, float]] = None,
    attributes: Optional[Mapping[str, Sequence[str]]] = None,
    seed: Optional[int] = None,
) -> MultilevelNetwork:
    """
    Bernoulli random network over the within-group dyads.

    Nodes are assigned to groups in contiguous blocks. Attribute values are
    drawn uniformly from the given categories (default: binary gender and
    education, three genres).
    """
    rng = np.random.default_rng(seed)
    density = {TieLevel.A: 0.3, TieLevel.B: 0.2, TieLevel.X: 0.3, **(density or {})}
    if attributes is None:
        attributes = {"gender": ["female", "male"], "education": ["yes", "no"], "genre": ["music", "visual", "text"]}

    def blocks(n: int) -> List[str]:
        return [str(min(k * n_groups // max(n, 1), n_groups - 1)) for k in range(n)]

    net = MultilevelNetwork(
        actor_labels=[f"a{k}" for k in range(n_actors)],
        object_labels=[f"o{k}" for k in range(n_objects)],
        actor_groups=blocks(n_actors),
        object_groups=blocks(n_objects),
        attributes={name: [str(rng.choice(list(cats))) for _ in range(n_actors)] for name, cats in attributes.items()},
    )
    for level in (TieLevel.A, TieLevel.B, TieLevel.X):
        dyads = net.toggleable_dyads(level)
        hits = rng.random(len(dyads)) < density[level]
        for i, j in dyads[hits]:
            net.flip(level, int(i), int(j))
    return net
