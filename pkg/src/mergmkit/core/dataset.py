# mergmkit/core/dataset.py
"""Reading and writing the node and edge CSV files."""

import re
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..utils.logger import get_logger
from .errors import DanglingReferenceError, IngestionError, MalformedRowError, UnknownLevelError
from .models import EdgeRecord, IngestionSummary, NodeLevel, NodeRecord, RunConfig, TieLevel
from .network import MultilevelNetwork, build_network, conform_waves, filter_min_usage, lagged_network

logger = get_logger(__name__)

NODE_COLUMNS = ("id", "level", "group")
EDGE_COLUMNS = ("level", "from", "to")
_LINE = re.compile(r"line (\d+)")


class LoadedDataset(BaseModel):
    """Networks built from the input files."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    waves: List[MultilevelNetwork]
    network: MultilevelNetwork
    free_levels: Optional[List[TieLevel]] = None
    summary: IngestionSummary = Field(default_factory=IngestionSummary)

    @property
    def groups(self) -> Dict[str, MultilevelNetwork]:
        return self.network.split_groups()


def read_table(path: Union[str, Path], required: Tuple[str, ...]) -> pd.DataFrame:
    """Read a CSV as text columns; header names are stripped and lower-cased."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise MalformedRowError(f"{path}: file is empty", path=str(path), line=1) from e
    except pd.errors.ParserError as e:
        match = _LINE.search(str(e))
        line = int(match.group(1)) if match else None
        raise MalformedRowError(f"{path}: malformed row at line {line}: {e}", path=str(path), line=line) from e
    frame.columns = [str(c).strip().lower() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise MalformedRowError(f"{path}: missing column(s) {', '.join(missing)}", path=str(path), line=1)
    return frame


def read_nodes(path: Union[str, Path]) -> List[NodeRecord]:
    frame = read_table(path, NODE_COLUMNS)
    attribute_columns = [c for c in frame.columns if c not in NODE_COLUMNS]
    nodes = []
    for row, record in enumerate(frame.to_dict("records")):
        line = row + 2
        node_id = record["id"].strip()
        if not node_id:
            raise MalformedRowError(f"{path}: empty node id at line {line}", path=str(path), line=line)
        try:
            level = NodeLevel.parse(record["level"])
        except ValueError as e:
            raise UnknownLevelError(
                f"{path}: unknown node level '{record['level']}' at line {line}", path=str(path), line=line
            ) from e
        attributes = {c: record[c].strip() for c in attribute_columns} if level == NodeLevel.ACTOR else {}
        nodes.append(NodeRecord(id=node_id, level=level, group=record["group"] or "1", attributes=attributes))
    return nodes


def read_edges(path: Union[str, Path], known: Set[str], wave: Optional[int] = None) -> List[EdgeRecord]:
    """Edge rows; ``wave`` overrides the file's wave column."""
    frame = read_table(path, EDGE_COLUMNS)
    edges = []
    for row, record in enumerate(frame.to_dict("records")):
        line = row + 2
        token = record["level"].strip().upper()
        if token not in TieLevel.__members__:
            raise UnknownLevelError(
                f"{path}: unknown tie level '{record['level']}' at line {line}", path=str(path), line=line
            )
        for end in ("from", "to"):
            if record[end].strip() not in known:
                raise DanglingReferenceError(
                    f"{path}: line {line} references unknown node '{record[end]}'", path=str(path), line=line
                )
        edge_wave = wave
        if edge_wave is None:
            raw = str(record.get("wave", "") or "1").strip()
            try:
                edge_wave = int(float(raw))
            except ValueError as e:
                raise MalformedRowError(f"{path}: bad wave '{raw}' at line {line}", path=str(path), line=line) from e
        edges.append(EdgeRecord(level=TieLevel(token), source=record["from"], target=record["to"], wave=edge_wave))
    return edges


def _tie_counts(net: MultilevelNetwork) -> Dict[str, int]:
    return {level.value: net.edge_count(level) for level in TieLevel}


def load_dataset(cfg: RunConfig) -> LoadedDataset:
    """
    Build the network(s) described by ``cfg``: one per wave, optionally
    filtered by object usage, conformed across waves and combined into the
    lagged design.

    Raises:
        MalformedRowError: unreadable CSV or bad row (with line number)
        UnknownLevelError: level token other than A/B/X (edges) or actor/object (nodes)
        DanglingReferenceError: edge naming an unknown node
    """
    summary = IngestionSummary()
    nodes = read_nodes(cfg.nodes)
    known = {n.id for n in nodes}
    edges = read_edges(cfg.edges, known)

    tables: List[Tuple[List[NodeRecord], List[EdgeRecord]]] = []
    if cfg.nodes2 is not None:
        nodes2 = read_nodes(cfg.nodes2)
        tables = [(nodes, edges), (nodes2, read_edges(cfg.edges2, {n.id for n in nodes2}, wave=2))]
    else:
        waves = sorted({e.wave for e in edges}) or [1]
        if len(waves) > 2:
            logger.warning(f"Edge file has waves {waves}; only {waves[0]} and {waves[1]} are used")
        tables = [(nodes, [e for e in edges if e.wave == w]) for w in waves[:2]]

    networks = []
    for wave, (wave_nodes, wave_edges) in enumerate(tables, start=1):
        net = build_network(wave_nodes, wave_edges)
        summary.duplicates_dropped += net.duplicates_collapsed
        if cfg.min_usage_filter:
            net, dropped = filter_min_usage(net, cfg.min_usage)
            summary.objects_filtered += dropped
        networks.append(net)

    if len(networks) == 2:
        before = sum(n.n_actors + n.n_objects for n in networks)
        networks = list(conform_waves(*networks))
        summary.nodes_dropped_by_conformance = before - sum(n.n_actors + n.n_objects for n in networks)

    free_levels = None
    if cfg.lagged:
        if len(networks) < 2:
            raise IngestionError("The lagged design needs two waves (a wave column or --nodes2/--edges2)")
        network, free_levels = lagged_network(*networks)
    else:
        network = networks[-1]

    summary.nodes = {"Actor": network.n_actors, "Object": network.n_objects}
    summary.ties = {f"wave{k}": _tie_counts(net) for k, net in enumerate(networks, start=1)}
    summary.groups = list(network.groups)
    logger.info(
        f"Loaded {network.n_actors} actors, {network.n_objects} objects in {len(network.groups)} group(s) "
        f"from {len(networks)} wave(s)"
    )
    if summary.duplicates_dropped:
        logger.info(f"Dropped {summary.duplicates_dropped} duplicate edge row(s)")
    return LoadedDataset(waves=networks, network=network, free_levels=free_levels, summary=summary)


def write_dataset(net: MultilevelNetwork, nodes_path: Union[str, Path], edges_path: Union[str, Path], wave: int = 1) -> None:
    """Write a network as node and edge CSV files readable by ``load_dataset``."""
    names = list(net.attributes)
    rows = []
    for k, label in enumerate(net.actor_labels):
        rows.append({"id": label, "level": NodeLevel.ACTOR.value.lower(), "group": net.actor_groups[k],
                     **{name: net.attributes[name][k] for name in names}})
    for k, label in enumerate(net.object_labels):
        rows.append({"id": label, "level": NodeLevel.OBJECT.value.lower(), "group": net.object_groups[k],
                     **{name: "" for name in names}})
    pd.DataFrame(rows, columns=list(NODE_COLUMNS) + names).to_csv(nodes_path, index=False)

    edges = []
    for level in TieLevel:
        sources = net.actor_labels if level != TieLevel.B else net.object_labels
        targets = net.object_labels if level != TieLevel.A else net.actor_labels
        for i, j in net.edges(level):
            edges.append({"level": level.value, "from": sources[i], "to": targets[j], "wave": wave})
    pd.DataFrame(edges, columns=list(EDGE_COLUMNS) + ["wave"]).to_csv(edges_path, index=False)
