# mergmkit/core/models.py
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class NodeLevel(str, Enum):
    """The two node levels of a socio-material network."""
    ACTOR = "Actor"
    OBJECT = "Object"

    @classmethod
    def parse(cls, token: Any) -> "NodeLevel":
        if isinstance(token, NodeLevel):
            return token
        value = str(token).strip().lower()
        if value in ("actor", "a", "actors"):
            return cls.ACTOR
        if value in ("object", "o", "b", "objects"):
            return cls.OBJECT
        raise ValueError(f"Unknown node level: {token!r}")


class TieLevel(str, Enum):
    """Tie sets: actor-actor (A), object-object (B) and actor-object usage (X)."""
    A = "A"
    B = "B"
    X = "X"


class StatLevel(str, Enum):
    A = "A"
    B = "B"
    X = "X"
    CROSS = "Cross"


class AttributeMode(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"


class NodeId(BaseModel):
    """Dense per-level node index."""
    model_config = ConfigDict(frozen=True)

    level: NodeLevel
    index: int = Field(ge=0)


class DyadRef(BaseModel):
    """A dyad in canonical order: (min, max) for A and B, actor-first for X."""
    model_config = ConfigDict(frozen=True)

    level: TieLevel
    source: int = Field(ge=0)
    target: int = Field(ge=0)

    @model_validator(mode="before")
    @classmethod
    def _canonical(cls, data: Any) -> Any:
        if isinstance(data, dict):
            level = data.get("level")
            src, tgt = data.get("source"), data.get("target")
            if level in (TieLevel.A, TieLevel.B, "A", "B") and src is not None and tgt is not None and src > tgt:
                data = {**data, "source": tgt, "target": src}
        return data

    @classmethod
    def of(cls, level: TieLevel, a: int, b: int) -> "DyadRef":
        return cls(level=TieLevel(level), source=int(a), target=int(b))

    @property
    def endpoints(self) -> Tuple[NodeId, NodeId]:
        if self.level == TieLevel.A:
            return NodeId(level=NodeLevel.ACTOR, index=self.source), NodeId(level=NodeLevel.ACTOR, index=self.target)
        if self.level == TieLevel.B:
            return NodeId(level=NodeLevel.OBJECT, index=self.source), NodeId(level=NodeLevel.OBJECT, index=self.target)
        return NodeId(level=NodeLevel.ACTOR, index=self.source), NodeId(level=NodeLevel.OBJECT, index=self.target)


class NodeRecord(BaseModel):
    """One row of the node table."""
    id: str
    level: NodeLevel
    group: str
    attributes: Dict[str, str] = Field(default_factory=dict)

    @field_validator("level", mode="before")
    @classmethod
    def _parse_level(cls, value: Any) -> NodeLevel:
        return NodeLevel.parse(value)

    @field_validator("id", "group", mode="before")
    @classmethod
    def _as_text(cls, value: Any) -> str:
        return str(value).strip()


class EdgeRecord(BaseModel):
    """One row of the edge table."""
    level: TieLevel
    source: str
    target: str
    wave: int = 1

    @field_validator("source", "target", mode="before")
    @classmethod
    def _as_text(cls, value: Any) -> str:
        return str(value).strip()


class StatDescriptor(BaseModel):
    """Reference to a catalog statistic plus its parameters."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: str
    level: Optional[StatLevel] = None
    lambda_: float = Field(default=2.0, alias="lambda", gt=1.0)
    attribute: Optional[str] = None
    mode: Optional[AttributeMode] = None

    def key(self) -> Tuple[Any, ...]:
        return (self.id, self.level, round(self.lambda_, 12), self.attribute, self.mode)


class ModelSpec(BaseModel):
    """Ordered statistics plus the levels the sampler may change."""
    stats: List[StatDescriptor] = Field(min_length=1)
    free_levels: List[TieLevel] = Field(default_factory=lambda: [TieLevel.A, TieLevel.B, TieLevel.X])
    aliases: Dict[str, str] = Field(default_factory=dict)

    @field_validator("stats")
    @classmethod
    def _no_duplicates(cls, stats: List[StatDescriptor]) -> List[StatDescriptor]:
        seen = set()
        for desc in stats:
            if desc.key() in seen:
                raise ValueError(f"Duplicate statistic descriptor: {desc.id}")
            seen.add(desc.key())
        return stats

    @field_validator("free_levels")
    @classmethod
    def _unique_levels(cls, levels: List[TieLevel]) -> List[TieLevel]:
        if len(set(levels)) != len(levels):
            raise ValueError("free_levels contains duplicates")
        return levels

    def with_free_levels(self, levels: List[TieLevel]) -> "ModelSpec":
        return self.model_copy(update={"free_levels": list(levels)})


class Theta(BaseModel):
    """Parameter vector aligned with a ModelSpec."""
    values: List[float]

    @field_validator("values")
    @classmethod
    def _finite(cls, values: List[float]) -> List[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("theta entries must be finite")
        return values

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __len__(self) -> int:
        return len(self.values)


class ChainConfig(BaseModel):
    """Metropolis-Hastings run lengths; defaults mirror the published GOF setup."""
    burn_in: int = Field(default=100_000, ge=0)
    thinning: int = Field(default=10, ge=1)
    sample_size: int = Field(default=10_000, ge=1)
    seed: Optional[int] = None
    level_choice: Optional[Dict[TieLevel, float]] = None

    @field_validator("level_choice")
    @classmethod
    def _nonnegative(cls, weights: Optional[Dict[TieLevel, float]]) -> Optional[Dict[TieLevel, float]]:
        if weights is not None and any(w < 0 for w in weights.values()):
            raise ValueError("level_choice weights must be nonnegative")
        return weights


class SampleSummary(BaseModel):
    """Summary of the retained draws of one or more chains."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    statistics: List[str]
    mean: List[float]
    sd: List[float]
    n_draws: int
    n_steps: int
    acceptance_rate: float
    degenerate: bool = False
    degenerate_statistics: List[str] = Field(default_factory=list)
    draws: Optional[np.ndarray] = Field(default=None, exclude=True)
    final_state: Optional[Any] = Field(default=None, exclude=True)


class ExactExpectation(BaseModel):
    """Exact normalizing constant and expectations over an enumerated state space."""
    statistics: List[str]
    log_partition: float
    partition: float
    expectation: List[float]
    n_states: int


class EstimationSettings(BaseModel):
    """Robbins-Monro estimation controls."""
    phase1_draws: int = Field(default=500, ge=1)
    subphase_count: int = Field(default=5, ge=1)
    initial_gain: float = Field(default=0.1, gt=0.0, le=1.0)
    phase3_draws: int = Field(default=2000, ge=1)
    max_restarts: int = Field(default=3, ge=1)
    convergence_threshold: float = Field(default=0.1, gt=0.0)
    full_scaling: bool = False
    multiplication_factor: Optional[float] = Field(default=None, gt=0.0)
    mple_warm_start: bool = False


class FitResult(BaseModel):
    """Estimates, standard errors and convergence diagnostics."""
    statistics: List[str]
    theta_hat: List[float]
    std_errors: List[float]
    conv_t_ratios: List[float]
    param_covariance: List[List[float]]
    converged: bool
    observed_stats: List[float]
    initial_theta: List[float] = Field(default_factory=list)
    restarts: int = 0
    phase3_mean: List[float] = Field(default_factory=list)
    phase3_sd: List[float] = Field(default_factory=list)
    model: Optional[ModelSpec] = None

    @model_validator(mode="after")
    def _aligned(self) -> "FitResult":
        p = len(self.theta_hat)
        if len(self.std_errors) != p or len(self.conv_t_ratios) != p or len(self.observed_stats) != p:
            raise ValueError("FitResult vectors are not aligned")
        cov = np.asarray(self.param_covariance, dtype=float)
        if cov.shape != (p, p):
            raise ValueError("param_covariance has the wrong shape")
        if not np.allclose(cov, cov.T, rtol=1e-8, atol=1e-10):
            raise ValueError("param_covariance must be symmetric")
        return self

    @property
    def theta(self) -> Theta:
        return Theta(values=list(self.theta_hat))


class GofRow(BaseModel):
    statistic: str
    observed: float
    sim_mean: float
    sim_sd: float = Field(ge=0.0)
    t_ratio: float
    modeled: bool
    zero_variance: bool = False
    verdict: str = "pass"


class GofTable(BaseModel):
    rows: List[GofRow]
    modeled_threshold: float = 0.1
    auxiliary_threshold: float = 1.0

    def failing_rows(self) -> List[GofRow]:
        return [row for row in self.rows if row.verdict != "pass"]


class GroupDescriptives(BaseModel):
    group: str
    values: Dict[str, Optional[float]]


class AggregateRow(BaseModel):
    metric: str
    section: str
    average: Optional[float] = None
    minimum: Optional[float] = None
    maximum: Optional[float] = None
    total: Optional[float] = None


class DescriptiveOptions(BaseModel):
    """Which actor attributes are summarized, and how."""
    binary: Dict[str, List[str]] = Field(
        default_factory=lambda: {
            "gender": ["female", "f", "woman", "w", "1"],
            "education": ["yes", "y", "true", "1"],
        }
    )
    binary_labels: Dict[str, str] = Field(
        default_factory=lambda: {"gender": "Share female", "education": "Share with artistic education"}
    )
    diversity: List[str] = Field(default_factory=lambda: ["genre"])
    raw_blau: bool = False


class DescriptiveReport(BaseModel):
    groups: List[GroupDescriptives]
    aggregates: List[AggregateRow]
    metrics: List[Tuple[str, str, str]] = Field(default_factory=list)


class FitReportRow(BaseModel):
    statistic: str
    label: str
    section: str
    parameter: float
    std_error: float
    z: Optional[float] = None
    p_value: Optional[float] = None
    stars: str = ""
    flag: Optional[str] = None


class FitReport(BaseModel):
    title: str = "Results of MERGMs"
    rows: List[FitReportRow]
    converged: bool = True


class IngestionSummary(BaseModel):
    """What load_dataset read, dropped and kept."""
    nodes: Dict[str, int] = Field(default_factory=dict)
    ties: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    duplicates_dropped: int = 0
    objects_filtered: int = 0
    nodes_dropped_by_conformance: int = 0
    groups: List[str] = Field(default_factory=list)


class ReportTable(BaseModel):
    """Neutral tabular form handed to exporters."""
    name: str
    title: str
    columns: List[str]
    rows: List[List[Any]]
    notes: List[str] = Field(default_factory=list)


class RunMode(str, Enum):
    STATS = "stats"
    DESCRIBE = "describe"
    SIMULATE = "simulate"
    ESTIMATE = "estimate"
    GOF = "gof"
    CORRELATE = "correlate"


class RunConfig(BaseModel):
    """Everything one CLI invocation needs."""
    mode: RunMode
    nodes: Optional[Path] = None
    edges: Optional[Path] = None
    nodes2: Optional[Path] = None
    edges2: Optional[Path] = None
    model: Optional[ModelSpec] = None
    chain: ChainConfig = Field(default_factory=ChainConfig)
    estimation: EstimationSettings = Field(default_factory=EstimationSettings)
    output_dir: Path = Path("./mergm_output")
    seed: Optional[int] = None
    min_usage_filter: bool = False
    min_usage: int = Field(default=2, ge=1)
    lagged: bool = False
    fit_path: Optional[Path] = None
    theta: Optional[List[float]] = None
    from_empty: bool = False
    chains: int = Field(default=1, ge=1)
    processes: Optional[int] = Field(default=None, ge=1)
    aux: Optional[List[StatDescriptor]] = None
    modeled_threshold: float = Field(default=0.1, gt=0.0)
    auxiliary_threshold: float = Field(default=1.0, gt=0.0)
    descriptives: DescriptiveOptions = Field(default_factory=DescriptiveOptions)

    @model_validator(mode="after")
    def _check_inputs(self) -> "RunConfig":
        for name in ("nodes", "edges", "nodes2", "edges2", "fit_path"):
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ValueError(f"{name} file does not exist: {path}")
        needs_data = self.mode != RunMode.CORRELATE
        if needs_data and (self.nodes is None or self.edges is None):
            raise ValueError(f"mode '{self.mode.value}' requires --nodes and --edges")
        if (self.nodes2 is None) != (self.edges2 is None):
            raise ValueError("second wave needs both --nodes2 and --edges2")
        if self.mode in (RunMode.STATS, RunMode.ESTIMATE) and self.model is None:
            raise ValueError(f"mode '{self.mode.value}' requires a model")
        if self.mode == RunMode.SIMULATE and self.model is None and self.fit_path is None:
            raise ValueError("mode 'simulate' requires a model or a fit")
        if self.mode in (RunMode.GOF, RunMode.CORRELATE) and self.fit_path is None:
            raise ValueError(f"mode '{self.mode.value}' requires --fit")
        return self
