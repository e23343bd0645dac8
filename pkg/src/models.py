"""Data models: TypedDict state for the LangGraph pipeline, pydantic models for configuration and reports."""
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple, TypedDict

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.types import MAX_BCH_ORDER, REPORT_SCHEMA, Command, OutputFormat, PipelineStage


class RunConfig(BaseModel):
    """Validated flag set of one command-line invocation."""
    command: Command = Field(description="Subcommand being run")
    lie: Optional[str] = Field(default=None, description="builtin:NAME or path to a JSON algebra file")
    order: int = Field(default=3, ge=0, le=MAX_BCH_ORDER, description="Truncation order N")
    samples: int = Field(default=200_000, ge=1, le=10**8, description="Monte-Carlo samples per weight")
    seed: int = Field(default=7, ge=0, le=2**64 - 1, description="Root seed of every random stream")
    workers: int = Field(default=1, ge=1, le=64, description="Monte-Carlo worker processes")
    tolerance_k: int = Field(default=4, ge=1, le=10, description="Acceptance band in standard errors")
    format: OutputFormat = Field(default=OutputFormat.TEXT, description="Report format")

    @field_validator("lie")
    @classmethod
    def validate_lie(cls, v):
        if v is not None and not v.strip():
            raise ValueError("--lie must not be empty")
        return v


class WeightEstimate(BaseModel):
    """Monte-Carlo estimate of a graph weight together with its provenance."""
    graph: str = Field(description="Canonical text form of the graph")
    n: int = Field(ge=0, description="Number of aerial vertices")
    mean: float
    stderr: float = Field(ge=0.0)
    samples: int = Field(ge=0)
    seed: int = Field(ge=0)
    workers: int = Field(default=1, ge=1)
    elapsed_ms: float = Field(default=0.0, ge=0.0)

    def within(self, expected: float, k: float, floor: float = 1e-12) -> bool:
        """|mean - expected| <= max(k * stderr, floor)."""
        return abs(self.mean - expected) <= max(k * self.stderr, floor)

    def to_record(self) -> Dict[str, Any]:
        return {"schema": REPORT_SCHEMA, **self.model_dump()}


class CheckRecord(BaseModel):
    """Outcome of one verification step."""
    stage: PipelineStage
    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


class CommandReport(BaseModel):
    """What a command prints: text lines for people, data for the JSON record."""
    command: Command
    ok: bool
    lines: List[str] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)

    def to_record(self, config: RunConfig) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "command": self.command.value,
            "ok": self.ok,
            "config": config.model_dump(mode="json"),
            **self.data,
        }


class KVPairRecord(BaseModel):
    """On-disk form of a KV pair: F and G in canonical text form."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(alias="schema")
    order: int = Field(ge=2)
    F: str
    G: str


def _rational_text(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ValueError(f"coefficient {value!r} is not a rational number")
    text = str(value).strip().replace("\u2212", "-")
    try:
        Fraction(text)
    except ZeroDivisionError as exc:
        raise ValueError(f"coefficient {value!r} has a zero denominator") from exc
    return text


class BracketEntry(BaseModel):
    """[x_i, x_j] = sum_k coeffs[k] x_k, indices 0-based, coefficients as rational strings."""
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    coeffs: Dict[int, str]

    @field_validator("coeffs", mode="before")
    @classmethod
    def validate_coeffs(cls, v):
        if not isinstance(v, dict):
            return v
        return {k: _rational_text(c) for k, c in v.items()}


class LieAlgebraFile(BaseModel):
    """JSON description of a Lie algebra by its structure constants."""
    dim: int = Field(ge=1)
    basis: Optional[List[str]] = None
    brackets: List[BracketEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_indices(self):
        if self.basis is not None and len(self.basis) != self.dim:
            raise ValueError(f"basis has {len(self.basis)} labels for dimension {self.dim}")
        seen = set()
        for entry in self.brackets:
            for index in (entry.i, entry.j, *entry.coeffs):
                if not 0 <= index < self.dim:
                    raise ValueError(f"index {index} out of range for dimension {self.dim}")
            pair = (min(entry.i, entry.j), max(entry.i, entry.j))
            if pair in seen:
                raise ValueError(f"bracket of ({pair[0]}, {pair[1]}) listed twice")
            seen.add(pair)
        return self

    def structure(self) -> List[Tuple[int, int, int, Fraction]]:
        return [(e.i, e.j, k, Fraction(c)) for e in self.brackets for k, c in e.coeffs.items()]


class PipelineLogEntry(TypedDict):
    """Entry in the pipeline log for tracking events."""
    stage: str
    event_type: Literal["start", "solve", "check", "skip", "fallback", "finish"]
    message: str
    details: Dict[str, Any]


class KVPipelineState(TypedDict):
    """State carried through the KV verification graph."""
    # Request
    order: int
    algebras: List[str]
    homotopy_lie: Optional[str]
    homotopy_inputs: Optional[Tuple[str, str]]
    pair_source: Optional[str]

    # Results
    pair: Optional[Any]  # KVPair
    checks: List[Dict[str, Any]]  # CheckRecord dumps
    homotopy: Optional[Dict[str, str]]

    # Flow
    stage: str
    failed: bool
    is_finished: bool
    pipeline_log: List[PipelineLogEntry]


def create_initial_pipeline_state(
    order: int,
    algebras: Optional[List[str]] = None,
    homotopy_lie: Optional[str] = None,
    homotopy_inputs: Optional[Tuple[str, str]] = None,
    pair_source: Optional[str] = None,
) -> KVPipelineState:
    """Create the state the KV pipeline starts from."""
    algebras = list(algebras or [])
    # the homotopy formula needs KV2 on its own algebra
    if homotopy_lie and homotopy_lie not in algebras:
        algebras.append(homotopy_lie)
    return KVPipelineState(
        order=order,
        algebras=algebras,
        homotopy_lie=homotopy_lie,
        homotopy_inputs=homotopy_inputs,
        pair_source=pair_source,
        pair=None,
        checks=[],
        homotopy=None,
        stage="initialize",
        failed=False,
        is_finished=False,
        pipeline_log=[
            PipelineLogEntry(
                stage="initialize",
                event_type="start",
                message=f"KV pipeline started at order {order}",
                details={"algebras": algebras, "homotopy_lie": homotopy_lie},
            )
        ],
    )
