"""
Scenario schema: what a scenario file may contain.

Scenario files are JSON or YAML. Times are in seconds, lengths in meters,
energies in joules; chart points are [t, x1, x2, x3].
"""
import math
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from regions.profiles import ProfileKind
from spacetime import MetricKind

ComplexLike = Union[float, List[float], str]

SWEEPABLES = {
    "bounds": ("compactness", "radius", "duration"),
    "region": ("radius", "duration"),
    "clock": ("omega",),
    "regge": ("refinement",),
    "cosmo": ("age",),
}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MetricSpec(_Strict):
    kind: MetricKind
    parameters: Dict[str, float] = Field(default_factory=dict)


class ProfileSpec(_Strict):
    kind: ProfileKind = ProfileKind.CONSTANT
    radius: Optional[float] = Field(default=None, ge=0)
    duration: Optional[float] = Field(default=None, ge=0)
    taus: Optional[List[float]] = None
    radii: Optional[List[float]] = None

    @model_validator(mode="after")
    def _complete(self):
        if self.kind == ProfileKind.TABLE:
            if not self.taus or not self.radii:
                raise ValueError("table profile needs 'taus' and 'radii'")
        elif self.radius is None or self.duration is None:
            raise ValueError(f"{self.kind.value} profile needs 'radius' and 'duration'")
        return self


class SolidSpec(_Strict):
    label: str = "solid"
    start: List[float] = Field(default_factory=lambda: [0.0, 0.0, 0.0, 0.0], min_length=4, max_length=4)
    velocity: Optional[List[float]] = Field(default=None, min_length=3, max_length=3)
    profile: ProfileSpec
    paper_literal_cones: bool = False


class ClockSpec(_Strict):
    name: str = ""
    preset: Optional[str] = None
    hamiltonian: Optional[List[List[ComplexLike]]] = None
    initial_state: Optional[List[ComplexLike]] = None
    t_max: Optional[float] = Field(default=None, gt=0)
    duration: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_source(self):
        explicit = self.hamiltonian is not None or self.initial_state is not None
        if self.preset and explicit:
            raise ValueError("give either a preset or an explicit hamiltonian/initial_state, not both")
        if not self.preset and (self.hamiltonian is None or self.initial_state is None):
            raise ValueError("clock needs a preset or both 'hamiltonian' and 'initial_state'")
        return self


class ComplexSpec(_Strict):
    name: str = ""
    mesh: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    file: Optional[str] = None
    vertices: Optional[List[List[float]]] = None
    simplices: Optional[List[List[int]]] = None
    edge_lengths: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _one_source(self):
        sources = [self.mesh is not None, self.file is not None, self.simplices is not None]
        if sum(sources) != 1:
            raise ValueError("complex needs exactly one of 'mesh', 'file' or 'simplices'")
        return self


class SweepSpec(_Strict):
    parameter: str
    lo: float
    hi: float
    steps: int = Field(ge=1)

    @field_validator("lo", "hi")
    @classmethod
    def _finite(cls, value):
        if not math.isfinite(value):
            raise ValueError("sweep range must be finite")
        return value

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """'param:lo:hi:steps'"""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"sweep '{text}' is not of the form param:lo:hi:steps")
        return cls(parameter=parts[0], lo=float(parts[1]), hi=float(parts[2]), steps=int(parts[3]))

    def values(self) -> List[float]:
        if self.steps == 1:
            return [self.lo]
        step = (self.hi - self.lo) / (self.steps - 1)
        return [self.lo + i * step for i in range(self.steps)]


class CosmologySpec(_Strict):
    age: float = Field(default=4.35e17, gt=0)
    radius: Optional[float] = Field(default=None, gt=0)
    temperature: float = Field(default=2.7255, gt=0)
    ticks_per_clock: Optional[float] = Field(default=None, ge=1)


class MonteCarloSpec(_Strict):
    n_samples: Optional[int] = Field(default=None, ge=2)
    block_size: Optional[int] = Field(default=None, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)


class OutputSpec(_Strict):
    directory: Optional[str] = None
    report: str = "report.json"
    csv: str = "sweep.csv"


class Scenario(_Strict):
    name: str
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    constants: Optional[Dict[str, float]] = None
    metric: Optional[MetricSpec] = None
    solid: Optional[SolidSpec] = None
    vacuum_energy: float = 0.0
    holographic_radius: Optional[float] = Field(default=None, gt=0)
    monte_carlo: MonteCarloSpec = Field(default_factory=MonteCarloSpec)
    clocks: List[ClockSpec] = Field(default_factory=list)
    complexes: List[ComplexSpec] = Field(default_factory=list)
    cosmology: Optional[CosmologySpec] = None
    sweep: Optional[SweepSpec] = None
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def _solid_needs_metric(self):
        if self.solid is not None and self.metric is None:
            raise ValueError("a solid needs a metric")
        return self

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


__all__ = [
    "ClockSpec",
    "ComplexSpec",
    "CosmologySpec",
    "MetricSpec",
    "MonteCarloSpec",
    "OutputSpec",
    "ProfileSpec",
    "SWEEPABLES",
    "Scenario",
    "SolidSpec",
    "SweepSpec",
]
