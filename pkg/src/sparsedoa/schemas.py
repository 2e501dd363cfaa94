"""Pydantic request/response models for the HTTP service.

These are the wire formats; all domain validation beyond basic shape and
type checks happens in the core package, whose ``ParameterError`` /
``InvariantViolation`` the service maps onto 400 / 500 responses.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .experiments import ArraySpec, ExperimentConfig
from .signals import Scenario

Position = int | float


class ArraySpecModel(BaseModel):
    design: Literal["secna", "nested", "ula"]
    params: dict[str, int]

    def to_spec(self) -> ArraySpec:
        return ArraySpec(design=self.design, params=dict(self.params))


class DesignRequest(ArraySpecModel):
    pass


class DesignResponse(BaseModel):
    design: str
    params: dict[str, int]
    positions: list[Position]


class CoarrayRequest(BaseModel):
    array: Optional[ArraySpecModel] = None
    positions: Optional[list[Position]] = None
    kind: Literal["sdca", "diff", "sum"] = "sdca"

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.array is None) == (self.positions is None):
            raise ValueError("provide exactly one of 'array' or 'positions'")
        return self


class LagWeight(BaseModel):
    lag: int
    weight: int


class CoarrayResponse(BaseModel):
    kind: str
    positions: list[Position]
    lags: list[LagWeight]
    dof: Optional[int]
    segment_lo: Optional[int]
    segment_hi: Optional[int]
    vaa: int
    virtual_half_length: int


class ScenarioModel(BaseModel):
    angles_deg: list[float]
    powers: Optional[list[float]] = None
    nc_phases: Optional[list[float]] = None
    noise_power: float = 0.0
    snapshots: int = 1
    seed: int = 0

    def to_scenario(self) -> Scenario:
        return Scenario(
            angles_deg=tuple(self.angles_deg),
            powers=None if self.powers is None else tuple(self.powers),
            nc_phases=None if self.nc_phases is None else tuple(self.nc_phases),
            noise_power=self.noise_power,
            snapshots=self.snapshots,
            seed=self.seed,
        )


class SimulateRequest(BaseModel):
    array: ArraySpecModel
    scenario: ScenarioModel


class SimulateResponse(BaseModel):
    positions: list[Position]
    sensors: int
    snapshots: int
    # One row per sensor; complex samples as interleaved re,im (2T floats).
    data: list[list[float]]


class EstimateRequest(BaseModel):
    array: ArraySpecModel
    scenario: ScenarioModel
    q: int = Field(ge=1)
    grid_step_deg: float = 0.1


class EstimateResponse(BaseModel):
    peaks: list[float]
    shortfall: bool
    grid_step_deg: float
    # (angle, pseudo-spectrum power) pairs, ascending angle.
    spectrum: list[tuple[float, float]]


class _SweepRequestBase(BaseModel):
    arrays: list[ArraySpecModel]
    q: int = Field(ge=1)
    angle_span: float = 60.0
    trials: int = Field(default=50, ge=1)
    master_seed: int = Field(default=0, ge=0)
    grid_step_deg: float = 0.1


class SweepSnrRequest(_SweepRequestBase):
    snr_db: list[float]
    snapshots: int = Field(default=2000, ge=1)

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            arrays=tuple(a.to_spec() for a in self.arrays),
            q=self.q,
            angle_span=self.angle_span,
            sweep_snr_db=tuple(self.snr_db),
            fixed_snapshots=self.snapshots,
            trials=self.trials,
            master_seed=self.master_seed,
            grid_step=self.grid_step_deg,
        )


class SweepSnapshotsRequest(_SweepRequestBase):
    snapshots_list: list[int]
    snr_db: float = 20.0

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            arrays=tuple(a.to_spec() for a in self.arrays),
            q=self.q,
            angle_span=self.angle_span,
            sweep_snapshots=tuple(self.snapshots_list),
            fixed_snr_db=self.snr_db,
            trials=self.trials,
            master_seed=self.master_seed,
            grid_step=self.grid_step_deg,
        )


class SweepRowModel(BaseModel):
    sweep_value: int | float
    array: str
    rmse: Optional[float]
    trials: int
    failures: int
    excessive_failures: bool


class SweepResponse(BaseModel):
    sweep_variable: str
    rows: list[SweepRowModel]
    config: dict
    master_seed: int
    wall_time_s: float


class DofTableRequest(BaseModel):
    budgets: list[int]


class DofEntryModel(BaseModel):
    value: int
    provenance: Literal["brute-force", "closed-form"]
    closed_form: Optional[int] = None
    brute_force: Optional[int] = None
    matches_reference: Optional[bool] = None
    params: dict[str, int]


class DofRowModel(BaseModel):
    budget: int
    designs: dict[str, DofEntryModel]


class DofTableResponse(BaseModel):
    rows: list[DofRowModel]


class ErrorResponse(BaseModel):
    code: str
    detail: str
