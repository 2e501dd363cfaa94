"""FastAPI service wrapping the core package.

Run with ``uvicorn sparsedoa.service:app`` (or ``sparsedoa serve``). Core
errors map onto HTTP responses carrying a machine-readable ``code``:
``ParameterError`` -> 400 ``parameter_error``, ``InvariantViolation`` ->
500 ``invariant_violation``. Request validation failures keep FastAPI's
standard 422 shape.
"""

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, coarray, estimation, experiments, signals
from .errors import InvariantViolation, ParameterError
from .geometry import SensorArray
from .schemas import (
    CoarrayRequest,
    CoarrayResponse,
    DesignRequest,
    DesignResponse,
    DofTableRequest,
    DofTableResponse,
    EstimateRequest,
    EstimateResponse,
    LagWeight,
    SimulateRequest,
    SimulateResponse,
    SweepResponse,
    SweepSnapshotsRequest,
    SweepSnrRequest,
)

app = FastAPI(title="sparsedoa", version=__version__)


@app.exception_handler(ParameterError)
async def _parameter_error(request: Request, exc: ParameterError):
    return JSONResponse(status_code=400, content={"code": "parameter_error", "detail": str(exc)})


@app.exception_handler(InvariantViolation)
async def _invariant_violation(request: Request, exc: InvariantViolation):
    return JSONResponse(
        status_code=500, content={"code": "invariant_violation", "detail": str(exc)}
    )


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/design", response_model=DesignResponse)
def design(req: DesignRequest):
    arr = req.to_spec().build()
    return arr.to_json_dict()


@app.post("/coarray", response_model=CoarrayResponse)
def coarray_analysis(req: CoarrayRequest):
    if req.array is not None:
        arr = req.array.to_spec().build()
    else:
        arr = SensorArray(tuple(req.positions))
    builders = {"sdca": coarray.sdca, "diff": coarray.diff_coarray, "sum": coarray.sum_coarray}
    lags = builders[req.kind](arr)
    if 0 in lags.weights:
        lo, hi, dof = coarray.max_contiguous_segment(lags)
    else:
        lo = hi = dof = None
    vula = coarray.build_virtual_ula(arr)
    return CoarrayResponse(
        kind=req.kind,
        positions=list(arr.positions),
        lags=[LagWeight(lag=l, weight=lags.weights[l]) for l in lags.support],
        dof=dof,
        segment_lo=lo,
        segment_hi=hi,
        vaa=coarray.vaa(lags),
        virtual_half_length=vula.half_length,
    )


@app.post("/dof-table", response_model=DofTableResponse)
def dof_table(req: DofTableRequest):
    return experiments.dof_table(req.budgets).to_json_dict()


def _interleave(row: np.ndarray) -> list:
    out = np.empty(2 * row.size)
    out[0::2] = row.real
    out[1::2] = row.imag
    return out.tolist()


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest):
    arr = req.array.to_spec().build()
    snap = signals.gen_snapshots(arr, req.scenario.to_scenario())
    return SimulateResponse(
        positions=list(arr.positions),
        sensors=arr.size,
        snapshots=snap.n_snapshots,
        data=[_interleave(row) for row in snap.data],
    )


@app.post("/estimate", response_model=EstimateResponse)
def estimate(req: EstimateRequest):
    arr = req.array.to_spec().build()
    snap = signals.gen_snapshots(arr, req.scenario.to_scenario())
    result = estimation.estimate_doa(arr, snap, req.q, req.grid_step_deg)
    finite = np.where(np.isfinite(result.values), result.values, np.finfo(float).max)
    return EstimateResponse(
        peaks=[float(p) for p in result.peaks],
        shortfall=result.shortfall,
        grid_step_deg=req.grid_step_deg,
        spectrum=list(zip(result.grid.tolist(), finite.tolist())),
    )


@app.post("/sweep/snr", response_model=SweepResponse)
def sweep_snr(req: SweepSnrRequest):
    report = experiments.sweep_snr(req.to_config())
    return report.to_json_dict()


@app.post("/sweep/snapshots", response_model=SweepResponse)
def sweep_snapshots(req: SweepSnapshotsRequest):
    report = experiments.sweep_snapshots(req.to_config())
    return report.to_json_dict()
