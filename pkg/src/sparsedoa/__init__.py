"""Sparse-array DOA estimation for non-circular signals.

Core package: array geometries and DOF formulas (``geometry``), exact
co-array algebra (``coarray``), snapshot simulation (``signals``), the
covariance-domain estimation pipeline (``estimation``) and the Monte
Carlo experiment harness (``experiments``). ``service`` wraps it all in a
FastAPI app; ``cli`` is a thin client over that service.
"""

from .coarray import (
    LagSet,
    VirtualULA,
    build_virtual_ula,
    diff_coarray,
    max_contiguous_segment,
    sdca,
    sum_coarray,
    vaa,
)
from .errors import CapacityError, InvariantViolation, ParameterError, SparseDoaError
from .estimation import (
    ExtendedCovariance,
    SmoothedCovariance,
    SpectrumResult,
    VirtualSnapshot,
    analytic_covariance,
    estimate_doa,
    extended_manifold,
    music_spectrum,
    sample_covariance,
    spatial_smoothing,
    virtualize,
)
from .experiments import (
    ArraySpec,
    DofTable,
    ExperimentConfig,
    RmseReport,
    dof_table,
    resolve_array,
    rmse,
    sweep_snapshots,
    sweep_snr,
)
from .geometry import (
    CoprimePair,
    SecnaDesign,
    SensorArray,
    best_coprime_pair,
    build_nested,
    build_secna,
    build_ula,
    esna_dof_formula,
    rsna1_dof_formula,
    secna_dof_formula,
)
from .signals import (
    Scenario,
    SnapshotMatrix,
    extend_snapshots,
    gen_snapshots,
    gen_sources,
    noise_power_from_snr_db,
    steering_matrix,
    steering_vector,
)

__version__ = "0.1.0"
