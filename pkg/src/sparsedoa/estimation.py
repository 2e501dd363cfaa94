"""Covariance-domain DOA pipeline for non-circular signals.

Pipeline order: extend snapshots with their conjugate, form the 2M x 2M
extended covariance, select and average vectorized entries into a virtual
ULA measurement, restore rank by forward spatial smoothing, then run
MUSIC on the smoothed matrix.

MUSIC here is the estimator for the smoothed virtual array; it stands in
for fancier sparse recovery back ends. ``SPARSE_ESTIMATORS`` is the hook
for registering one (e.g. an on-grid sparse solver); nothing in this
package requires it.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import find_peaks

from .coarray import VirtualULA, build_virtual_ula
from .errors import CapacityError, InvariantViolation, ParameterError
from .geometry import SensorArray
from .signals import SnapshotMatrix, extend_snapshots, steering_matrix

__all__ = [
    "ExtendedCovariance",
    "VirtualSnapshot",
    "SmoothedCovariance",
    "SpectrumResult",
    "extended_manifold",
    "analytic_covariance",
    "sample_covariance",
    "virtualize",
    "spatial_smoothing",
    "music_spectrum",
    "estimate_doa",
    "SPARSE_ESTIMATORS",
]

# Registry hook for alternative grid-based estimators operating on the
# smoothed covariance; maps name -> callable(rss, q, grid_step) -> SpectrumResult.
SPARSE_ESTIMATORS = {}


@dataclass(frozen=True, eq=False)
class ExtendedCovariance:
    """Hermitian 2M x 2M covariance of conjugate-augmented snapshots.

    ``snapshots_used`` records the averaging length T; 0 marks an analytic
    (expectation) matrix.
    """

    matrix: np.ndarray
    snapshots_used: int

    def __post_init__(self):
        r = np.asarray(self.matrix, dtype=complex)
        if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] % 2 != 0:
            raise ParameterError("extended covariance must be square with even size 2M")
        if not np.array_equal(r, r.conj().T):
            raise InvariantViolation("extended covariance is not Hermitian")
        object.__setattr__(self, "matrix", r)

    @property
    def n_sensors(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True, eq=False)
class VirtualSnapshot:
    """Virtual-ULA measurement vector indexed by lag -L..L."""

    values: np.ndarray
    source_ula: VirtualULA

    def value(self, lag: int) -> complex:
        half = self.source_ula.half_length
        if not -half <= lag <= half:
            raise ParameterError(f"lag {lag} outside [-{half}, {half}]")
        return complex(self.values[lag + half])


@dataclass(frozen=True, eq=False)
class SmoothedCovariance:
    """(L+1) x (L+1) Hermitian PSD matrix from forward spatial smoothing."""

    matrix: np.ndarray

    @property
    def subarray_size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Pseudo-spectrum on an angle grid plus the selected peaks.

    ``peaks`` holds at most ``requested`` grid angles, ascending;
    ``shortfall`` is set when fewer local maxima existed than requested.
    """

    grid: np.ndarray
    values: np.ndarray
    peaks: np.ndarray
    requested: int
    shortfall: bool


def extended_manifold(arr: SensorArray, angles_deg, nc_phases=None) -> np.ndarray:
    """Conjugate-augmented manifold: rows (A*Psi; conj(A*Psi)), shape 2M x Q."""
    a = steering_matrix(arr, angles_deg)
    if nc_phases is None:
        psi = np.ones(a.shape[1])
    else:
        psi = np.exp(-1j * np.asarray(list(nc_phases), dtype=float))
        if psi.shape[0] != a.shape[1]:
            raise ParameterError("nc_phases length must match the number of angles")
    top = a * psi[None, :]
    return np.vstack([top, top.conj()])


def analytic_covariance(
    arr: SensorArray, angles_deg, powers=None, noise_power: float = 0.0, nc_phases=None
) -> ExtendedCovariance:
    """Exact expected extended covariance A_nc diag(p) A_nc^H + sigma^2 I.

    This is the infinite-snapshot limit of ``sample_covariance`` and the
    independent oracle used to pin down the selection-map semantics.
    """
    angles = list(angles_deg)
    p = np.ones(len(angles)) if powers is None else np.asarray(list(powers), dtype=float)
    if p.shape[0] != len(angles):
        raise ParameterError("powers length must match the number of angles")
    if np.any(p < 0) or noise_power < 0:
        raise ParameterError("powers and noise power must be non-negative")
    b = extended_manifold(arr, angles, nc_phases)
    r = (b * p[None, :]) @ b.conj().T + noise_power * np.eye(b.shape[0])
    r = (r + r.conj().T) / 2.0
    cov = ExtendedCovariance(matrix=r, snapshots_used=0)
    _check_diagonal(cov)
    return cov


def _check_diagonal(cov: ExtendedCovariance):
    diag = np.diagonal(cov.matrix).real
    if diag.min() < -1e-12 * max(1.0, diag.max()):
        raise InvariantViolation("covariance diagonal has a negative entry")


def sample_covariance(x_nc: SnapshotMatrix) -> ExtendedCovariance:
    """(1/T) X_nc X_nc^H, symmetrized to kill rounding asymmetry."""
    if not x_nc.is_extended:
        raise ParameterError("sample covariance expects extended (2M-row) snapshots")
    t = x_nc.n_snapshots
    r = (x_nc.data @ x_nc.data.conj().T) / t
    r = (r + r.conj().T) / 2.0
    cov = ExtendedCovariance(matrix=r, snapshots_used=t)
    _check_diagonal(cov)
    return cov


def virtualize(r: ExtendedCovariance, v: VirtualULA) -> VirtualSnapshot:
    """Average the covariance entries of each lag into one virtual sample.

    Uses the column-major vectorization of the 2M x 2M matrix and the
    selection map of ``v``; averaging the redundant entries of a lag is
    one valid realization of the selection matrix and reduces variance.
    """
    if r.matrix.shape[0] != 2 * v.n_sensors:
        raise ParameterError(
            "virtual ULA was built for a different array size than this covariance"
        )
    z = r.matrix.ravel(order="F")
    half = v.half_length
    values = np.empty(v.length, dtype=complex)
    for lag in range(-half, half + 1):
        idx = np.asarray(v.selection[lag], dtype=np.intp)
        if idx.size == 0 or idx.max() >= z.size:
            raise InvariantViolation(f"selection map broken at lag {lag}")
        values[lag + half] = z[idx].mean()
    return VirtualSnapshot(values=values, source_ula=v)


def spatial_smoothing(z: VirtualSnapshot) -> SmoothedCovariance:
    """Forward spatial smoothing of the virtual measurement.

    Forms the L+1 overlapping subvectors v_i[k] = z(i - k), i, k = 0..L,
    and averages their outer products. The result is Hermitian PSD and,
    for a noise-free measurement from Q sources, has rank exactly Q.
    """
    half = z.source_ula.half_length
    vals = z.values
    # Subvector matrix B[k, i] = z(i - k) is Toeplitz: first column z(0..-L),
    # first row z(0..L).
    b = toeplitz(vals[half::-1], vals[half:])
    r = b @ b.conj().T / (half + 1)
    r = (r + r.conj().T) / 2.0
    return SmoothedCovariance(matrix=r)


@lru_cache(maxsize=16)
def _angle_grid(step: float) -> np.ndarray:
    """Symmetric grid k*step strictly inside (-90, 90)."""
    if step <= 0:
        raise ParameterError("grid step must be positive")
    kmax = int(np.floor(90.0 / step))
    while kmax * step >= 90.0:
        kmax -= 1
    grid = np.arange(-kmax, kmax + 1) * step
    grid.setflags(write=False)
    return grid


@lru_cache(maxsize=16)
def _virtual_steering(size: int, step: float) -> np.ndarray:
    """Steering matrix of the size-element virtual subarray over the grid.

    The smoothed subvectors read v_i[k] = z(i - k), so the subarray phase
    ramp runs as exp(-j*pi*k*sin(theta)).
    """
    grid = _angle_grid(step)
    a = np.exp(-1j * np.pi * np.outer(np.arange(size), np.sin(np.deg2rad(grid))))
    a.setflags(write=False)
    return a


def music_spectrum(rss: SmoothedCovariance, q: int, grid_step_deg: float = 0.1) -> SpectrumResult:
    """MUSIC pseudo-spectrum and peak picking on the smoothed covariance.

    The noise subspace is spanned by the eigenvectors of the
    ``subarray_size - q`` smallest eigenvalues (ascending ``eigh`` order,
    so ties break deterministically). Peaks are the ``q`` largest local
    maxima of 1/||E_n^H a(theta)||^2, reported in ascending angle order.
    """
    if q < 1:
        raise ParameterError("source count q must be at least 1")
    size = rss.subarray_size
    if q > size - 1:
        raise CapacityError(
            f"{q} sources exceed the capacity of a {size}-element smoothed array"
        )
    grid = _angle_grid(grid_step_deg)
    a = _virtual_steering(size, grid_step_deg)
    _, vec = np.linalg.eigh(rss.matrix)
    noise = vec[:, : size - q]
    proj = noise.conj().T @ a
    denom = np.einsum("ij,ij->j", proj.conj(), proj).real
    values = 1.0 / np.maximum(denom, np.finfo(float).tiny)
    # prominence floor: far below any genuine spectral structure, far above
    # the float wobble of a flat spectrum
    idx, _ = find_peaks(values, prominence=1e-12 * float(values.max()))
    shortfall = idx.size < q
    if not shortfall:
        idx = idx[np.argsort(values[idx])[-q:]]
    peaks = np.sort(grid[idx])
    return SpectrumResult(
        grid=grid, values=values, peaks=peaks, requested=q, shortfall=shortfall
    )


def estimate_doa(
    arr: SensorArray,
    x: SnapshotMatrix,
    q: int,
    grid_step_deg: float = 0.1,
    estimator: str = "music",
) -> SpectrumResult:
    """Full pipeline from raw M x T snapshots to estimated angles.

    ``estimator`` selects the back end applied to the smoothed covariance:
    the built-in ``"music"``, or any name registered in
    ``SPARSE_ESTIMATORS``.
    """
    if q < 1:
        raise ParameterError("source count q must be at least 1")
    if x.is_extended:
        raise ParameterError("estimate_doa expects raw (M-row) snapshots")
    if x.array.positions != arr.positions:
        raise ParameterError("snapshots were generated for a different array")
    if estimator == "music":
        back_end = music_spectrum
    elif estimator in SPARSE_ESTIMATORS:
        back_end = SPARSE_ESTIMATORS[estimator]
    else:
        raise ParameterError(f"unknown estimator '{estimator}'")
    v = build_virtual_ula(arr)
    r = sample_covariance(extend_snapshots(x))
    z = virtualize(r, v)
    rss = spatial_smoothing(z)
    return back_end(rss, q, grid_step_deg)
