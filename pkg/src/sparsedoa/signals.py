"""Synthetic non-circular narrowband snapshot generation.

Sources are maximally non-circular: real zero-mean Gaussian amplitudes
rotated by a per-source phase factor exp(-j*phi_q), so the pseudo
covariance is nonzero and the conjugate-augmented model gains the sum
co-array. Noise is circular complex white Gaussian.

SNR convention used throughout the package: SNR(dB) = 10*log10(p/sigma_n^2)
for unit source powers p = 1, i.e. ``noise_power_from_snr_db``.

Reproducibility: every draw is derived from ``Scenario.seed`` alone.
Sources and noise use separate counter-derived streams, so
``gen_sources`` and ``gen_snapshots`` agree on the source waveforms for
the same scenario, and concurrent trials with distinct seeds never share
state.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .geometry import SensorArray

__all__ = [
    "Scenario",
    "SnapshotMatrix",
    "steering_vector",
    "steering_matrix",
    "gen_sources",
    "gen_snapshots",
    "extend_snapshots",
    "noise_power_from_snr_db",
]

_SOURCE_STREAM = 0
_NOISE_STREAM = 1


def noise_power_from_snr_db(snr_db: float) -> float:
    """Noise power giving the requested SNR against unit source power."""
    return float(10.0 ** (-snr_db / 10.0))


@dataclass(frozen=True)
class Scenario:
    """One fully specified simulation draw.

    Angles in degrees, strictly inside (-90, 90). ``powers`` are the
    per-source variances, ``nc_phases`` the non-circularity phases in
    radians (default zero, which keeps the sum-lag covariance entries
    phase-aligned with the difference lags). ``seed`` is an unsigned
    64-bit master seed for this draw.
    """

    angles_deg: tuple
    powers: tuple = None
    nc_phases: tuple = None
    noise_power: float = 0.0
    snapshots: int = 1
    seed: int = 0

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles_deg)
        if len(angles) == 0:
            raise ParameterError("scenario needs at least one source")
        if any(abs(a) >= 90.0 for a in angles):
            raise ParameterError("source angles must lie strictly inside (-90, 90) degrees")
        powers = self.powers
        powers = tuple(1.0 for _ in angles) if powers is None else tuple(float(p) for p in powers)
        phases = self.nc_phases
        phases = tuple(0.0 for _ in angles) if phases is None else tuple(float(p) for p in phases)
        if not (len(angles) == len(powers) == len(phases)):
            raise ParameterError("angles, powers and nc_phases must have equal lengths")
        if any(p < 0 for p in powers):
            raise ParameterError("source powers must be non-negative")
        if self.noise_power < 0:
            raise ParameterError("noise power must be non-negative")
        if self.snapshots < 1:
            raise ParameterError("snapshot count must be at least 1")
        if not (0 <= int(self.seed) < 2**64):
            raise ParameterError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "angles_deg", angles)
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "nc_phases", phases)
        object.__setattr__(self, "noise_power", float(self.noise_power))
        object.__setattr__(self, "snapshots", int(self.snapshots))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def n_sources(self) -> int:
        return len(self.angles_deg)


@dataclass(frozen=True, eq=False)
class SnapshotMatrix:
    """Complex snapshots, rows = sensors (M, or 2M once extended)."""

    data: np.ndarray
    array: SensorArray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.ndim != 2:
            raise ParameterError("snapshot data must be a 2-D matrix")
        m = self.array.size
        if data.shape[0] not in (m, 2 * m):
            raise ParameterError(
                f"snapshot rows ({data.shape[0]}) must equal M={m} or 2M={2 * m}"
            )
        if data.shape[1] < 1:
            raise ParameterError("need at least one snapshot")
        object.__setattr__(self, "data", data)

    @property
    def n_snapshots(self) -> int:
        return self.data.shape[1]

    @property
    def is_extended(self) -> bool:
        return self.data.shape[0] == 2 * self.array.size


def steering_vector(arr: SensorArray, theta_deg: float) -> np.ndarray:
    """Unit-modulus steering vector exp(j*pi*w_i*sin(theta)).

    Positions are in half-wavelength units, so the canonical pi-per-unit
    phase gradient applies directly.
    """
    if abs(theta_deg) >= 90.0:
        raise ParameterError(f"angle {theta_deg} out of range (-90, 90)")
    return np.exp(1j * np.pi * arr.as_array() * np.sin(np.deg2rad(theta_deg)))


def steering_matrix(arr: SensorArray, angles_deg) -> np.ndarray:
    """M x Q manifold matrix with one steering vector per column."""
    angles = np.asarray(list(angles_deg), dtype=float)
    if angles.size and np.max(np.abs(angles)) >= 90.0:
        raise ParameterError("all angles must lie strictly inside (-90, 90)")
    return np.exp(1j * np.pi * np.outer(arr.as_array(), np.sin(np.deg2rad(angles))))


def gen_sources(scn: Scenario):
    """Draw the real source amplitude matrix and the phase diagonal.

    Returns ``(s_r, psi)``: ``s_r`` is Q x T real Gaussian with row
    variances equal to ``scn.powers``; ``psi`` is the length-Q diagonal
    exp(-j*phi_q) applied to form the non-circular sources psi * s_r.
    """
    rng = np.random.default_rng([scn.seed, _SOURCE_STREAM])
    std = np.sqrt(np.asarray(scn.powers, dtype=float))[:, None]
    s_r = std * rng.standard_normal((scn.n_sources, scn.snapshots))
    psi = np.exp(-1j * np.asarray(scn.nc_phases, dtype=float))
    return s_r, psi


def gen_snapshots(arr: SensorArray, scn: Scenario) -> SnapshotMatrix:
    """Simulate X = A * Psi * S_R + E for ``arr`` under ``scn``.

    Noise is circular complex Gaussian with per-element variance
    ``scn.noise_power`` (half in each quadrature); its stream is separate
    from the source stream, so the source draw matches ``gen_sources``.
    """
    s_r, psi = gen_sources(scn)
    a = steering_matrix(arr, scn.angles_deg)
    x = (a * psi[None, :]) @ s_r
    if scn.noise_power > 0:
        rng = np.random.default_rng([scn.seed, _NOISE_STREAM])
        scale = np.sqrt(scn.noise_power / 2.0)
        x = x + scale * (
            rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
        )
    return SnapshotMatrix(data=x, array=arr)


def extend_snapshots(x: SnapshotMatrix) -> SnapshotMatrix:
    """Stack the snapshots over their conjugate: rows become (X; X*)."""
    if x.is_extended:
        raise ParameterError("snapshot matrix is already extended")
    return SnapshotMatrix(data=np.vstack([x.data, x.data.conj()]), array=x.array)
