"""Exact integer co-array algebra.

Sum co-array (SCA), difference co-array (DCA), their union (SDCA), weight
functions, contiguous-segment (DOF) and aperture (VAA) analysis, and the
lag-selection map that turns a vectorized extended covariance into a
virtual-ULA measurement.

Everything here is exact set/multiset arithmetic on integer lags; no
floating-point tolerance is involved.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvariantViolation, ParameterError
from .geometry import SensorArray

__all__ = [
    "LagSet",
    "VirtualULA",
    "diff_coarray",
    "sum_coarray",
    "sdca",
    "max_contiguous_segment",
    "vaa",
    "build_virtual_ula",
]


@dataclass(frozen=True)
class LagSet:
    """A co-array: map from integer lag to its multiplicity (weight).

    Weights count generating ordered sensor pairs, so they double as the
    redundancy diagnostics of the array. Lag sets built by this module are
    symmetric: weight(l) == weight(-l).
    """

    weights: dict

    def __post_init__(self):
        if not self.weights:
            raise ParameterError("a lag set cannot be empty")

    @property
    def support(self) -> tuple:
        return tuple(sorted(self.weights))

    def weight(self, lag: int) -> int:
        return self.weights.get(lag, 0)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.weights.values())


def _exact_int_lags(values: np.ndarray) -> np.ndarray:
    lags = np.rint(values)
    if not np.array_equal(lags, values):
        raise InvariantViolation("co-array lag fell off the integer grid")
    return lags.astype(np.int64)


def diff_coarray(arr: SensorArray) -> LagSet:
    """Difference co-array: weight(l) = #{(i, j) : w_i - w_j = l}.

    Ordered pairs, i == j included, so multiplicities total M^2.
    """
    w = arr.as_array()
    lags = _exact_int_lags((w[:, None] - w[None, :]).ravel())
    vals, counts = np.unique(lags, return_counts=True)
    return LagSet({int(v): int(c) for v, c in zip(vals, counts)})


def sum_coarray(arr: SensorArray) -> LagSet:
    """Sum co-array: pair sums mirrored to both signs.

    weight(l) = #{(i, j) : w_i + w_j = |l|} over ordered pairs (i == j
    allowed). The mirror makes the set symmetric; lag 0 appears only if
    some pair of positions sums to zero.
    """
    w = arr.as_array()
    sums = _exact_int_lags((w[:, None] + w[None, :]).ravel())
    vals, counts = np.unique(sums, return_counts=True)
    weights = {}
    for v, c in zip(vals, counts):
        weights[int(v)] = weights.get(int(v), 0) + int(c)
        if v != 0:
            weights[-int(v)] = weights.get(-int(v), 0) + int(c)
    return LagSet(weights)


def sdca(arr: SensorArray) -> LagSet:
    """Sum-difference co-array: union of supports, multiplicities added."""
    d = diff_coarray(arr).weights
    s = sum_coarray(arr).weights
    merged = dict(d)
    for lag, c in s.items():
        merged[lag] = merged.get(lag, 0) + c
    return LagSet(merged)


def max_contiguous_segment(lags: LagSet):
    """The maximal run of consecutive lags containing 0.

    Returns ``(lo, hi, dof)`` with dof = hi - lo + 1. Lag 0 must be in the
    support; for the symmetric lag sets produced here, lo == -hi.
    """
    support = set(lags.weights)
    if 0 not in support:
        raise ParameterError("lag 0 not in support; contiguous segment undefined")
    hi = 0
    while hi + 1 in support:
        hi += 1
    lo = 0
    while lo - 1 in support:
        lo -= 1
    return lo, hi, hi - lo + 1


def vaa(lags: LagSet) -> int:
    """Virtual array aperture: max(support) - min(support)."""
    support = lags.support
    return int(support[-1] - support[0])


@dataclass(frozen=True)
class VirtualULA:
    """The contiguous virtual ULA carved out of an array's SDCA.

    ``selection`` maps each lag l in -L..L to the ascending tuple of flat
    indices (column-major over the 2M x 2M extended covariance) whose
    conjugate-augmented position difference equals l. It is the sparse
    representation of the selection matrix that reorders vec(R) into the
    virtual measurement; entry counts per lag are the redundancies that
    get averaged.
    """

    half_length: int
    selection: dict
    n_sensors: int

    @property
    def length(self) -> int:
        """Number of virtual elements, 2L + 1 (always odd)."""
        return 2 * self.half_length + 1

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.half_length, self.half_length + 1)


@lru_cache(maxsize=64)
def _virtual_ula_cached(positions: tuple) -> VirtualULA:
    w = np.array(positions, dtype=float)
    m = len(w)
    signed = np.concatenate([w, -w])
    lag = _exact_int_lags(signed[:, None] - signed[None, :])
    support = set(lag.ravel().tolist())
    half = 0
    while half + 1 in support:
        half += 1
    flat = lag.ravel(order="F")  # flat index a + 2M*b for entry (a, b)
    selection = {}
    for l in range(-half, half + 1):
        idx = np.flatnonzero(flat == l)
        selection[l] = tuple(int(i) for i in idx)
    return VirtualULA(half_length=half, selection=selection, n_sensors=m)


def build_virtual_ula(arr: SensorArray) -> VirtualULA:
    """Build the virtual ULA and lag-selection map for ``arr``.

    Works on the signed position multiset (+w_1..+w_M, -w_1..-w_M) that the
    conjugate-augmented snapshot model induces, so the lag multiset is the
    SDCA with full 4M^2 bookkeeping: difference lags appear twice (once per
    conjugate block) and sum lags once per sign.
    """
    return _virtual_ula_cached(arr.positions)
