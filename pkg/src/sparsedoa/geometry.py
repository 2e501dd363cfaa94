"""Physical sensor geometries and closed-form DOF expressions.

Positions are expressed in units of the fundamental spacing d = lambda/2.
All positions of one array live on a common half-unit grid: either every
position is an integer, or every position is an odd multiple of 1/2. The
second case arises for the sliding extended coprime nested array (SECNA)
when m + n is odd, where the slide S = (m + n)^2 / 2 is half-integral.
Either way all pairwise sums and differences - the co-array lags - are
exact integers, which is what the virtual-array algebra requires.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import ParameterError

__all__ = [
    "CoprimePair",
    "SensorArray",
    "SecnaDesign",
    "build_secna",
    "build_nested",
    "build_ula",
    "secna_dof_formula",
    "esna_dof_formula",
    "rsna1_dof_formula",
    "rsna2_dof_formula",
    "best_coprime_pair",
]


def _grid_value(x):
    """Normalize a position to int when integral, float otherwise."""
    f = Fraction(x)
    if f.denominator == 1:
        return int(f)
    return float(f)


@dataclass(frozen=True)
class CoprimePair:
    """A coprime parameter pair (m, n), both at least 1."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ParameterError(f"coprime pair needs m, n >= 1, got ({self.m}, {self.n})")
        if gcd(self.m, self.n) != 1:
            raise ParameterError(f"({self.m}, {self.n}) is not a coprime pair")


@dataclass(frozen=True)
class SensorArray:
    """A 1-D sparse array: sorted sensor positions plus design provenance.

    ``positions`` is a strictly increasing tuple of non-negative values on
    the half-unit grid (all integers, or all half-odd-integers). ``design``
    names the generating construction and ``params`` its parameters; both
    feed the JSON wire format ``{design, params, positions}``.
    """

    positions: tuple
    design: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.positions) == 0:
            raise ParameterError("sensor array must contain at least one position")
        doubled = []
        for p in self.positions:
            f = 2 * Fraction(p)
            if f.denominator != 1:
                raise ParameterError(f"position {p} is not a multiple of 1/2")
            doubled.append(int(f))
        if doubled[0] < 0:
            raise ParameterError("positions must be non-negative")
        if any(a >= b for a, b in zip(doubled, doubled[1:])):
            raise ParameterError("positions must be strictly increasing with no duplicates")
        parities = {d % 2 for d in doubled}
        if len(parities) != 1:
            raise ParameterError(
                "positions must share one grid: all integers or all half-odd-integers"
            )
        object.__setattr__(
            self, "positions", tuple(_grid_value(Fraction(d, 2)) for d in doubled)
        )

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def design_tag(self) -> str:
        """Compact label such as ``secna(m=3, n=4)``, used in reports."""
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.design}({inner})"

    def as_array(self) -> np.ndarray:
        """Positions as a float vector (exact: all values are dyadic)."""
        return np.array(self.positions, dtype=float)

    def translated(self, offset) -> "SensorArray":
        """The same geometry shifted by ``offset`` grid units."""
        moved = tuple(_grid_value(Fraction(p) + Fraction(offset)) for p in self.positions)
        return SensorArray(moved, self.design, dict(self.params, translated=offset))

    def to_json_dict(self) -> dict:
        return {
            "design": self.design,
            "params": dict(self.params),
            "positions": list(self.positions),
        }


@dataclass(frozen=True)
class SecnaDesign:
    """A SECNA instance: the coprime pair, the slide, and the three subarrays."""

    pair: CoprimePair
    slide: float
    subarrays: tuple
    array: SensorArray


def build_secna(pair: CoprimePair) -> SecnaDesign:
    """Construct the sliding extended coprime nested array for ``pair``.

    The three subarrays, all translated by the slide S = (m + n)^2 / 2, are

        Array(1) = {S + n*k : k = 0..m-1}
        Array(2) = {S + m*k : k = 0..n}
        Array(3) = {S + m*n + (m+n)*k : k = 1..m+n-1}

    totalling 2(m + n) - 1 sensors. S is kept exact: for odd m + n it is
    half-integral and the sensors sit on the lambda/4 grid, yet every
    co-array lag remains an integer because sums pick up 2S = (m + n)^2.
    The slide places the shifted sum co-array flush against the end of the
    difference co-array, which is what yields the closed-form DOF of
    ``secna_dof_formula`` (verified exhaustively by the brute-force
    co-array oracle in the test suite).
    """
    m, n = pair.m, pair.n
    s = Fraction((m + n) ** 2, 2)
    a1 = tuple(_grid_value(s + n * k) for k in range(m))
    a2 = tuple(_grid_value(s + m * k) for k in range(n + 1))
    a3 = tuple(_grid_value(s + m * n + (m + n) * k) for k in range(1, m + n))
    merged = sorted(set(a1) | set(a2) | set(a3))
    if len(merged) != 2 * (m + n) - 1:
        raise ParameterError(
            f"SECNA({m},{n}) produced {len(merged)} sensors, expected {2 * (m + n) - 1}"
        )
    arr = SensorArray(tuple(merged), design="secna", params={"m": m, "n": n})
    return SecnaDesign(pair=pair, slide=_grid_value(s), subarrays=(a1, a2, a3), array=arr)


def build_nested(n1: int, n2: int) -> SensorArray:
    """Standard two-level nested array {1..n1} union {(n1+1)*k : k = 1..n2}."""
    if n1 < 1 or n2 < 1:
        raise ParameterError(f"nested array needs n1, n2 >= 1, got ({n1}, {n2})")
    positions = sorted(set(range(1, n1 + 1)) | {(n1 + 1) * k for k in range(1, n2 + 1)})
    return SensorArray(tuple(positions), design="nested", params={"n1": n1, "n2": n2})


def build_ula(count: int) -> SensorArray:
    """Uniform linear array {0 .. count-1}."""
    if count < 1:
        raise ParameterError(f"ULA needs count >= 1, got {count}")
    return SensorArray(tuple(range(count)), design="ula", params={"count": count})


def secna_dof_formula(pair: CoprimePair) -> int:
    """Closed-form SDCA DOF of the SECNA: 4(m+n)^2 + 2mn - 1."""
    m, n = pair.m, pair.n
    return 4 * (m + n) ** 2 + 2 * m * n - 1


def esna_dof_formula(n1: int, n2: int) -> int:
    """Closed-form DOF of the extended sliding nested array.

    Evaluates 2*n1*n2 + 2*(n1+n2) - 2*J + 1 + 4*floor((n1*n2 + n2 + 2J)/2)
    with J = ceil(n1/2) - 1. Only the formula is provided; the physical
    construction is out of scope here.
    """
    if n1 < 1 or n2 < 1:
        raise ParameterError(f"ESNA formula needs n1, n2 >= 1, got ({n1}, {n2})")
    j = -(-n1 // 2) - 1
    return 2 * n1 * n2 + 2 * (n1 + n2) - 2 * j + 1 + 4 * ((n1 * n2 + n2 + 2 * j) // 2)


def rsna1_dof_formula(m1: int, m2: int) -> int:
    """Closed-form DOF of the type-I relocating sparse nested array."""
    if m1 < 1 or m2 < 1:
        raise ParameterError(f"RSNA-I formula needs m1, m2 >= 1, got ({m1}, {m2})")
    return 4 * m1 * m2 + 2 * (m1 + m2) + 1


def rsna2_dof_formula(m1: int, m2: int) -> int:
    """Closed-form DOF of the type-II relocating sparse nested array.

    Formula only; the geometry itself is out of scope, and the comparison
    table uses the type-I variant.
    """
    if m1 < 1 or m2 < 1:
        raise ParameterError(f"RSNA-II formula needs m1, m2 >= 1, got ({m1}, {m2})")
    parity = m1 % 2
    return 4 * m1 * m2 + 2 * m1 * (2 - parity) + 2 * m2 + 1 - parity


def best_coprime_pair(sensor_budget: int) -> CoprimePair:
    """The DOF-maximizing coprime pair for a SECNA of ``sensor_budget`` sensors.

    With 2(m+n) - 1 sensors fixed, the DOF formula grows with m*n, so the
    search maximizes the product over coprime pairs with m + n =
    (budget+1)/2; ties go to the smaller m.
    """
    if sensor_budget % 2 == 0:
        raise ParameterError(f"sensor budget must be odd, got {sensor_budget}")
    if sensor_budget < 5:
        raise ParameterError(f"no coprime pair fits a budget of {sensor_budget} sensors")
    total = (sensor_budget + 1) // 2
    best = None
    for m in range(1, total):
        n = total - m
        if gcd(m, n) == 1 and (best is None or m * n > best.m * best.n):
            best = CoprimePair(m, n)
    if best is None:
        raise ParameterError(f"no coprime pair with m + n = {total}")
    return best
