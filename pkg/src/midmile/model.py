"""Domain types for the middle-mile network: radios, topologies, allocations.

All types are immutable after construction (frozen dataclasses with
read-only numpy buffers) and safe to share across worker processes.
Distances are kilometers, powers dBm, gains/losses dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ValidationError

Point = tuple[float, float]

# Validity window of the empirical path-loss model used throughout.
HATA_FREQ_RANGE_MHZ = (150.0, 1500.0)


class SubAlgorithm(Enum):
    """Which allocation sub-algorithm produced a throughput report."""

    MDCA = "MDCA"
    ODRS_CA = "ODRS_CA"
    NA = "N/A"


@dataclass(frozen=True)
class RadioParams:
    """Link-budget inputs common to every eNB/CPE pair in a deployment."""

    tx_power_dbm: float = 18.0
    tx_gain_db: float = 10.0
    rx_gain_db: float = 0.0
    cable_loss_db: float = 2.0
    noise_figure_db: float = 7.0
    tx_height_m: float = 30.0
    rx_height_m: float = 5.0
    center_freq_mhz: float = 500.0
    rx_sensitivity_dbm: float = -101.0

    def __post_init__(self) -> None:
        if not self.tx_height_m > self.rx_height_m > 0:
            raise ValidationError(
                f"antenna heights must satisfy tx > rx > 0, got "
                f"tx={self.tx_height_m} rx={self.rx_height_m}"
            )
        lo, hi = HATA_FREQ_RANGE_MHZ
        if not lo <= self.center_freq_mhz <= hi:
            raise ValidationError(
                f"center_freq_mhz={self.center_freq_mhz} outside Hata "
                f"validity range [{lo}, {hi}] MHz"
            )
        for name in ("cable_loss_db", "noise_figure_db"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ChannelPlan:
    """The orthogonal channel grid managed by the spectrum manager."""

    num_channels: int = 4
    channel_bandwidth_hz: float = 5e6
    channel_center_freqs_mhz: tuple[float, ...] = (502.5, 507.5, 512.5, 517.5)

    def __post_init__(self) -> None:
        if self.num_channels < 1:
            raise ValidationError("num_channels must be >= 1")
        if len(self.channel_center_freqs_mhz) != self.num_channels:
            raise ValidationError(
                f"expected {self.num_channels} channel center frequencies, "
                f"got {len(self.channel_center_freqs_mhz)}"
            )
        centers = sorted(self.channel_center_freqs_mhz)
        min_gap_mhz = self.channel_bandwidth_hz / 1e6 - 1e-9
        for a, b in zip(centers, centers[1:]):
            if b - a < min_gap_mhz:
                raise ValidationError(
                    f"channels at {a} and {b} MHz overlap for bandwidth "
                    f"{self.channel_bandwidth_hz / 1e6} MHz"
                )

    @property
    def total_band_hz(self) -> float:
        return self.num_channels * self.channel_bandwidth_hz


@dataclass(frozen=True)
class Topology:
    """eNB and CPE site coordinates inside a square deployment area."""

    area_km: float
    enb_positions: tuple[Point, ...]
    cpe_positions: tuple[tuple[Point, ...], ...]
    radio: RadioParams

    def __post_init__(self) -> None:
        if self.area_km <= 0:
            raise ValidationError("area_km must be positive")
        if len(self.enb_positions) < 1:
            raise ValidationError("topology needs at least one eNB")
        if len(self.cpe_positions) != len(self.enb_positions):
            raise ValidationError(
                "cpe_positions must hold one CPE list per eNB"
            )

    @property
    def n_enb(self) -> int:
        return len(self.enb_positions)


@dataclass(frozen=True)
class InterferenceMatrix:
    """Binary symmetric adjacency of the protocol interference model."""

    size: int
    entries: np.ndarray
    threshold_km: float

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=np.uint8)
        if e.shape != (self.size, self.size):
            raise ValidationError(f"entries must be {self.size}x{self.size}")
        if not np.array_equal(e, e.T):
            raise ValidationError("interference matrix must be symmetric")
        if np.any(np.diag(e) != 0):
            raise ValidationError("interference matrix diagonal must be zero")
        if not np.isin(e, (0, 1)).all():
            raise ValidationError("interference matrix entries must be 0/1")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def degree(self, k: int) -> int:
        return int(self.entries[k].sum())

    def max_degree(self) -> int:
        return int(self.entries.sum(axis=1).max())


@dataclass(frozen=True)
class Allocation:
    """Channel assignment (A) plus per-channel access mode (B).

    channel_matrix[k][m] = 1 iff channel m is granted to eNB k;
    mode_matrix[k][m] = 1 marks that grant as shared (contention via LBT),
    0 marks it dedicated. A shared mark requires the grant to exist.
    """

    channel_matrix: np.ndarray
    mode_matrix: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.channel_matrix, dtype=np.uint8)
        b = np.asarray(self.mode_matrix, dtype=np.uint8)
        if a.ndim != 2 or a.shape != b.shape:
            raise ValidationError("A and B must be 2-D with identical shape")
        for name, m in (("channel_matrix", a), ("mode_matrix", b)):
            if not np.isin(m, (0, 1)).all():
                raise ValidationError(f"{name} entries must be 0/1")
        if np.any(b > a):
            raise ValidationError("mode_matrix marks a channel that is not allocated")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "channel_matrix", a)
        object.__setattr__(self, "mode_matrix", b)

    @property
    def n_enb(self) -> int:
        return self.channel_matrix.shape[0]

    @property
    def n_channels(self) -> int:
        return self.channel_matrix.shape[1]


@dataclass(frozen=True)
class ThroughputReport:
    """Per-eNB downlink throughput with fairness and efficiency metrics."""

    per_enb_bps: tuple[float, ...]
    jfi: float
    spectral_efficiency_bps_hz: tuple[float, ...]
    sub_algorithm_used: SubAlgorithm = SubAlgorithm.NA

    def __post_init__(self) -> None:
        if any(t < 0 for t in self.per_enb_bps):
            raise ValidationError("throughputs must be non-negative")
        k = len(self.per_enb_bps)
        if len(self.spectral_efficiency_bps_hz) != k:
            raise ValidationError("spectral efficiency vector length mismatch")
        total = sum(self.per_enb_bps)
        if total == 0:
            raise ValidationError("fairness undefined for an all-zero throughput vector")
        expected = total * total / (k * sum(t * t for t in self.per_enb_bps))
        if not math.isclose(self.jfi, expected, rel_tol=1e-9, abs_tol=1e-12):
            raise ValidationError(
                f"jfi={self.jfi} inconsistent with throughput vector "
                f"(expected {expected})"
            )


def default_radio() -> RadioParams:
    """Reference radio configuration for the rural TV-UHF scenario."""
    return RadioParams()


def default_plan() -> ChannelPlan:
    """Reference 20 MHz band split into 4 orthogonal 5 MHz channels."""
    return ChannelPlan()


def _in_area(p: Point, area_km: float) -> bool:
    return 0.0 <= p[0] <= area_km and 0.0 <= p[1] <= area_km


def validate_topology(
    t: Topology,
    plan: ChannelPlan,
    threshold_km: float = 4.0,
) -> list[str]:
    """Check a topology against its invariants and coloring feasibility.

    Returns a list of human-readable violations; an empty list means the
    topology is valid. The degree check is strict (degree <= M - 1) so that
    greedy multi-coloring always has a feasible channel for every eNB.
    """
    from . import conflict, propagation  # local import: avoids a module cycle

    violations: list[str] = []
    for k, p in enumerate(t.enb_positions):
        if not _in_area(p, t.area_km):
            violations.append(f"eNB {k} position {p} outside area")

    radius = propagation.coverage_radius(t.radio)
    for k, cpes in enumerate(t.cpe_positions):
        enb = t.enb_positions[k]
        for i, p in enumerate(cpes):
            if not _in_area(p, t.area_km):
                violations.append(f"CPE {k}.{i} position {p} outside area")
            d = math.dist(enb, p)
            if d > radius + 1e-9:
                violations.append(
                    f"CPE {k}.{i} at {d:.3f} km exceeds coverage radius "
                    f"{radius:.3f} km of eNB {k}"
                )

    c = conflict.build_interference_matrix(t.enb_positions, threshold_km)
    for k in range(t.n_enb):
        deg = c.degree(k)
        if deg > plan.num_channels - 1:
            violations.append(
                f"eNB {k} degree {deg} >= num_channels {plan.num_channels}; "
                f"greedy coloring infeasible"
            )
    return violations


def positions_array(points: Sequence[Point]) -> np.ndarray:
    """Positions as an (N, 2) float array, convenient for distance math."""
    return np.asarray(points, dtype=np.float64).reshape(len(points), 2)
