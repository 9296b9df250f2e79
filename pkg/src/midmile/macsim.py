"""Slotted listen-before-talk MAC evaluation of a channel allocation.

Channels are orthogonal, so each is simulated independently by the event
kernel and the per-eNB bit counts are summed. Within a transmit
opportunity an eNB's airtime is split equally among its CPEs: with
saturated identical traffic, static channels and stationary CPEs,
proportional-fair scheduling degenerates to an equal time share, so the
per-eNB throughput is the mean CPE rate times the transmit duty.

The two reference coexistence schemes are expressed as allocations and
reuse the same machinery: "no coexistence" is every channel dedicated to
every eNB (continuous transmission, interference limited), "full LBT" is
every channel shared by every eNB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import propagation
from .errors import ValidationError
from .fcca import jfi
from .kernel import derive_seed, simulate_channel
from .model import (
    Allocation,
    ChannelPlan,
    InterferenceMatrix,
    SubAlgorithm,
    ThroughputReport,
    Topology,
)


@dataclass(frozen=True)
class MacConfig:
    """Slot-level MAC parameters for the LBT simulation."""

    slot_us: float = 9.0
    txop_ms: float = 10.0
    sim_time_s: float = 30.0
    contention_window_slots: int = 16
    rng_seed: int = 1

    def __post_init__(self) -> None:
        if self.slot_us <= 0 or self.txop_ms <= 0 or self.sim_time_s <= 0:
            raise ValidationError("slot, TxOp and simulation time must be positive")
        if self.contention_window_slots < 1:
            raise ValidationError("contention window must be >= 1 slot")
        if self.txop_ms * 1000.0 < 10.0 * self.slot_us:
            raise ValidationError("TxOp must dwarf the slot time")
        if self.sim_time_s * 1000.0 < 100.0 * self.txop_ms:
            raise ValidationError("simulation must cover at least 100 TxOps")

    @property
    def slot_s(self) -> float:
        return self.slot_us * 1e-6

    @property
    def sim_slots(self) -> int:
        return int(round(self.sim_time_s * 1e6 / self.slot_us))

    @property
    def txop_slots(self) -> int:
        return max(1, int(round(self.txop_ms * 1000.0 / self.slot_us)))


def _received_power_mw(topology: Topology) -> tuple[np.ndarray, list[int]]:
    """rx_mw[j, k, i]: power from eNB j at CPE i of eNB k, in milliwatts."""
    radio = topology.radio
    k_total = topology.n_enb
    l_counts = [len(c) for c in topology.cpe_positions]
    l_max = max(l_counts)
    rx = np.zeros((k_total, k_total, l_max), dtype=np.float64)
    for k in range(k_total):
        for i, cpe in enumerate(topology.cpe_positions[k]):
            for j, enb in enumerate(topology.enb_positions):
                d = math.dist(enb, cpe)
                rx[j, k, i] = propagation.dbm_to_mw(propagation.received_power(radio, d))
    return rx, l_counts


def make_report(
    per_enb_bps,
    plan: ChannelPlan,
    sub_algorithm: SubAlgorithm = SubAlgorithm.NA,
) -> ThroughputReport:
    t = tuple(float(x) for x in per_enb_bps)
    return ThroughputReport(
        per_enb_bps=t,
        jfi=jfi(t),
        spectral_efficiency_bps_hz=tuple(x / plan.total_band_hz for x in t),
        sub_algorithm_used=sub_algorithm,
    )


def evaluate(
    topology: Topology,
    alloc: Allocation,
    c: InterferenceMatrix,
    plan: ChannelPlan,
    mac: MacConfig,
    trace: list | None = None,
) -> ThroughputReport:
    """Simulate every channel of an allocation and report per-eNB throughput.

    ``trace``, if a list, collects (channel, start_slot, end_slot,
    transmitter indices) occupancy intervals (forces the Python kernel).
    """
    k_total = topology.n_enb
    if alloc.channel_matrix.shape != (k_total, plan.num_channels):
        raise ValidationError(
            f"allocation shape {alloc.channel_matrix.shape} does not match "
            f"K={k_total}, M={plan.num_channels}"
        )
    if c.size != k_total:
        raise ValidationError("interference matrix size does not match topology")
    if any(len(cpes) < 1 for cpes in topology.cpe_positions):
        raise ValidationError("every eNB needs at least one CPE")
    if mac.sim_slots < 1:
        raise ValidationError("zero-length simulation")

    rx_mw, l_counts = _received_power_mw(topology)
    noise_mw = propagation.dbm_to_mw(
        propagation.noise_floor_dbm(plan.channel_bandwidth_hz, topology.radio.noise_figure_db)
    )
    sim_s = mac.sim_slots * mac.slot_s
    bits_total = np.zeros(k_total, dtype=np.float64)

    for m in range(plan.num_channels):
        holders = np.nonzero(alloc.channel_matrix[:, m])[0]
        nh = len(holders)
        if nh == 0:
            continue
        modes = alloc.mode_matrix[holders, m].astype(np.uint8)
        adj_masks = np.zeros(nh, dtype=np.uint64)
        for a_idx, k in enumerate(holders):
            mask = 0
            for b_idx, j in enumerate(holders):
                if a_idx != b_idx and c.entries[k, j]:
                    mask |= 1 << b_idx
            adj_masks[a_idx] = mask
        lc = np.asarray([l_counts[k] for k in holders], dtype=np.int64)
        sig = np.ascontiguousarray(rx_mw[holders, holders, :])
        intf = np.ascontiguousarray(rx_mw[np.ix_(holders, holders)])

        chan_trace: list | None = [] if trace is not None else None
        _, bits = simulate_channel(
            modes, adj_masks, lc, sig, intf, noise_mw,
            plan.channel_bandwidth_hz, propagation.SE_CAP_BPS_HZ,
            mac.sim_slots, mac.txop_slots, mac.contention_window_slots,
            derive_seed(mac.rng_seed, m), mac.slot_s, trace=chan_trace,
        )
        bits_total[holders] += bits
        if trace is not None:
            for t0, t1, mask in chan_trace:
                txers = tuple(int(holders[h]) for h in range(nh) if (mask >> h) & 1)
                trace.append((m, t0, t1, txers))

    return make_report(bits_total / sim_s, plan)


def baseline_no_coexistence(
    topology: Topology,
    c: InterferenceMatrix,
    plan: ChannelPlan,
    mac: MacConfig,
) -> ThroughputReport:
    """Whole band used by every eNB continuously; no sensing, no backoff."""
    shape = (topology.n_enb, plan.num_channels)
    alloc = Allocation(np.ones(shape, dtype=np.uint8), np.zeros(shape, dtype=np.uint8))
    return evaluate(topology, alloc, c, plan, mac)


def baseline_full_lbt(
    topology: Topology,
    c: InterferenceMatrix,
    plan: ChannelPlan,
    mac: MacConfig,
) -> ThroughputReport:
    """Whole band shared by every eNB through LBT contention."""
    shape = (topology.n_enb, plan.num_channels)
    ones = np.ones(shape, dtype=np.uint8)
    return evaluate(topology, Allocation(ones, ones.copy()), c, plan, mac)


def analytic_clique_share(n: int, mac: MacConfig) -> float:
    """Expected per-eNB airtime fraction on one channel shared by an n-clique.

    Closed form only exists for complete contention graphs: transmissions
    serialize, so each member gets one TxOp per cycle of n TxOps plus the
    expected backoff gap (CW-1)/2 slots shrunk by the n concurrent
    countdowns. Used as a validation oracle for the event kernel, not in
    the evaluation path.
    """
    if n < 1:
        raise ValidationError("clique size must be >= 1")
    txop_s = mac.txop_slots * mac.slot_s
    e_gap_s = (mac.contention_window_slots - 1) / 2.0 * mac.slot_s / n
    return txop_s / (n * txop_s + e_gap_s)


def simulate_clique_airtime(n: int, mac: MacConfig) -> np.ndarray:
    """Per-eNB airtime fractions from the event kernel on an n-clique."""
    if n < 1:
        raise ValidationError("clique size must be >= 1")
    modes = np.ones(n, dtype=np.uint8)
    full = (1 << n) - 1
    adj = np.asarray([full ^ (1 << h) for h in range(n)], dtype=np.uint64)
    lc = np.ones(n, dtype=np.int64)
    sig = np.ones((n, 1), dtype=np.float64)
    intf = np.zeros((n, n, 1), dtype=np.float64)
    airtime, _ = simulate_channel(
        modes, adj, lc, sig, intf, 1.0, 1.0, 1.0,
        mac.sim_slots, mac.txop_slots, mac.contention_window_slots,
        derive_seed(mac.rng_seed, 0), mac.slot_s,
    )
    return airtime / mac.sim_slots


def with_seed(mac: MacConfig, seed: int) -> MacConfig:
    return replace(mac, rng_seed=seed)
