"""Fairness-constrained channel allocation (FCCA).

Two candidate allocations are built from the conflict graph and the better
one is kept:

* MDCA (multiple dedicated channels): greedy graph multi-coloring run in
  rounds. Each round walks eNBs in index order and grants the lowest
  feasible channel as dedicated. The round loop continues only while every
  eNB still has a feasible channel at the start of the round; an eNB whose
  feasible set empties mid-round is skipped for that round.

* ODRS-CA (one dedicated, rest shared): a single greedy-coloring pass
  grants one dedicated channel per eNB, then every channel not dedicated
  within an eNB's closed neighborhood is granted in shared mode. Shared
  channels may be held by interfering neighbors simultaneously; LBT
  arbitrates them at MAC time.

Selection is gated on Jain's fairness index of the evaluated throughput:
candidates reaching the fairness threshold compete on sum throughput,
otherwise the fairer candidate wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .model import Allocation, ChannelPlan, InterferenceMatrix, SubAlgorithm

Evaluator = Callable[[Allocation], Sequence[float]]


@dataclass(frozen=True)
class FccaConfig:
    delta: float = 0.75
    plan: ChannelPlan = ChannelPlan()

    def __post_init__(self) -> None:
        if not 0.0 < self.delta <= 1.0:
            raise ValidationError(f"delta must be in (0, 1], got {self.delta}")


@dataclass(frozen=True)
class Candidate:
    """One sub-algorithm's allocation with its evaluated merit."""

    allocation: Allocation
    throughputs: tuple[float, ...]
    fairness: float

    @property
    def sum_throughput(self) -> float:
        return sum(self.throughputs)


@dataclass(frozen=True)
class FccaOutcome:
    chosen: Allocation
    chosen_sub_algorithm: SubAlgorithm
    candidate_mdca: Candidate
    candidate_odrs: Candidate
    selection_reason: str


def jfi(throughputs: Sequence[float]) -> float:
    """Jain's fairness index: (sum T)^2 / (K * sum T^2), in [1/K, 1]."""
    k = len(throughputs)
    if k < 1:
        raise ValidationError("need at least one throughput value")
    total = 0.0
    sumsq = 0.0
    for t in throughputs:
        if t < 0:
            raise ValidationError("throughputs must be non-negative")
        total += t
        sumsq += t * t
    if sumsq == 0.0:
        raise ValidationError("fairness undefined for an all-zero vector")
    return (total * total) / (k * sumsq)


def _check_degree(c: InterferenceMatrix, m: int) -> None:
    deg = c.max_degree()
    if deg > m - 1:
        raise ValidationError(
            f"conflict-graph degree {deg} >= num_channels {m}; "
            f"greedy coloring would strand an eNB"
        )


def mdca(c: InterferenceMatrix, m: int) -> Allocation:
    """Iterated greedy coloring; every grant is dedicated."""
    _check_degree(c, m)
    k_total = c.size
    neighbors = [np.nonzero(c.entries[k])[0] for k in range(k_total)]
    owned: list[set[int]] = [set() for _ in range(k_total)]
    all_channels = set(range(m))

    def feasible(k: int) -> set[int]:
        taken = set(owned[k])
        for j in neighbors[k]:
            taken |= owned[j]
        return all_channels - taken

    while all(feasible(k) for k in range(k_total)):
        for k in range(k_total):
            n_k = feasible(k)
            if not n_k:
                continue  # exhausted mid-round: skip until the round check
            owned[k].add(min(n_k))

    a = np.zeros((k_total, m), dtype=np.uint8)
    for k, chans in enumerate(owned):
        for q in chans:
            a[k, q] = 1
    return Allocation(channel_matrix=a, mode_matrix=np.zeros_like(a))


def odrs_ca(c: InterferenceMatrix, m: int) -> Allocation:
    """One dedicated channel each, then all locally-free channels shared."""
    _check_degree(c, m)
    k_total = c.size
    neighbors = [np.nonzero(c.entries[k])[0] for k in range(k_total)]
    all_channels = set(range(m))

    dedicated: list[int] = []
    for k in range(k_total):
        taken = {dedicated[j] for j in neighbors[k] if j < len(dedicated)}
        dedicated.append(min(all_channels - taken))

    a = np.zeros((k_total, m), dtype=np.uint8)
    b = np.zeros((k_total, m), dtype=np.uint8)
    for k in range(k_total):
        a[k, dedicated[k]] = 1
    for k in range(k_total):
        blocked = {dedicated[j] for j in neighbors[k]}
        blocked.add(dedicated[k])
        for q in all_channels - blocked:
            a[k, q] = 1
            b[k, q] = 1
    return Allocation(channel_matrix=a, mode_matrix=b)


def fcca(c: InterferenceMatrix, cfg: FccaConfig, evaluator: Evaluator) -> FccaOutcome:
    """Evaluate both sub-algorithms and pick per the fairness gate.

    The evaluator maps an allocation to a per-eNB throughput vector; tests
    may inject an analytic stub in place of the full MAC simulation.
    """
    m = cfg.plan.num_channels

    def build(maker) -> Candidate:
        alloc = maker(c, m)
        t = tuple(float(x) for x in evaluator(alloc))
        if len(t) != c.size:
            raise ValidationError(
                f"evaluator returned {len(t)} throughputs for K={c.size}"
            )
        return Candidate(allocation=alloc, throughputs=t, fairness=jfi(t))

    cand1 = build(mdca)
    cand2 = build(odrs_ca)
    f1, f2 = cand1.fairness, cand2.fairness
    d = cfg.delta

    if f1 >= d and f2 >= d:
        if cand1.sum_throughput > cand2.sum_throughput:
            pick, why = SubAlgorithm.MDCA, (
                f"both candidates meet delta={d}; MDCA has higher sum throughput"
            )
        else:
            pick, why = SubAlgorithm.ODRS_CA, (
                f"both candidates meet delta={d}; ODRS-CA has higher or equal sum throughput"
            )
    elif f1 >= d:
        pick, why = SubAlgorithm.MDCA, f"only MDCA meets delta={d} (F1={f1:.4f}, F2={f2:.4f})"
    elif f2 >= d:
        pick, why = SubAlgorithm.ODRS_CA, f"only ODRS-CA meets delta={d} (F1={f1:.4f}, F2={f2:.4f})"
    else:
        # Neither candidate reaches the gate; fall back to max fairness
        # (ties favor ODRS-CA, whose sharing degrades more gracefully).
        if f1 > f2:
            pick = SubAlgorithm.MDCA
        else:
            pick = SubAlgorithm.ODRS_CA
        why = (
            f"neither candidate meets delta={d} (F1={f1:.4f}, F2={f2:.4f}); "
            f"falling back to max fairness"
        )

    chosen = cand1 if pick is SubAlgorithm.MDCA else cand2
    return FccaOutcome(
        chosen=chosen.allocation,
        chosen_sub_algorithm=pick,
        candidate_mdca=cand1,
        candidate_odrs=cand2,
        selection_reason=why,
    )
