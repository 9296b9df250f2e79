"""Pure-Python LBT event kernel; reference twin of the compiled extension.

Simulates one channel over slotted time. Dedicated holders transmit
continuously (saturated traffic, back-to-back transmit opportunities).
Shared holders run listen-before-talk: one clear sensing slot, then a
uniform random backoff in [0, CW-1] slots that freezes whenever a
conflict-graph neighbor holding the channel is mid-TxOp, then one TxOp.

The loop is event-driven: state only changes when a TxOp starts or ends,
so the simulation jumps between those slots instead of stepping every
slot. Per active interval, every transmitting holder accrues airtime and
bits; the per-CPE rate uses SINR with interference summed in milliwatts
over all other concurrent transmitters (any distance, neighbors or not).

Simultaneous backoff completions among neighbors are resolved by a seeded
random capture: one wins, the rest keep a zero counter and re-sense. This
keeps carrier sensing exclusive within a neighborhood, so clique members
never overlap and per-clique airtime fractions sum to at most one.

The compiled twin (_lbtcore.pyx) mirrors this file statement for
statement; both draw from the same splitmix64 stream and order float
operations identically, so their outputs are bit-exact. Change them
together.
"""

from __future__ import annotations

from math import log2

import numpy as np

KERNEL_NAME = "python"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """Stateless 64-bit mix; used to derive independent seed streams."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *parts: int) -> int:
    """Deterministic sub-stream seed from a base seed and integer labels."""
    s = splitmix64(base & _MASK64)
    for p in parts:
        s = splitmix64(s ^ (p & _MASK64))
    return s


def simulate_channel(
    modes,
    adj_masks,
    l_counts,
    sig_mw,
    intf_mw,
    noise_mw: float,
    bw_hz: float,
    se_cap: float,
    sim_slots: int,
    txop_slots: int,
    cw: int,
    seed: int,
    slot_s: float,
    trace: list | None = None,
):
    """Run one channel; returns (airtime_slots int64[NH], bits float64[NH]).

    modes[h]=1 marks holder h shared, 0 dedicated. adj_masks[h] is the
    bitmask of h's conflict-graph neighbors over holder slots. sig_mw[h][i]
    and intf_mw[j][h][i] carry received powers in mW at holder h's CPE i
    (from its own eNB and from holder j's eNB). If ``trace`` is a list it
    receives (start_slot, end_slot, active_mask) occupancy intervals.
    """
    nh = len(modes)
    airtime = np.zeros(nh, dtype=np.int64)
    bits = np.zeros(nh, dtype=np.float64)
    if nh == 0 or sim_slots <= 0:
        return airtime, bits

    modes_l = [int(v) for v in modes]
    adj_l = [int(v) for v in adj_masks]
    lc = [int(v) for v in l_counts]
    sig = np.asarray(sig_mw, dtype=np.float64).tolist()
    intf = np.asarray(intf_mw, dtype=np.float64).tolist()
    air = [0] * nh
    acc_bits = [0.0] * nh

    s = seed & _MASK64

    def _below(n: int) -> int:
        nonlocal s
        s = (s + _GOLDEN) & _MASK64
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) % n

    def _rates(mask: int) -> list[float]:
        r = [0.0] * nh
        for k in range(nh):
            if not (mask >> k) & 1:
                continue
            sig_k = sig[k]
            acc = 0.0
            for i in range(lc[k]):
                denom = noise_mw
                for j in range(nh):
                    if j != k and (mask >> j) & 1:
                        denom += intf[j][k][i]
                se = log2(1.0 + sig_k[i] / denom)
                if se > se_cap:
                    se = se_cap
                acc += bw_hz * se
            r[k] = acc / lc[k]
        return r

    b = [0] * nh
    tx_end = [0] * nh
    active = 0
    for h in range(nh):
        if modes_l[h] == 0:
            tx_end[h] = sim_slots
            active |= 1 << h
    for h in range(nh):
        if modes_l[h] == 1:
            b[h] = _below(cw)

    cache: dict[int, list[float]] = {}
    expirers = [0] * nh
    t = 0
    while True:
        e = sim_slots
        for h in range(nh):
            te = tx_end[h]
            if te > t:
                if te < e:
                    e = te
            elif modes_l[h] == 1 and (adj_l[h] & active) == 0:
                cand = t + b[h] + 1
                if cand < e:
                    e = cand
        if e > t and active:
            rates = cache.get(active)
            if rates is None:
                rates = _rates(active)
                cache[active] = rates
            dt_s = (e - t) * slot_s
            for h in range(nh):
                if (active >> h) & 1:
                    acc_bits[h] += dt_s * rates[h]
                    air[h] += e - t
            if trace is not None:
                trace.append((t, e, active))
        if e >= sim_slots:
            break
        n_exp = 0
        for h in range(nh):
            if tx_end[h] <= t and modes_l[h] == 1 and (adj_l[h] & active) == 0:
                if t + b[h] + 1 == e:
                    expirers[n_exp] = h
                    n_exp += 1
                else:
                    b[h] -= e - t
        t = e
        for h in range(nh):
            if tx_end[h] == t and modes_l[h] == 1:
                tx_end[h] = 0
                active &= ~(1 << h)
                b[h] = _below(cw)
        if n_exp:
            for i in range(n_exp - 1, 0, -1):
                j = _below(i + 1)
                expirers[i], expirers[j] = expirers[j], expirers[i]
            for idx in range(n_exp):
                h = expirers[idx]
                if (adj_l[h] & active) == 0:
                    tx_end[h] = t + txop_slots
                    active |= 1 << h

    airtime[:] = air
    bits[:] = acc_bits
    return airtime, bits
