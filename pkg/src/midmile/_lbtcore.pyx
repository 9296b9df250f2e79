# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled LBT event kernel; statement-for-statement twin of _kernel_py.

Keep the two files in lockstep: same splitmix64 draw sequence, same float
operation order (the build disables FP contraction), so outputs stay
bit-exact with the pure-Python kernel. See _kernel_py for the model notes.
"""

from libc.math cimport log2
from libc.stdint cimport int64_t, uint8_t, uint64_t

import numpy as np

cimport numpy as cnp

cnp.import_array()

KERNEL_NAME = "compiled"

DEF MAX_HOLDERS = 64

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15u


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9u
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBu
    return z ^ (z >> 31)


cdef inline uint64_t _below(uint64_t* s, uint64_t n) nogil:
    s[0] = s[0] + GOLDEN
    return _mix(s[0]) % n


def splitmix64(x):
    """Stateless 64-bit mix; matches _kernel_py.splitmix64."""
    cdef uint64_t z = <uint64_t> (x & 0xFFFFFFFFFFFFFFFF)
    z = z + GOLDEN
    return int(_mix(z))


def simulate_channel(
    modes,
    adj_masks,
    l_counts,
    sig_mw,
    intf_mw,
    double noise_mw,
    double bw_hz,
    double se_cap,
    int64_t sim_slots,
    int64_t txop_slots,
    int64_t cw,
    seed,
    double slot_s,
):
    """Run one channel; returns (airtime_slots int64[NH], bits float64[NH])."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] modes_a = np.ascontiguousarray(modes, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] adj_a = np.ascontiguousarray(adj_masks, dtype=np.uint64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lc_a = np.ascontiguousarray(l_counts, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sig_a = np.ascontiguousarray(sig_mw, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] intf_a = np.ascontiguousarray(intf_mw, dtype=np.float64)

    cdef int nh = modes_a.shape[0]
    airtime = np.zeros(nh, dtype=np.int64)
    bits = np.zeros(nh, dtype=np.float64)
    if nh == 0 or sim_slots <= 0:
        return airtime, bits
    if nh > MAX_HOLDERS:
        raise ValueError(f"compiled kernel supports at most {MAX_HOLDERS} holders per channel")

    cdef uint8_t* md = <uint8_t*> cnp.PyArray_DATA(modes_a)
    cdef uint64_t* adj = <uint64_t*> cnp.PyArray_DATA(adj_a)
    cdef int64_t* lc = <int64_t*> cnp.PyArray_DATA(lc_a)
    cdef double* sig = <double*> cnp.PyArray_DATA(sig_a)
    cdef double* intf = <double*> cnp.PyArray_DATA(intf_a)
    cdef int64_t* air = <int64_t*> cnp.PyArray_DATA(<cnp.ndarray> airtime)
    cdef double* acc_bits = <double*> cnp.PyArray_DATA(<cnp.ndarray> bits)

    cdef uint64_t s = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)

    cdef int64_t b[MAX_HOLDERS]
    cdef int64_t tx_end[MAX_HOLDERS]
    cdef int expirers[MAX_HOLDERS]
    cdef uint64_t active = 0
    cdef int h, j, idx, n_exp
    cdef int64_t i, t, e, te, cand
    cdef uint64_t one = 1
    cdef double denom, se, acc, dt_s
    cdef dict cache = {}
    cdef cnp.ndarray rates_arr
    cdef double* rates

    for h in range(nh):
        b[h] = 0
        tx_end[h] = 0
        if md[h] == 0:
            tx_end[h] = sim_slots
            active |= one << h
    for h in range(nh):
        if md[h] == 1:
            b[h] = <int64_t> _below(&s, <uint64_t> cw)

    t = 0
    while True:
        e = sim_slots
        for h in range(nh):
            te = tx_end[h]
            if te > t:
                if te < e:
                    e = te
            elif md[h] == 1 and (adj[h] & active) == 0:
                cand = t + b[h] + 1
                if cand < e:
                    e = cand
        if e > t and active != 0:
            rates_arr = cache.get(active)
            if rates_arr is None:
                rates_arr = np.zeros(nh, dtype=np.float64)
                rates = <double*> cnp.PyArray_DATA(rates_arr)
                for h in range(nh):
                    if not (active >> h) & 1:
                        continue
                    acc = 0.0
                    for i in range(lc[h]):
                        denom = noise_mw
                        for j in range(nh):
                            if j != h and (active >> j) & 1:
                                denom += intf[(j * nh + h) * sig_a.shape[1] + i]
                        se = log2(1.0 + sig[h * sig_a.shape[1] + i] / denom)
                        if se > se_cap:
                            se = se_cap
                        acc += bw_hz * se
                    rates[h] = acc / lc[h]
                cache[active] = rates_arr
            else:
                rates = <double*> cnp.PyArray_DATA(rates_arr)
            dt_s = (e - t) * slot_s
            for h in range(nh):
                if (active >> h) & 1:
                    acc_bits[h] += dt_s * rates[h]
                    air[h] += e - t
        if e >= sim_slots:
            break
        n_exp = 0
        for h in range(nh):
            if tx_end[h] <= t and md[h] == 1 and (adj[h] & active) == 0:
                if t + b[h] + 1 == e:
                    expirers[n_exp] = h
                    n_exp += 1
                else:
                    b[h] -= e - t
        t = e
        for h in range(nh):
            if tx_end[h] == t and md[h] == 1:
                tx_end[h] = 0
                active &= ~(one << h)
                b[h] = <int64_t> _below(&s, <uint64_t> cw)
        if n_exp:
            for idx in range(n_exp - 1, 0, -1):
                j = <int> _below(&s, <uint64_t> (idx + 1))
                h = expirers[idx]
                expirers[idx] = expirers[j]
                expirers[j] = h
            for idx in range(n_exp):
                h = expirers[idx]
                if (adj[h] & active) == 0:
                    tx_end[h] = t + txop_slots
                    active |= one << h

    return airtime, bits
