"""Kernel selection: compiled extension when available, pure Python otherwise.

The two implementations are bit-exact twins; the compiled one is roughly
two orders of magnitude faster on contended channels (see
benchmarks/bench_kernel.py). Set MIDMILE_PURE=1 to force the Python
kernel. Calls that need an occupancy trace, or more than 64 holders on one
channel, always take the Python path.
"""

from __future__ import annotations

import os

from . import _kernel_py
from ._kernel_py import derive_seed, splitmix64  # noqa: F401  (re-exported)

if os.environ.get("MIDMILE_PURE"):
    _ext = None
else:
    try:
        from . import _lbtcore as _ext
    except ImportError:
        _ext = None

HAVE_EXT = _ext is not None


def active_kernel_name() -> str:
    return _ext.KERNEL_NAME if _ext is not None else _kernel_py.KERNEL_NAME


def simulate_channel(
    modes,
    adj_masks,
    l_counts,
    sig_mw,
    intf_mw,
    noise_mw,
    bw_hz,
    se_cap,
    sim_slots,
    txop_slots,
    cw,
    seed,
    slot_s,
    trace=None,
):
    if _ext is not None and trace is None and len(modes) <= 64:
        return _ext.simulate_channel(
            modes, adj_masks, l_counts, sig_mw, intf_mw, noise_mw, bw_hz,
            se_cap, sim_slots, txop_slots, cw, seed, slot_s,
        )
    return _kernel_py.simulate_channel(
        modes, adj_masks, l_counts, sig_mw, intf_mw, noise_mw, bw_hz,
        se_cap, sim_slots, txop_slots, cw, seed, slot_s, trace=trace,
    )
