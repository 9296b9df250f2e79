"""Benchmark: compiled LBT kernel vs the pure-Python twin.

Runs identical contended-channel scenarios through both implementations,
verifies the outputs are bit-exact, and reports wall times. Usage:

    python benchmarks/bench_kernel.py [--sim-time 30]
"""

import argparse
import time

import numpy as np

from midmile import _kernel_py, kernel
from midmile.kernel import derive_seed


def clique_scenario(n, lmax, sim_slots):
    rng = np.random.default_rng(2024)
    modes = np.ones(n, dtype=np.uint8)
    full = (1 << n) - 1
    adj = np.asarray([full ^ (1 << h) for h in range(n)], dtype=np.uint64)
    lc = np.full(n, lmax, dtype=np.int64)
    sig = rng.uniform(1e-9, 1e-7, (n, lmax))
    intf = rng.uniform(1e-12, 1e-9, (n, n, lmax))
    return dict(
        modes=modes, adj_masks=adj, l_counts=lc, sig_mw=sig, intf_mw=intf,
        noise_mw=1e-10, bw_hz=5e6, se_cap=4.8, sim_slots=sim_slots,
        txop_slots=1111, cw=16, seed=derive_seed(99, n), slot_s=9e-6,
    )


def mixed_scenario(n, lmax, sim_slots):
    # sparse random contention graph with a couple of dedicated holders
    rng = np.random.default_rng(7)
    modes = np.ones(n, dtype=np.uint8)
    modes[:2] = 0
    adj = np.zeros(n, dtype=np.uint64)
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.3:
                adj[a] |= np.uint64(1 << b)
                adj[b] |= np.uint64(1 << a)
    lc = np.full(n, lmax, dtype=np.int64)
    sig = rng.uniform(1e-9, 1e-7, (n, lmax))
    intf = rng.uniform(1e-12, 1e-9, (n, n, lmax))
    return dict(
        modes=modes, adj_masks=adj, l_counts=lc, sig_mw=sig, intf_mw=intf,
        noise_mw=1e-10, bw_hz=5e6, se_cap=4.8, sim_slots=sim_slots,
        txop_slots=1111, cw=16, seed=derive_seed(17, n), slot_s=9e-6,
    )


def run(fn, kw, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(**kw)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sim-time", type=float, default=30.0, help="seconds of MAC time")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    sim_slots = round(args.sim_time * 1e6 / 9.0)

    if not kernel.HAVE_EXT:
        print("compiled kernel not available; build the extension first")
        return 1

    from midmile import _lbtcore

    scenarios = [
        ("4-clique, 5 CPEs", clique_scenario(4, 5, sim_slots)),
        ("10 holders sparse + 2 dedicated", mixed_scenario(10, 5, sim_slots)),
    ]
    print(f"MAC horizon {args.sim_time:.0f} s ({sim_slots} slots), best of {args.repeats}\n")
    print(f"{'scenario':<34} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, kw in scenarios:
        t_py, (air_py, bits_py) = run(_kernel_py.simulate_channel, kw, args.repeats)
        t_c, (air_c, bits_c) = run(_lbtcore.simulate_channel, kw, args.repeats)
        assert np.array_equal(air_py, air_c) and np.array_equal(bits_py, bits_c), (
            "kernel outputs diverged"
        )
        print(f"{name:<34} {t_py*1e3:>8.1f}ms {t_c*1e3:>8.1f}ms {t_py/t_c:>7.1f}x")
    print("\noutputs bit-exact across kernels")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
