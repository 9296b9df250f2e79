"""Acceptance suite: one test per exit criterion, one printed verdict line each.

Criteria 5 and 7 encode the published qualitative orderings; the parts of
them this MAC model provably cannot reproduce are asserted anyway (they
fail honestly with the achieved values printed). See the repository notes
for the analysis.
"""

import time

import numpy as np
import pytest

from midmile import conflict, experiment, fileio, macsim
from midmile.cli import main
from midmile.fcca import jfi, mdca, odrs_ca
from midmile.model import Allocation

DENSITIES = (3, 4, 5, 6, 7, 8, 9, 10)


def verdict(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} — {detail}")


@pytest.fixture(scope="session")
def sweep():
    cfg = experiment.SweepConfig()  # densities 3..10, 100 seeds, 30 s MAC horizon
    t0 = time.monotonic()
    records, failures = experiment.run_sweep(cfg, jobs=2)
    elapsed = time.monotonic() - t0
    assert not failures, f"sweep items failed: {failures[:3]}"
    assert elapsed < 1800, f"sweep took {elapsed:.0f} s, budget is 30 min"
    return experiment.summarize(records), experiment.selection_shares(records), records


def test_criterion_1_coverage_radius(capsys, configs_dir):
    t0 = time.monotonic()
    code = main(["coverage", "--config", str(configs_dir / "radio.cfg")])
    elapsed = time.monotonic() - t0
    out = capsys.readouterr().out
    max_pl = float([l for l in out.splitlines() if "max_allowed_path_loss_db" in l][0].split("=")[1])
    radius = float([l for l in out.splitlines() if "coverage_radius_km" in l][0].split("=")[1])
    ok = code == 0 and max_pl == 120.0 and 2.9 <= radius <= 3.1 and elapsed < 1.0
    with capsys.disabled():
        verdict(1, ok, f"max PL {max_pl} dB, radius {radius:.3f} km, {elapsed*1e3:.0f} ms")
    assert ok


def test_criterion_2_demand(capsys):
    t0 = time.monotonic()
    code = main(["demand"])
    elapsed = time.monotonic() - t0
    out = capsys.readouterr().out.strip()
    ok = code == 0 and out == "80" and elapsed < 1.0
    with capsys.disabled():
        verdict(2, ok, f"demand output {out!r} Mbps, {elapsed*1e3:.0f} ms")
    assert ok


GOLDEN = {
    "triangle": (
        [(2, 2), (4, 2), (3, 3.5)],
        "D 0 0 D\n0 D 0 0\n0 0 D 0\n",
        "D 0 0 S\n0 D 0 S\n0 0 D S\n",
    ),
    "path3": (
        [(1, 1), (4, 1), (7, 1)],
        "D 0 D 0\n0 D 0 D\nD 0 D 0\n",
        "D 0 S S\n0 D S S\nD 0 S S\n",
    ),
    "edgeless2": (
        [(1, 1), (8, 8)],
        "D D D D\nD D D D\n",
        "D S S S\nD S S S\n",
    ),
}


def test_criterion_3_allocation_goldens(capsys):
    t0 = time.monotonic()
    mismatches = []
    for name, (positions, want_mdca, want_odrs) in GOLDEN.items():
        c = conflict.build_interference_matrix(positions, 4.0)
        got_mdca = fileio.allocation_to_text(mdca(c, 4))
        got_odrs = fileio.allocation_to_text(odrs_ca(c, 4))
        if got_mdca != want_mdca:
            mismatches.append(f"{name} MDCA:\n{got_mdca}")
        if got_odrs != want_odrs:
            mismatches.append(f"{name} ODRS:\n{got_odrs}")
    elapsed = time.monotonic() - t0
    ok = not mismatches and elapsed < 1.0
    with capsys.disabled():
        verdict(3, ok, f"6 golden allocations byte-exact, {elapsed*1e3:.0f} ms")
    assert ok, mismatches


def test_criterion_4_clique_airtime_vs_oracle(capsys):
    mac = macsim.MacConfig()  # 30 s horizon
    t0 = time.monotonic()
    worst = 0.0
    details = []
    for n in (1, 2, 3, 4):
        shares = macsim.simulate_clique_airtime(n, mac)
        oracle = macsim.analytic_clique_share(n, mac)
        err = float(np.abs(shares - oracle).max() / oracle)
        worst = max(worst, err)
        details.append(f"n={n}: {err:.2%}")
    elapsed = time.monotonic() - t0
    ok = worst < 0.05 and elapsed < 120
    with capsys.disabled():
        verdict(4, ok, f"max relative error {worst:.2%} ({', '.join(details)}), {elapsed:.1f} s")
    assert ok


def test_criterion_5_scheme_orderings(capsys, sweep):
    rows, _, _ = sweep
    failures = []
    for n in DENSITIES:
        by = {r["scheme"]: r for r in rows if r["enb_count"] == n}
        f, fl, nc = by["FCCA"], by["FULL_LBT"], by["NO_COEX"]
        for metric, label in (
            ("se_mean", "SE"),
            ("tput_mean_mbps", "tput"),
            ("jfi_mean", "JFI"),
        ):
            for base, base_label in ((fl, "FULL_LBT"), (nc, "NO_COEX")):
                if not f[metric] > base[metric]:
                    failures.append(
                        f"density {n}: FCCA {label} {f[metric]:.4f} !> "
                        f"{base_label} {base[metric]:.4f}"
                    )
    ok = not failures
    with capsys.disabled():
        verdict(
            5,
            ok,
            "FCCA strictly above both baselines on SE, throughput and JFI at "
            f"every density" if ok else f"{len(failures)}/48 orderings violated "
            f"(JFI legs all hold; see notes): " + "; ".join(failures[:6]) + " ...",
        )
    assert ok, failures


def test_criterion_6_fairness_floor(capsys, sweep):
    rows, _, _ = sweep
    fcca10 = next(r for r in rows if r["enb_count"] == 10 and r["scheme"] == "FCCA")
    ok = fcca10["jfi_mean"] >= 0.70
    with capsys.disabled():
        verdict(6, ok, f"FCCA mean JFI at density 10 = {fcca10['jfi_mean']:.4f} (floor 0.70)")
    assert ok


def test_criterion_7_selection_statistics(capsys, sweep):
    _, shares, _ = sweep
    mdca3 = shares[3]["MDCA"]
    odrs10 = shares[10]["ODRS_CA"]
    ok3 = 0.35 <= mdca3 <= 0.65
    ok10 = odrs10 > 0.50
    ok = ok3 and ok10
    with capsys.disabled():
        verdict(
            7,
            ok,
            f"density 3 MDCA {mdca3:.0%} (band 35-65%: {'ok' if ok3 else 'out'}), "
            f"density 10 ODRS-CA {odrs10:.0%} (>50%: {'ok' if ok10 else 'out'})",
        )
    assert ok, f"MDCA@3={mdca3:.2f}, ODRS@10={odrs10:.2f}"


def test_criterion_8_property_suites(capsys, fixtures_dir):
    t0 = time.monotonic()
    plan = experiment.SweepConfig().plan
    mac = macsim.MacConfig(sim_time_s=2.0, rng_seed=3)
    rng = np.random.default_rng(0)

    # proper coloring, B subset of A, at least one channel per eNB
    for _ in range(25):
        k = int(rng.integers(1, 10))
        pts = rng.uniform(0, 10, (k, 2))
        c = conflict.build_interference_matrix([tuple(p) for p in pts], 4.0)
        if c.max_degree() > 3:
            continue
        for alloc in (mdca(c, 4), odrs_ca(c, 4)):
            assert np.all(alloc.mode_matrix <= alloc.channel_matrix)
            assert (alloc.channel_matrix.sum(axis=1) >= 1).all()
            ded = alloc.channel_matrix * (1 - alloc.mode_matrix)
            for q in range(4):
                holders = np.nonzero(ded[:, q])[0]
                for i in holders:
                    for j in holders:
                        assert i == j or c.entries[i, j] == 0

    # JFI bounds
    for _ in range(50):
        v = rng.uniform(0.1, 100.0, int(rng.integers(1, 12)))
        assert 1.0 / len(v) - 1e-12 <= jfi(v.tolist()) <= 1.0 + 1e-12

    # CCA neighbor exclusion and per-clique airtime sum on a shared channel
    topo, _ = fileio.load_topology(fixtures_dir / "triangle.cfg")
    c = conflict.build_interference_matrix(topo.enb_positions, 4.0)
    ones = np.ones((3, 4), dtype=np.uint8)
    trace: list = []
    macsim.evaluate(topo, Allocation(ones, ones.copy()), c, plan, mac, trace=trace)
    airtime = np.zeros((4, 3))
    for channel, s0, s1, txers in trace:
        for i in txers:
            for j in txers:
                assert i == j or c.entries[i, j] == 0, "neighbors overlapped"
        for i in txers:
            airtime[channel, i] += s1 - s0
    assert (airtime.sum(axis=1) <= mac.sim_slots + 1e-9).all(), "clique airtime sum > 1"

    # determinism under a fixed seed
    r1 = macsim.baseline_full_lbt(topo, c, plan, mac)
    r2 = macsim.baseline_full_lbt(topo, c, plan, mac)
    assert r1.per_enb_bps == r2.per_enb_bps

    # rejection sampling: 10,000 drawn topologies at the densest setting
    # all respect the degree cap
    gen_cfg = experiment.SweepConfig()
    for seed in range(10_000):
        t = experiment.generate_topology(seed, 10, gen_cfg)
        cm = conflict.build_interference_matrix(t.enb_positions, gen_cfg.threshold_km)
        assert cm.max_degree() <= 2

    elapsed = time.monotonic() - t0
    ok = elapsed < 300
    with capsys.disabled():
        verdict(8, ok, f"coloring/JFI/CCA/airtime/determinism properties green, {elapsed:.1f} s")
    assert ok


def test_demand_vs_capacity_note(capsys, sweep):
    rows, _, _ = sweep
    fcca5 = next(r for r in rows if r["enb_count"] == 5 and r["scheme"] == "FCCA")
    system_mbps = 5 * fcca5["tput_mean_mbps"]
    demand = experiment.demand_mbps(1000, 10, 2, 50, 5)
    with capsys.disabled():
        if system_mbps > demand:
            print(
                f"\nNOTE: 5-eNB FCCA system throughput {system_mbps:.1f} Mbps "
                f"exceeds the {demand:.0f} Mbps area demand"
            )
        else:
            print(
                f"\nNOTE: 5-eNB FCCA system throughput {system_mbps:.1f} Mbps falls "
                f"short of the {demand:.0f} Mbps area demand; the 4.8 b/s/Hz "
                f"rate ceiling bounds per-link rates in this model"
            )
    assert system_mbps > 0
