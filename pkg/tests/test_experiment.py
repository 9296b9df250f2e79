import csv
import math
import xml.etree.ElementTree as ET

import pytest

from midmile import conflict, experiment, macsim
from midmile.errors import ValidationError

FAST_MAC = macsim.MacConfig(sim_time_s=2.0, rng_seed=1)


def small_cfg(**kw):
    base = dict(enb_counts=(3,), seeds=3, mac=FAST_MAC)
    base.update(kw)
    return experiment.SweepConfig(**base)


def test_topology_deterministic_per_seed():
    cfg = small_cfg()
    t1 = experiment.generate_topology(5, 3, cfg)
    t2 = experiment.generate_topology(5, 3, cfg)
    assert t1.enb_positions == t2.enb_positions
    assert t1.cpe_positions == t2.cpe_positions
    t3 = experiment.generate_topology(6, 3, cfg)
    assert t3.enb_positions != t1.enb_positions


def test_topology_single_enb_trivial():
    t = experiment.generate_topology(0, 1, small_cfg(enb_counts=(1,)))
    assert t.n_enb == 1
    assert len(t.cpe_positions[0]) == 5


def test_generated_topologies_respect_degree_cap():
    cfg = small_cfg(enb_counts=(10,))
    for seed in range(300):
        t = experiment.generate_topology(seed, 10, cfg)
        c = conflict.build_interference_matrix(t.enb_positions, cfg.threshold_km)
        assert c.max_degree() <= 2


def test_generated_cpes_inside_area_and_disk():
    cfg = small_cfg()
    from midmile import propagation

    radius = propagation.coverage_radius(cfg.radio)
    for seed in range(8):
        t = experiment.generate_topology(seed, 4, cfg)
        for k, cpes in enumerate(t.cpe_positions):
            for p in cpes:
                assert 0 <= p[0] <= 10 and 0 <= p[1] <= 10
                d = math.dist(t.enb_positions[k], p)
                assert cfg.min_cpe_offset_km <= d <= radius


def test_rejection_budget_error():
    # 10 eNBs in a 3 km square always form a clique: degree<=2 is impossible
    cfg = small_cfg(enb_counts=(10,), area_km=3.0, max_topology_tries=512)
    with pytest.raises(experiment.TopologyGenerationError, match="10 eNBs"):
        experiment.generate_topology(0, 10, cfg)


def test_demand_reference_values():
    assert experiment.demand_mbps(1000, 10, 2, 50, 5) == pytest.approx(80.0, abs=1e-12)
    assert experiment.demand_mbps(1000, 10, 0, 50, 5) == 0.0
    assert experiment.demand_mbps(1000, 10, 4, 50, 5) == pytest.approx(160.0, abs=1e-12)
    with pytest.raises(ValidationError):
        experiment.demand_mbps(1000, 10, 2, 0, 5)


def test_sweep_cardinality_and_choices():
    cfg = small_cfg(schemes=("FCCA",))
    records, failures = experiment.run_sweep(cfg)
    assert not failures
    assert len(records) == 3
    for r in records:
        assert r.scheme == "FCCA"
        assert r.chosen_sub_algorithm in ("MDCA", "ODRS_CA")
        assert 1.0 / r.enb_count <= r.jfi <= 1.0 + 1e-12


def test_sweep_all_schemes_cardinality():
    cfg = small_cfg(enb_counts=(3, 4), seeds=2)
    records, failures = experiment.run_sweep(cfg)
    assert not failures
    assert len(records) == 2 * 2 * 3
    baselines = [r for r in records if r.scheme != "FCCA"]
    assert all(r.chosen_sub_algorithm == "N/A" for r in baselines)


def test_sweep_parallel_matches_serial():
    cfg = small_cfg(enb_counts=(3, 4), seeds=2)
    serial, _ = experiment.run_sweep(cfg, jobs=1)
    parallel, _ = experiment.run_sweep(cfg, jobs=2)
    assert serial == parallel


def test_emit_results_round_trip(tmp_path):
    cfg = small_cfg()
    records, _ = experiment.run_sweep(cfg)
    paths = experiment.emit_results(records, tmp_path / "out")

    with paths["sweep"].open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(records)
    for row, rec in zip(rows, records):
        assert int(row["seed"]) == rec.seed
        assert float(row["jfi"]) == pytest.approx(rec.jfi, rel=1e-9)
        assert row["scheme"] == rec.scheme

    with paths["summary"].open() as fh:
        summary = list(csv.DictReader(fh))
    by_scheme = {s["scheme"]: s for s in summary}
    fcca_rows = [r for r in records if r.scheme == "FCCA"]
    hand_mean = sum(r.jfi for r in fcca_rows) / len(fcca_rows)
    assert float(by_scheme["FCCA"]["jfi_mean"]) == pytest.approx(hand_mean, rel=1e-9)

    for key in ("se", "tput", "jfi"):
        svg = paths[key]
        assert svg.exists()
        root = ET.parse(svg).getroot()
        assert root.tag.endswith("svg")


def test_emit_single_record(tmp_path):
    cfg = small_cfg(seeds=1, schemes=("FCCA",))
    records, _ = experiment.run_sweep(cfg)
    assert len(records) == 1
    paths = experiment.emit_results(records, tmp_path)
    lines = paths["sweep"].read_text().strip().splitlines()
    assert len(lines) == 2  # header + one row
    assert lines[0] == ",".join(experiment.SWEEP_CSV_COLUMNS)


def test_sweep_csv_reproducible_bytes(tmp_path):
    cfg = small_cfg(enb_counts=(3, 5), seeds=2)
    r1, _ = experiment.run_sweep(cfg)
    r2, _ = experiment.run_sweep(cfg, jobs=2)
    p1 = experiment.emit_results(r1, tmp_path / "a")["sweep"]
    p2 = experiment.emit_results(r2, tmp_path / "b")["sweep"]
    assert p1.read_bytes() == p2.read_bytes()


def test_selection_shares():
    cfg = small_cfg(seeds=4)
    records, _ = experiment.run_sweep(cfg)
    shares = experiment.selection_shares(records)
    assert set(shares) == {3}
    assert shares[3]["MDCA"] + shares[3]["ODRS_CA"] == pytest.approx(1.0)


def test_failed_seed_recorded_not_dropped():
    cfg = small_cfg(enb_counts=(10,), seeds=2, area_km=3.0, max_topology_tries=512)
    records, failures = experiment.run_sweep(cfg)
    assert records == []
    assert len(failures) == 2
    assert all("10 eNBs" in f.error for f in failures)
