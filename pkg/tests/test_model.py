import numpy as np
import pytest

from midmile import fileio
from midmile.errors import ValidationError
from midmile.model import (
    Allocation,
    ChannelPlan,
    RadioParams,
    ThroughputReport,
    Topology,
    validate_topology,
)

RADIO = RadioParams()
PLAN = ChannelPlan()


def topo(enbs, cpes):
    return Topology(area_km=10.0, enb_positions=tuple(enbs), cpe_positions=tuple(cpes), radio=RADIO)


def test_valid_sparse_topology():
    t = topo(
        [(1, 1), (5.5, 1), (1, 5.5)],
        [((1, 2),), ((5.5, 2),), ((1, 6.5),)],
    )
    assert validate_topology(t, PLAN) == []


def test_position_outside_area():
    t = topo([(-1, 5)], [((0, 5),)])
    violations = validate_topology(t, PLAN)
    assert any("outside area" in v for v in violations)


def test_cpe_outside_coverage():
    t = topo([(1, 1)], [((1, 9),)])  # 8 km from its eNB, far past ~3 km coverage
    violations = validate_topology(t, PLAN)
    assert any("coverage radius" in v for v in violations)


def test_excessive_degree_flagged():
    positions = [(5, 5), (5.5, 5), (5, 5.5), (5.5, 5.5), (5.2, 5.2)]
    cpes = tuple(((x, y + 0.2),) for x, y in positions)
    t = topo(positions, cpes)
    violations = validate_topology(t, PLAN)
    assert any("degree 4" in v for v in violations)


def test_radio_invariants():
    with pytest.raises(ValidationError):
        RadioParams(tx_height_m=5, rx_height_m=30)
    with pytest.raises(ValidationError):
        RadioParams(center_freq_mhz=100)
    with pytest.raises(ValidationError):
        RadioParams(cable_loss_db=-1)


def test_plan_invariants():
    with pytest.raises(ValidationError):
        ChannelPlan(num_channels=3)  # default freq list has 4 entries
    with pytest.raises(ValidationError):
        ChannelPlan(num_channels=2, channel_center_freqs_mhz=(500.0, 502.0))
    assert ChannelPlan().total_band_hz == pytest.approx(20e6)


def test_allocation_mode_requires_grant():
    a = np.zeros((2, 4), dtype=np.uint8)
    b = np.zeros((2, 4), dtype=np.uint8)
    b[0, 0] = 1
    with pytest.raises(ValidationError):
        Allocation(channel_matrix=a, mode_matrix=b)


def test_allocation_matrices_read_only():
    a = np.ones((2, 4), dtype=np.uint8)
    alloc = Allocation(channel_matrix=a, mode_matrix=np.zeros_like(a))
    with pytest.raises(ValueError):
        alloc.channel_matrix[0, 0] = 0


def test_allocation_text_round_trip():
    a = np.array([[1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8)
    b = np.array([[0, 0, 1, 1], [0, 0, 1, 0]], dtype=np.uint8)
    alloc = Allocation(channel_matrix=a, mode_matrix=b)
    text = fileio.allocation_to_text(alloc)
    back = fileio.allocation_from_text(text)
    assert np.array_equal(back.channel_matrix, a)
    assert np.array_equal(back.mode_matrix, b)
    assert fileio.allocation_to_text(back) == text


def test_allocation_text_rejects_bad_cells():
    with pytest.raises(fileio.ConfigError):
        fileio.allocation_from_text("D X\n")
    with pytest.raises(fileio.ConfigError):
        fileio.allocation_from_text("D 0\nD\n")


def test_report_jfi_consistency_enforced():
    with pytest.raises(ValidationError):
        ThroughputReport(
            per_enb_bps=(1e6, 2e6),
            jfi=0.5,  # true value is 0.9
            spectral_efficiency_bps_hz=(0.05, 0.1),
        )
    r = ThroughputReport(
        per_enb_bps=(1e6, 1e6),
        jfi=1.0,
        spectral_efficiency_bps_hz=(0.05, 0.05),
    )
    assert r.jfi == 1.0


def test_kv_parser():
    kv = fileio.parse_kv("a = 1\n# comment\n\nb = 2, 3  # trailing\n")
    assert kv == {"a": "1", "b": "2, 3"}
    with pytest.raises(fileio.ConfigError, match="duplicate"):
        fileio.parse_kv("a = 1\na = 2\n")
    with pytest.raises(fileio.ConfigError):
        fileio.parse_kv("nonsense line\n")


def test_topology_file_round_trip(fixtures_dir):
    t, kv = fileio.load_topology(fixtures_dir / "triangle.cfg")
    assert t.n_enb == 3
    assert t.cpe_positions[0] == ((2.0, 4.6),)
    assert kv["threshold_km"] == "4"
    assert validate_topology(t, PLAN) == []


def test_topology_file_missing_cpe(tmp_path, fixtures_dir):
    text = (fixtures_dir / "single.cfg").read_text().replace("cpe.0.0 = 5, 6\n", "")
    bad = tmp_path / "bad.cfg"
    bad.write_text(text)
    with pytest.raises(fileio.ConfigError, match="cpe"):
        fileio.load_topology(bad)


def test_radio_from_kv_missing_key_named():
    kv = fileio.parse_kv("tx_gain_db = 10\n")
    with pytest.raises(fileio.ConfigError, match="tx_power_dbm"):
        fileio.radio_from_kv(kv)
