"""Text formats: key-value configuration files and allocation matrices.

Configuration files are flat ``key = value`` lines; ``#`` starts a
comment, blank lines are skipped, keys may appear once. List values are
comma separated. Positions use two comma-separated kilometers. The exact
key names for each object are the dataclass field names (see README for
the full schema):

    tx_power_dbm = 18
    enb.0 = 2.0, 3.5
    cpe.0.1 = 2.4, 3.1
    channel_center_freqs_mhz = 502.5, 507.5, 512.5, 517.5

Allocation files are one row per eNB, one cell per channel:
``0`` unassigned, ``D`` dedicated, ``S`` shared.
"""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path

import numpy as np

from . import experiment, macsim
from .errors import ConfigError
from .model import Allocation, ChannelPlan, Point, RadioParams, Topology


def parse_kv(text: str) -> dict[str, str]:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in kv:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        kv[key] = value
    return kv


def read_kv(path) -> dict[str, str]:
    return parse_kv(Path(path).read_text())


def _require(kv: dict[str, str], key: str) -> str:
    if key not in kv:
        raise ConfigError(f"missing required key {key!r}")
    return kv[key]


def _as_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from None


def _as_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None


def _as_point(key: str, raw: str) -> Point:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"key {key!r}: expected 'x, y', got {raw!r}")
    return (_as_float(key, parts[0]), _as_float(key, parts[1]))


def radio_from_kv(kv: dict[str, str]) -> RadioParams:
    values = {f.name: _as_float(f.name, _require(kv, f.name)) for f in fields(RadioParams)}
    return RadioParams(**values)


def plan_from_kv(kv: dict[str, str]) -> ChannelPlan:
    if "num_channels" not in kv:
        return ChannelPlan()
    num = _as_int("num_channels", kv["num_channels"])
    bw = _as_float("channel_bandwidth_hz", _require(kv, "channel_bandwidth_hz"))
    raw = _require(kv, "channel_center_freqs_mhz")
    freqs = tuple(_as_float("channel_center_freqs_mhz", p) for p in raw.split(","))
    return ChannelPlan(num_channels=num, channel_bandwidth_hz=bw, channel_center_freqs_mhz=freqs)


def mac_from_kv(kv: dict[str, str]) -> macsim.MacConfig:
    defaults = macsim.MacConfig()
    return macsim.MacConfig(
        slot_us=_as_float("slot_us", kv.get("slot_us", str(defaults.slot_us))),
        txop_ms=_as_float("txop_ms", kv.get("txop_ms", str(defaults.txop_ms))),
        sim_time_s=_as_float("sim_time_s", kv.get("sim_time_s", str(defaults.sim_time_s))),
        contention_window_slots=_as_int(
            "contention_window_slots",
            kv.get("contention_window_slots", str(defaults.contention_window_slots)),
        ),
        rng_seed=_as_int("rng_seed", kv.get("rng_seed", str(defaults.rng_seed))),
    )


def topology_from_kv(kv: dict[str, str]) -> Topology:
    area = _as_float("area_km", _require(kv, "area_km"))
    radio = radio_from_kv(kv)

    enb: dict[int, Point] = {}
    cpe: dict[int, dict[int, Point]] = {}
    for key, raw in kv.items():
        if key.startswith("enb."):
            idx = _as_int(key, key[4:])
            enb[idx] = _as_point(key, raw)
        elif key.startswith("cpe."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"key {key!r}: expected cpe.<enb>.<index>")
            k, i = _as_int(key, parts[1]), _as_int(key, parts[2])
            cpe.setdefault(k, {})[i] = _as_point(key, raw)

    if not enb:
        raise ConfigError("topology has no 'enb.<k>' entries")
    n = len(enb)
    if sorted(enb) != list(range(n)):
        raise ConfigError("eNB indices must be contiguous from 0")
    cpe_lists = []
    for k in range(n):
        sites = cpe.get(k, {})
        if not sites:
            raise ConfigError(f"eNB {k} has no 'cpe.{k}.<i>' entries")
        if sorted(sites) != list(range(len(sites))):
            raise ConfigError(f"CPE indices for eNB {k} must be contiguous from 0")
        cpe_lists.append(tuple(sites[i] for i in range(len(sites))))

    return Topology(
        area_km=area,
        enb_positions=tuple(enb[k] for k in range(n)),
        cpe_positions=tuple(cpe_lists),
        radio=radio,
    )


def load_topology(path) -> tuple[Topology, dict[str, str]]:
    """Read a topology file; returns the topology plus the raw keys so
    callers can pick up optional settings (threshold_km, plan, MAC)."""
    kv = read_kv(path)
    return topology_from_kv(kv), kv


def sweep_from_kv(kv: dict[str, str]) -> experiment.SweepConfig:
    defaults = experiment.SweepConfig()
    enb_counts = defaults.enb_counts
    if "enb_counts" in kv:
        enb_counts = tuple(_as_int("enb_counts", p) for p in kv["enb_counts"].split(","))
    schemes = defaults.schemes
    if "schemes" in kv:
        schemes = tuple(p.strip() for p in kv["schemes"].split(","))
    return experiment.SweepConfig(
        enb_counts=enb_counts,
        seeds=_as_int("seeds", kv.get("seeds", str(defaults.seeds))),
        area_km=_as_float("area_km", kv.get("area_km", str(defaults.area_km))),
        threshold_km=_as_float("threshold_km", kv.get("threshold_km", str(defaults.threshold_km))),
        cpes_per_enb=_as_int("cpes_per_enb", kv.get("cpes_per_enb", str(defaults.cpes_per_enb))),
        schemes=schemes,
        mac=mac_from_kv(kv),
        radio=radio_from_kv(kv) if "tx_power_dbm" in kv else defaults.radio,
        plan=plan_from_kv(kv),
        delta=_as_float("delta", kv.get("delta", str(defaults.delta))),
        min_cpe_offset_km=_as_float(
            "min_cpe_offset_km", kv.get("min_cpe_offset_km", str(defaults.min_cpe_offset_km))
        ),
    )


_CELLS = {"0": (0, 0), "D": (1, 0), "S": (1, 1)}
_CELL_OF = {(0, 0): "0", (1, 0): "D", (1, 1): "S"}


def allocation_to_text(alloc: Allocation) -> str:
    lines = []
    for k in range(alloc.n_enb):
        cells = [
            _CELL_OF[(int(alloc.channel_matrix[k, m]), int(alloc.mode_matrix[k, m]))]
            for m in range(alloc.n_channels)
        ]
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def allocation_from_text(text: str) -> Allocation:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ConfigError("allocation file is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ConfigError("allocation rows have inconsistent channel counts")
    a = np.zeros((len(rows), width), dtype=np.uint8)
    b = np.zeros((len(rows), width), dtype=np.uint8)
    for k, row in enumerate(rows):
        for m, cell in enumerate(row):
            if cell not in _CELLS:
                raise ConfigError(f"allocation cell {cell!r} not one of 0/D/S")
            a[k, m], b[k, m] = _CELLS[cell]
    return Allocation(channel_matrix=a, mode_matrix=b)


def write_allocation(alloc: Allocation, path) -> Path:
    p = Path(path)
    p.write_text(allocation_to_text(alloc))
    return p


def read_allocation(path) -> Allocation:
    return allocation_from_text(Path(path).read_text())
