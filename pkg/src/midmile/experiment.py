"""Monte-Carlo density sweep comparing FCCA against the two baselines.

Random topologies are drawn per (eNB count, seed): eNB sites uniform in
the square, rejection-sampled as whole topologies until no eNB has more
than two protocol-model neighbors (rural sparsity; rejection preserves
uniformity conditioned on the constraint), then CPEs uniform in each
coverage disk with a minimum eNB offset. Every record is reproducible
from its (seed, density) pair alone.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import conflict, fcca, macsim, propagation
from .errors import MidmileError, ValidationError
from .kernel import derive_seed
from .model import ChannelPlan, RadioParams, SubAlgorithm, Topology

SCHEME_NO_COEX = "NO_COEX"
SCHEME_FULL_LBT = "FULL_LBT"
SCHEME_FCCA = "FCCA"
ALL_SCHEMES = (SCHEME_NO_COEX, SCHEME_FULL_LBT, SCHEME_FCCA)

SWEEP_CSV_COLUMNS = (
    "seed",
    "enb_count",
    "scheme",
    "mean_spectral_efficiency_bps_hz",
    "mean_throughput_per_enb_mbps",
    "jfi",
    "chosen_sub_algorithm",
)

SUMMARY_CSV_COLUMNS = (
    "enb_count",
    "scheme",
    "n_seeds",
    "se_mean",
    "se_ci95",
    "tput_mean_mbps",
    "tput_ci95_mbps",
    "jfi_mean",
    "jfi_ci95",
    "mdca_share",
)

CHART_FILES = {
    "se": "spectral_efficiency.svg",
    "tput": "throughput.svg",
    "jfi": "jfi.svg",
}


class TopologyGenerationError(MidmileError, RuntimeError):
    """Rejection sampling exhausted its budget."""


@dataclass(frozen=True)
class SweepConfig:
    enb_counts: tuple[int, ...] = (3, 4, 5, 6, 7, 8, 9, 10)
    seeds: int = 100
    area_km: float = 10.0
    threshold_km: float = 4.0
    cpes_per_enb: int = 5
    schemes: tuple[str, ...] = ALL_SCHEMES
    mac: macsim.MacConfig = field(default_factory=macsim.MacConfig)
    radio: RadioParams = field(default_factory=RadioParams)
    plan: ChannelPlan = field(default_factory=ChannelPlan)
    delta: float = 0.75
    min_cpe_offset_km: float = 0.05
    max_topology_tries: int = 2_000_000

    def __post_init__(self) -> None:
        if not self.enb_counts or min(self.enb_counts) < 1:
            raise ValidationError("enb_counts must be non-empty positive integers")
        if self.seeds < 1:
            raise ValidationError("seeds must be >= 1")
        for s in self.schemes:
            if s not in ALL_SCHEMES:
                raise ValidationError(f"unknown scheme {s!r}; valid: {ALL_SCHEMES}")
        if not 0.0 < self.delta <= 1.0:
            raise ValidationError("delta must be in (0, 1]")


@dataclass(frozen=True)
class SweepRecord:
    seed: int
    enb_count: int
    scheme: str
    mean_spectral_efficiency_bps_hz: float
    mean_throughput_per_enb_mbps: float
    jfi: float
    chosen_sub_algorithm: str


@dataclass(frozen=True)
class SweepFailure:
    seed: int
    enb_count: int
    error: str


def generate_topology(seed: int, n_enb: int, cfg: SweepConfig) -> Topology:
    """Draw one topology; deterministic in (seed, n_enb, config)."""
    rng = np.random.default_rng([seed, n_enb])
    max_deg = min(2, cfg.plan.num_channels - 1)
    thr2 = cfg.threshold_km * cfg.threshold_km

    batch = 256
    enb_pts: np.ndarray | None = None
    tries = 0
    while tries < cfg.max_topology_tries:
        pts = rng.uniform(0.0, cfg.area_km, size=(batch, n_enb, 2))
        diff = pts[:, :, None, :] - pts[:, None, :, :]
        d2 = (diff * diff).sum(axis=3)
        deg = (d2 < thr2).sum(axis=2) - 1  # self-distance 0 counts once
        ok = np.nonzero((deg <= max_deg).all(axis=1))[0]
        tries += batch
        if len(ok):
            enb_pts = pts[ok[0]]
            break
    if enb_pts is None:
        raise TopologyGenerationError(
            f"no topology with max degree {max_deg} found for {n_enb} eNBs "
            f"within {cfg.max_topology_tries} tries"
        )

    radius = propagation.coverage_radius(cfg.radio)
    cpes: list[tuple[tuple[float, float], ...]] = []
    for k in range(n_enb):
        ex, ey = float(enb_pts[k, 0]), float(enb_pts[k, 1])
        sites: list[tuple[float, float]] = []
        while len(sites) < cfg.cpes_per_enb:
            u1, u2 = rng.random(2)
            r = radius * math.sqrt(u1)
            if r < cfg.min_cpe_offset_km:
                continue
            theta = 2.0 * math.pi * u2
            x = ex + r * math.cos(theta)
            y = ey + r * math.sin(theta)
            if 0.0 <= x <= cfg.area_km and 0.0 <= y <= cfg.area_km:
                sites.append((x, y))
        cpes.append(tuple(sites))

    return Topology(
        area_km=cfg.area_km,
        enb_positions=tuple((float(p[0]), float(p[1])) for p in enb_pts),
        cpe_positions=tuple(cpes),
        radio=cfg.radio,
    )


def _evaluate_schemes(cfg: SweepConfig, n_enb: int, seed: int) -> list[SweepRecord]:
    topo = generate_topology(seed, n_enb, cfg)
    c = conflict.build_interference_matrix(topo.enb_positions, cfg.threshold_km)
    mac = macsim.with_seed(cfg.mac, derive_seed(cfg.mac.rng_seed, n_enb, seed))

    records = []
    for scheme in cfg.schemes:
        if scheme == SCHEME_NO_COEX:
            report = macsim.baseline_no_coexistence(topo, c, cfg.plan, mac)
        elif scheme == SCHEME_FULL_LBT:
            report = macsim.baseline_full_lbt(topo, c, cfg.plan, mac)
        else:
            outcome = fcca.fcca(
                c,
                fcca.FccaConfig(delta=cfg.delta, plan=cfg.plan),
                lambda alloc: macsim.evaluate(topo, alloc, c, cfg.plan, mac).per_enb_bps,
            )
            winner = (
                outcome.candidate_mdca
                if outcome.chosen_sub_algorithm is SubAlgorithm.MDCA
                else outcome.candidate_odrs
            )
            report = macsim.make_report(
                winner.throughputs, cfg.plan, outcome.chosen_sub_algorithm
            )
        k = len(report.per_enb_bps)
        records.append(
            SweepRecord(
                seed=seed,
                enb_count=n_enb,
                scheme=scheme,
                mean_spectral_efficiency_bps_hz=sum(report.spectral_efficiency_bps_hz) / k,
                mean_throughput_per_enb_mbps=sum(report.per_enb_bps) / k / 1e6,
                jfi=report.jfi,
                chosen_sub_algorithm=report.sub_algorithm_used.value,
            )
        )
    return records


def _sweep_worker(payload: tuple[SweepConfig, int, int]):
    cfg, n_enb, seed = payload
    try:
        return _evaluate_schemes(cfg, n_enb, seed), None
    except Exception as exc:  # never drop a seed silently
        return None, SweepFailure(seed=seed, enb_count=n_enb, error=f"{type(exc).__name__}: {exc}")


def run_sweep(
    cfg: SweepConfig,
    jobs: int = 1,
    progress=None,
) -> tuple[list[SweepRecord], list[SweepFailure]]:
    """Run the full (density x seed x scheme) grid.

    Work items are independent; with jobs > 1 they run in a process pool
    and results are merged in deterministic item order, so the output is
    identical regardless of parallel width. ``progress`` may be a callable
    taking (done, total).
    """
    items = [(cfg, n, seed) for n in cfg.enb_counts for seed in range(cfg.seeds)]
    records: list[SweepRecord] = []
    failures: list[SweepFailure] = []

    if jobs > 1:
        with multiprocessing.Pool(processes=jobs) as pool:
            results = []
            for done, res in enumerate(pool.imap(_sweep_worker, items, chunksize=4), 1):
                results.append(res)
                if progress:
                    progress(done, len(items))
    else:
        results = []
        for done, item in enumerate(items, 1):
            results.append(_sweep_worker(item))
            if progress:
                progress(done, len(items))

    for recs, failure in results:
        if failure is not None:
            failures.append(failure)
        else:
            records.extend(recs)
    return records, failures


def demand_mbps(
    population_per_village: float,
    villages: float,
    rate_mbps: float,
    contention_ratio: float,
    subscribers_divisor: float,
) -> float:
    """Aggregate downlink demand of a served rural area, in Mbps."""
    for name, v in (
        ("population_per_village", population_per_village),
        ("villages", villages),
        ("rate_mbps", rate_mbps),
    ):
        if v < 0:
            raise ValidationError(f"{name} must be non-negative")
    if contention_ratio <= 0 or subscribers_divisor <= 0:
        raise ValidationError("contention ratio and subscribers divisor must be positive")
    return population_per_village * villages * rate_mbps / (contention_ratio * subscribers_divisor)


def _mean_ci95(values: Sequence[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    if len(arr) < 2:
        return mean, 0.0
    half = 1.96 * float(arr.std(ddof=1)) / math.sqrt(len(arr))
    return mean, half


def summarize(records: Iterable[SweepRecord]) -> list[dict]:
    """Per (density, scheme) means with 95% normal-approximation CIs."""
    groups: dict[tuple[int, str], list[SweepRecord]] = {}
    for r in records:
        groups.setdefault((r.enb_count, r.scheme), []).append(r)

    rows = []
    for (n_enb, scheme) in sorted(groups, key=lambda k: (k[0], ALL_SCHEMES.index(k[1]))):
        recs = groups[(n_enb, scheme)]
        se_mean, se_ci = _mean_ci95([r.mean_spectral_efficiency_bps_hz for r in recs])
        tp_mean, tp_ci = _mean_ci95([r.mean_throughput_per_enb_mbps for r in recs])
        jfi_mean, jfi_ci = _mean_ci95([r.jfi for r in recs])
        if scheme == SCHEME_FCCA:
            mdca_share = sum(
                1 for r in recs if r.chosen_sub_algorithm == SubAlgorithm.MDCA.value
            ) / len(recs)
        else:
            mdca_share = None
        rows.append(
            {
                "enb_count": n_enb,
                "scheme": scheme,
                "n_seeds": len(recs),
                "se_mean": se_mean,
                "se_ci95": se_ci,
                "tput_mean_mbps": tp_mean,
                "tput_ci95_mbps": tp_ci,
                "jfi_mean": jfi_mean,
                "jfi_ci95": jfi_ci,
                "mdca_share": mdca_share,
            }
        )
    return rows


def _fmt(x) -> str:
    if x is None:
        return "N/A"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def emit_results(records: Sequence[SweepRecord], out_dir) -> dict[str, Path]:
    """Write sweep.csv, summary.csv and three metric-vs-density SVG charts."""
    if not records:
        raise ValidationError("no records to emit")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    sweep_path = out / "sweep.csv"
    with sweep_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_CSV_COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.seed,
                    r.enb_count,
                    r.scheme,
                    _fmt(r.mean_spectral_efficiency_bps_hz),
                    _fmt(r.mean_throughput_per_enb_mbps),
                    _fmt(r.jfi),
                    r.chosen_sub_algorithm,
                ]
            )
    paths["sweep"] = sweep_path

    rows = summarize(records)
    summary_path = out / "summary.csv"
    with summary_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_CSV_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row[col]) for col in SUMMARY_CSV_COLUMNS])
    paths["summary"] = summary_path

    paths.update(_emit_charts(rows, out))
    return paths


def _emit_charts(summary_rows: list[dict], out: Path) -> dict[str, Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    metric_axes = {
        "se": ("se_mean", "se_ci95", "Mean spectral efficiency per eNB (b/s/Hz)"),
        "tput": ("tput_mean_mbps", "tput_ci95_mbps", "Mean throughput per eNB (Mbps)"),
        "jfi": ("jfi_mean", "jfi_ci95", "Jain's fairness index"),
    }
    schemes = sorted({row["scheme"] for row in summary_rows}, key=ALL_SCHEMES.index)
    paths: dict[str, Path] = {}
    for key, (mean_col, ci_col, ylabel) in metric_axes.items():
        fig, ax = plt.subplots(figsize=(6, 4))
        for scheme in schemes:
            pts = [(r["enb_count"], r[mean_col], r[ci_col]) for r in summary_rows if r["scheme"] == scheme]
            pts.sort()
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            errs = [p[2] for p in pts]
            ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=3, label=scheme)
        ax.set_xlabel("eNBs in area")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.4)
        ax.legend()
        fig.tight_layout()
        path = out / CHART_FILES[key]
        fig.savefig(path, format="svg")
        plt.close(fig)
        paths[key] = path
    return paths


def selection_shares(records: Iterable[SweepRecord]) -> dict[int, dict[str, float]]:
    """Fraction of FCCA seeds won by each sub-algorithm, per density."""
    counts: dict[int, dict[str, int]] = {}
    for r in records:
        if r.scheme != SCHEME_FCCA:
            continue
        d = counts.setdefault(r.enb_count, {"MDCA": 0, "ODRS_CA": 0, "total": 0})
        d["total"] += 1
        if r.chosen_sub_algorithm == SubAlgorithm.MDCA.value:
            d["MDCA"] += 1
        elif r.chosen_sub_algorithm == SubAlgorithm.ODRS_CA.value:
            d["ODRS_CA"] += 1
    return {
        n: {
            "MDCA": d["MDCA"] / d["total"],
            "ODRS_CA": d["ODRS_CA"] / d["total"],
        }
        for n, d in counts.items()
        if d["total"]
    }
