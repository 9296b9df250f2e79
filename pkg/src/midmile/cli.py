"""Command-line entry point.

Subcommands cover the full workflow: link-budget/coverage inspection,
channel allocation, MAC simulation of an allocation, the Monte-Carlo
density sweep, and the rural demand calculator.

Exit codes: 0 success, 1 validation/config error, 2 I/O error,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import conflict, experiment, fcca, fileio, macsim, propagation
from .errors import InvariantError
from .kernel import active_kernel_name
from .model import validate_topology


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="midmile",
        description="Channel allocation and LBT coexistence simulator for "
        "TV-white-space middle-mile networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coverage", help="print the link budget and coverage radius")
    p.add_argument("--config", required=True, help="radio configuration file")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("allocate", help="run FCCA on a topology and write both candidates")
    p.add_argument("--topology", required=True, help="topology configuration file")
    p.add_argument("--out", required=True, help="output directory for allocation files")
    p.add_argument("--delta", type=float, default=0.75, help="fairness threshold (default 0.75)")
    p.add_argument("--seed", type=int, default=None, help="override the MAC RNG seed")
    p.add_argument("--sim-time", type=float, default=None, help="evaluator simulation time, seconds")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("simulate", help="simulate one allocation and emit a throughput CSV row")
    p.add_argument("--topology", required=True, help="topology configuration file")
    p.add_argument("--allocation", required=True, help="allocation matrix file (0/D/S cells)")
    p.add_argument("--seed", type=int, default=None, help="override the MAC RNG seed")
    p.add_argument("--sim-time", type=float, default=None, help="simulation time, seconds")
    p.add_argument("--out", default=None, help="write the CSV to this file instead of stdout")
    p.add_argument(
        "--trace",
        default=None,
        help="write per-channel occupancy intervals (channel start_slot "
        "end_slot enb,enb,...) to this file",
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run the density sweep and emit CSVs and SVG charts")
    p.add_argument("--config", default=None, help="sweep configuration file (defaults apply)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--densities", default=None, help="comma list overriding eNB counts, e.g. 3,5,10")
    p.add_argument("--seeds", type=int, default=None, help="override the number of seeds")
    p.add_argument("--sim-time", type=float, default=None, help="override simulation time, seconds")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes (default 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("demand", help="aggregate rural broadband demand in Mbps")
    p.add_argument("--population", type=float, default=1000, help="people per village (default 1000)")
    p.add_argument("--villages", type=float, default=10, help="villages served (default 10)")
    p.add_argument("--rate-mbps", type=float, default=2, help="per-subscriber rate (default 2)")
    p.add_argument("--contention", type=float, default=50, help="contention ratio (default 50)")
    p.add_argument(
        "--subscribers-divisor",
        type=float,
        default=5,
        help="people per subscribing household (default 5)",
    )
    p.set_defaults(func=cmd_demand)

    return parser


def cmd_coverage(args) -> int:
    kv = fileio.read_kv(args.config)
    radio = fileio.radio_from_kv(kv)
    plan = fileio.plan_from_kv(kv)
    budget = propagation.link_budget(radio, plan.channel_bandwidth_hz)

    print("link budget terms (dB / dBm):")
    terms = [
        ("tx_power_dbm", radio.tx_power_dbm, "+"),
        ("tx_gain_db", radio.tx_gain_db, "+"),
        ("rx_gain_db", radio.rx_gain_db, "+"),
        ("cable_loss_db", radio.cable_loss_db, "-"),
        ("noise_figure_db", radio.noise_figure_db, "-"),
        ("rx_sensitivity_dbm", radio.rx_sensitivity_dbm, "-"),
    ]
    for name, value, sign in terms:
        print(f"  {sign} {name:<20} {value:8.2f}")
    print(f"max_allowed_path_loss_db = {budget.max_allowed_pl_db:.2f}")
    print(f"noise_floor_dbm          = {budget.noise_floor_dbm:.2f}")
    radius = propagation.coverage_radius(radio)
    print(f"coverage_radius_km       = {radius:.3f}")
    return 0


def _mac_from_overrides(kv: dict[str, str], seed, sim_time) -> macsim.MacConfig:
    mac = fileio.mac_from_kv(kv)
    if seed is not None:
        mac = replace(mac, rng_seed=seed)
    if sim_time is not None:
        mac = replace(mac, sim_time_s=sim_time)
    return mac


def _load_validated_topology(path, seed, sim_time):
    topo, kv = fileio.load_topology(path)
    plan = fileio.plan_from_kv(kv)
    threshold = float(kv.get("threshold_km", 4.0))
    violations = validate_topology(topo, plan, threshold)
    if violations:
        raise fileio.ConfigError(
            "topology validation failed:\n  " + "\n  ".join(violations)
        )
    mac = _mac_from_overrides(kv, seed, sim_time)
    c = conflict.build_interference_matrix(topo.enb_positions, threshold)
    return topo, plan, c, mac


def cmd_allocate(args) -> int:
    topo, plan, c, mac = _load_validated_topology(args.topology, args.seed, args.sim_time)
    outcome = fcca.fcca(
        c,
        fcca.FccaConfig(delta=args.delta, plan=plan),
        lambda alloc: macsim.evaluate(topo, alloc, c, plan, mac).per_enb_bps,
    )

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_allocation(outcome.candidate_mdca.allocation, out / "mdca.alloc")
    fileio.write_allocation(outcome.candidate_odrs.allocation, out / "odrs_ca.alloc")
    fileio.write_allocation(outcome.chosen, out / "chosen.alloc")

    c1, c2 = outcome.candidate_mdca, outcome.candidate_odrs
    print(f"MDCA:    sum_throughput = {c1.sum_throughput / 1e6:.3f} Mbps, F1 = {c1.fairness:.4f}")
    print(f"ODRS-CA: sum_throughput = {c2.sum_throughput / 1e6:.3f} Mbps, F2 = {c2.fairness:.4f}")
    print(f"delta = {args.delta}")
    print(f"chosen = {outcome.chosen_sub_algorithm.value} ({outcome.selection_reason})")
    print(f"wrote mdca.alloc, odrs_ca.alloc, chosen.alloc to {out}")
    return 0


def cmd_simulate(args) -> int:
    topo, plan, c, mac = _load_validated_topology(args.topology, args.seed, args.sim_time)
    alloc = fileio.read_allocation(args.allocation)
    trace: list | None = [] if args.trace else None
    report = macsim.evaluate(topo, alloc, c, plan, mac, trace=trace)

    k = topo.n_enb
    header = "enb_count,jfi,mean_throughput_per_enb_mbps,mean_spectral_efficiency_bps_hz,per_enb_mbps"
    row = ",".join(
        [
            str(k),
            f"{report.jfi:.10g}",
            f"{sum(report.per_enb_bps) / k / 1e6:.10g}",
            f"{sum(report.spectral_efficiency_bps_hz) / k:.10g}",
            "|".join(f"{t / 1e6:.10g}" for t in report.per_enb_bps),
        ]
    )
    text = header + "\n" + row + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)

    if args.trace:
        with Path(args.trace).open("w") as fh:
            fh.write("# channel start_slot end_slot transmitting_enbs\n")
            for channel, t0, t1, txers in trace:
                fh.write(f"{channel} {t0} {t1} {','.join(map(str, txers))}\n")
    return 0


def cmd_sweep(args) -> int:
    if args.config:
        cfg = fileio.sweep_from_kv(fileio.read_kv(args.config))
    else:
        cfg = experiment.SweepConfig()
    if args.densities:
        counts = tuple(int(p) for p in args.densities.split(","))
        cfg = replace(cfg, enb_counts=counts)
    if args.seeds is not None:
        cfg = replace(cfg, seeds=args.seeds)
    if args.sim_time is not None:
        cfg = replace(cfg, mac=replace(cfg.mac, sim_time_s=args.sim_time))

    # progress goes to stdout: a clean stderr is the success contract
    def progress(done, total):
        if done % 50 == 0 or done == total:
            print(f"  {done}/{total} items")

    print(f"kernel: {active_kernel_name()}")
    records, failures = experiment.run_sweep(cfg, jobs=args.jobs, progress=progress)
    if records:
        paths = experiment.emit_results(records, args.out)
        print(f"wrote {paths['sweep']}, {paths['summary']} and {len(experiment.CHART_FILES)} charts")
    if failures:
        for f in failures:
            print(f"FAILED seed={f.seed} enb_count={f.enb_count}: {f.error}", file=sys.stderr)
        return 1
    return 0


def cmd_demand(args) -> int:
    mbps = experiment.demand_mbps(
        args.population, args.villages, args.rate_mbps, args.contention, args.subscribers_divisor
    )
    print(f"{mbps:.10g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
