"""Command-line front end: ``analyze``, ``simulate``, ``sweep`` and ``table``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import closed_form, config as cfgmod, kernels
from .codes import (DEFAULT_BUDGET, TWOD, ArrayScheme, EnumerationBudgetExceeded,
                    SurvivalProfile, build_scheme, parse_scheme, survival_profile)
from .engine import (ConfigError, ExhaustionPolicy, LossMode, SimConfig, TargetUnreachable,
                     default_workers, min_spares_for_target, simulate)
from .failure_model import RateInterpretation
from .stats import ReliabilityEstimate, format_nines, format_nines_ci, format_overhead, space_overhead
from .tables import TABLES, intervals_overlap

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_INTERRUPTED = 130

CSV_COLUMNS = ["scheme", "data", "parity", "spares", "runs", "losses", "exhaustions", "R",
               "ci_low", "ci_high", "nines_low", "nines_high", "wall_time"]
PROFILE_COLUMNS = ["scheme", "N", "n_f", "method",
                   "f1_num", "f1_den", "f1", "f2_num", "f2_den", "f2", "f3_num", "f3_den", "f3"]
DEFAULT_TABLE_RUNS = 20_000_000


def _scheme_from_args(args) -> ArrayScheme:
    if args.twod is not None:
        return build_scheme(TWOD, args.twod)
    if args.raid6 is not None:
        return parse_scheme(f"raid6:{args.raid6}")
    return parse_scheme(f"tp:{args.tp}")


def _add_scheme_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--twod", type=int, metavar="N", help="complete 2D array with N parity stripes")
    g.add_argument("--raid6", metavar="MxN", help="M RAID-6 groups of N disks")
    g.add_argument("--tp", metavar="MxN", help="M triple-parity groups of N disks")


def _add_sim_args(p, runs_default=None):
    p.add_argument("--runs", type=int, default=runs_default)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--mode", choices=[m.value for m in LossMode])
    p.add_argument("--interp", choices=["hazard", "afr"])
    p.add_argument("--exhaustion", choices=[e.value for e in ExhaustionPolicy])
    p.add_argument("--out", help="directory for CSV/JSON results")


def _apply_overrides(sim: SimConfig, args) -> SimConfig:
    kw = {}
    if args.runs is not None:
        kw["runs"] = args.runs
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.mode:
        kw["loss_mode"] = LossMode(args.mode)
    if args.interp:
        kw["interp"] = RateInterpretation(args.interp)
    if args.exhaustion:
        kw["exhaustion"] = ExhaustionPolicy(args.exhaustion)
    return replace(sim, **kw).validate() if kw else sim.validate()


def _spares_text(spares) -> str:
    return "∞" if spares is None else str(spares)


def _overhead(scheme: ArrayScheme, spares) -> float:
    return space_overhead(scheme.data_count, scheme.parity_count, spares)


def format_row(scheme: ArrayScheme, spares, est: ReliabilityEstimate) -> str:
    return (f"{scheme.data_count:>6} {scheme.parity_count:>7} {_spares_text(spares):>7} "
            f"{format_overhead(_overhead(scheme, spares)):>9}   {format_nines_ci(est.nines_ci)}")


ROW_HEADER = f"{'data':>6} {'parity':>7} {'spares':>7} {'overhead':>9}   nines 95% CI"


def _fmt_float(x: float) -> str:
    return "inf" if math.isinf(x) else repr(x)


def csv_row(sim: SimConfig, est: ReliabilityEstimate, wall: float | None) -> list:
    lo, hi = est.ci
    nlo, nhi = est.nines_ci
    return [sim.scheme.descriptor, sim.scheme.data_count, sim.scheme.parity_count,
            "unlimited" if sim.spares is None else sim.spares, est.runs, est.losses,
            est.exhaustions, repr(est.reliability), repr(lo), repr(hi),
            _fmt_float(nlo), _fmt_float(nhi), "" if wall is None else f"{wall:.3f}"]


def append_csv(path: Path, row: list):
    path.parent.mkdir(parents=True, exist_ok=True)
    new = not path.exists()
    with path.open("a", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(CSV_COLUMNS)
        w.writerow(row)
        fh.flush()


def result_record(name: str, sim: SimConfig, est: ReliabilityEstimate, wall: float | None) -> dict:
    nlo, nhi = est.nines_ci
    norm = est.normal_nines_ci
    return {
        "name": name,
        "config": cfgmod.sim_to_dict(sim),
        "backend": kernels.BACKEND,
        "runs": est.runs,
        "losses": est.losses,
        "fatal_pattern_losses": est.fatal_losses,
        "policy_losses": est.policy_losses,
        "exhaustions": est.exhaustions,
        "mean_peak_concurrent_failures": est.mean_peak,
        "reliability": est.reliability,
        "ci": list(est.ci),
        "nines": None if math.isinf(est.nines) else est.nines,
        "nines_ci": [None if math.isinf(x) else x for x in (nlo, nhi)],
        "normal_nines_ci": [None if math.isinf(x) else x for x in norm],
        "space_overhead": None if sim.spares is None else _overhead(sim.scheme, sim.spares),
        "wall_time": wall,
    }


# ---------------------------------------------------------------- analyze

def _fraction_text(f) -> str:
    if isinstance(f, Fraction):
        return f"{f.numerator}/{f.denominator} ({float(f):.12g})"
    return f"~{f:.12g}"


def profile_record(scheme: ArrayScheme, prof: SurvivalProfile) -> dict:
    rec = {"scheme": scheme.descriptor, "N": prof.size, "n_f": prof.n_f, "method": prof.method}
    for j, f in enumerate(prof.fractions, 1):
        if isinstance(f, Fraction):
            rec[f"f{j}_num"], rec[f"f{j}_den"] = f.numerator, f.denominator
        else:
            rec[f"f{j}_num"] = rec[f"f{j}_den"] = None
        rec[f"f{j}"] = f"{float(f):.12g}"
    if prof.stderr is not None:
        rec["stderr"] = [f"{s:.3g}" for s in prof.stderr]
    return rec


def cmd_analyze(args) -> int:
    try:
        scheme = _scheme_from_args(args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        prof = survival_profile(scheme, budget=args.budget, allow_sampling=args.allow_sampling,
                                samples=args.samples, seed=args.seed or 0)
    except EnumerationBudgetExceeded as exc:
        print(f"refusing: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"scheme {scheme.descriptor}: N = {prof.size}, n_f = {prof.n_f} ({prof.method})")
    records = [profile_record(scheme, prof)]
    closed = None
    if scheme.variant != TWOD:
        closed = closed_form.profile_from_closed_form(scheme.m, scheme.n, scheme.parity_equiv)
        records.append(profile_record(scheme, closed))
    for j in range(3):
        line = f"  f{j + 1} = {_fraction_text(prof.fractions[j])}"
        if closed is not None:
            line += f"    closed form: {_fraction_text(closed.fractions[j])}"
        print(line)
    if closed is not None:
        if not prof.exact:
            print("verdict: enumeration was sampled; no exact comparison")
        elif closed.fractions == prof.fractions:
            print("verdict: closed-form = enumeration")
        else:
            print("verdict: MISMATCH between closed form and enumeration")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with (out / "profiles.csv").open("w", newline="") as fh:
            w = csv.DictWriter(fh, PROFILE_COLUMNS, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            w.writerows(records)
        (out / "profiles.json").write_text(json.dumps(records, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    try:
        campaign = cfgmod.load(args.config)
        sims = [(nc, _apply_overrides(nc.sim, args)) for nc in campaign.configs]
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    workers = args.workers or campaign.workers or default_workers()
    print(ROW_HEADER)
    try:
        for nc, sim in sims:
            out = Path(args.out) if args.out else campaign.output_dir(nc)
            t0 = time.perf_counter()
            est = simulate(sim, workers=workers)
            wall = None if args.no_timing else time.perf_counter() - t0
            print(f"{format_row(sim.scheme, sim.spares, est)}   [{nc.name}]", flush=True)
            append_csv(out / "results.csv", csv_row(sim, est, wall))
            rec = result_record(nc.name, sim, est, wall)
            (out / f"{nc.name}.json").write_text(json.dumps(rec, indent=2) + "\n")
    except KeyboardInterrupt:
        print("interrupted; completed rows were written", file=sys.stderr)
        return EXIT_INTERRUPTED
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


# ---------------------------------------------------------------- sweep

def _sim_from_args(scheme: ArrayScheme, spares, args) -> SimConfig:
    base = SimConfig(scheme, spares=spares, runs=args.runs or 1_000_000, seed=args.seed or 0)
    return _apply_overrides(base, args)


def cmd_sweep(args) -> int:
    try:
        scheme = _scheme_from_args(args)
        sim = _sim_from_args(scheme, None, args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    workers = args.workers or default_workers()
    print(f"sweep {scheme.descriptor} for {args.target} nines, {sim.runs} runs per probe")
    try:
        result = min_spares_for_target(sim, args.target, workers=workers)
        trace = result.trace
        verdict = (f"minimal spares: {result.spares} "
                   f"(overhead {format_overhead(_overhead(scheme, result.spares))})")
    except TargetUnreachable as exc:
        trace = exc.trace
        verdict = f"unreachable: {exc}"
    for spares, est in trace:
        print(f"  spares {_spares_text(spares):>5}   nines {format_nines(est.nines):>5}   "
              f"CI {format_nines_ci(est.nines_ci)}")
    print(verdict)
    if args.out:
        out = Path(args.out)
        for spares, est in trace:
            append_csv(out / "results.csv", csv_row(replace(sim, spares=spares), est, None))
    return EXIT_OK


# ---------------------------------------------------------------- table

def cmd_table(args) -> int:
    title, rows = TABLES[args.table]
    workers = args.workers or default_workers()
    runs = args.runs or DEFAULT_TABLE_RUNS
    print(f"Table {args.table}: {title} ({runs} runs per row)")
    print(f"{ROW_HEADER:<60} reference CI    verdict")
    try:
        for row in rows:
            sim = _apply_overrides(SimConfig(row.scheme, spares=row.spares, runs=runs,
                                             seed=args.seed or 0), args)
            t0 = time.perf_counter()
            est = simulate(sim, workers=workers)
            wall = time.perf_counter() - t0
            printed = format_overhead(_overhead(row.scheme, row.spares))
            ok = intervals_overlap(est.nines_ci, row.nines_ci)
            flag = "" if printed == row.overhead else f"  overhead differs from printed {row.overhead}"
            print(f"{format_row(row.scheme, row.spares, est):<60} "
                  f"{format_nines_ci(row.nines_ci):<15} {'overlap' if ok else 'no overlap'}{flag}",
                  flush=True)
            if args.out:
                append_csv(Path(args.out) / "results.csv", csv_row(sim, est, wall))
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfrepair", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="survival profile of an array scheme")
    _add_scheme_args(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--allow-sampling", action="store_true")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run the simulations of a campaign config file")
    p.add_argument("config")
    _add_sim_args(p)
    p.add_argument("--no-timing", action="store_true",
                   help="leave the wall_time column empty so reruns are byte-identical")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="smallest spare pool reaching a nines target")
    _add_scheme_args(p)
    p.add_argument("--target", type=float, required=True)
    _add_sim_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table", help="rerun a reference reliability table")
    p.add_argument("table", type=int, choices=sorted(TABLES))
    _add_sim_args(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
