"""Compare the compiled and pure-Python kernels on the same workloads.

    python benchmarks/bench_backends.py --runs 20000
"""

import argparse
import time

from selfrepair import codes, kernels
from selfrepair.engine import LossMode, SimConfig, kernel_plan

WORKLOADS = [
    ("twod:10 / 33 spares", SimConfig(codes.parse_scheme("twod:10"), spares=33)),
    ("twod:12 / unlimited", SimConfig(codes.parse_scheme("twod:12"), spares=None)),
    ("raid6:2x12 / unlimited", SimConfig(codes.parse_scheme("raid6:2x12"), spares=None)),
    ("tp:1x15 / 13 spares", SimConfig(codes.parse_scheme("tp:1x15"), spares=13)),
    ("twod:10 / 33, profile", SimConfig(codes.parse_scheme("twod:10"), spares=33,
                                        loss_mode=LossMode.PROFILE)),
]


def timed(fn, *args):
    t0 = time.perf_counter()
    res = fn(*args)
    return res, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=20_000, help="runs per workload for the Python kernel")
    ap.add_argument("--scale", type=int, default=20, help="compiled kernel runs this many times more")
    args = ap.parse_args(argv)

    if kernels.BACKEND == "python":
        raise SystemExit("compiled kernel not available; build it with pip install -e .")
    print(f"{'workload':<24} {'python us/run':>14} {'cython us/run':>14} {'speedup':>8}  agree")
    for name, cfg in WORKLOADS:
        plan = kernel_plan(cfg)
        py, t_py = timed(kernels.python.run_campaign, plan, 0, 0, args.runs)
        cy_same, _ = timed(kernels.backend.run_campaign, plan, 0, 0, args.runs)
        _, t_cy = timed(kernels.backend.run_campaign, plan, 0, 0, args.runs * args.scale)
        us_py = 1e6 * t_py / args.runs
        us_cy = 1e6 * t_cy / (args.runs * args.scale)
        print(f"{name:<24} {us_py:>14.2f} {us_cy:>14.3f} {us_py / us_cy:>7.0f}x  {py == cy_same}")

    scheme = codes.parse_scheme("twod:8")
    cols = scheme.columns()
    _, t_py = timed(kernels.python.count_recoverable, 0, cols, 0, 0, scheme.size, 5)
    _, t_cy = timed(kernels.backend.count_recoverable, 0, cols, 0, 0, scheme.size, 5)
    print(f"{'enumerate twod:8, k<=5':<24} {t_py:>13.2f}s {t_cy:>13.3f}s {t_py / t_cy:>7.0f}x")


if __name__ == "__main__":
    main()
