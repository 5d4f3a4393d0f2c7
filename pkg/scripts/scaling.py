"""Solve time against the number of stations, with a binding T_max."""

import argparse
import statistics
import time

from handover_uav.solver import SolverConfig, solve
from handover_uav.suites import scaled_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="10,20,50,100,150,200")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--k", type=int, default=50)
    args = ap.parse_args()

    cfg = SolverConfig(k_candidates=args.k)
    print("M,solves,median_s,max_s,median_dual_iters")
    for m in (int(v) for v in args.sizes.split(",")):
        times, iters = [], []
        for seed in range(args.seeds * 3):
            if len(times) == args.seeds:
                break
            sc = scaled_scenario(seed, m)
            if sc is None:
                continue
            t0 = time.perf_counter()
            plan = solve(sc, cfg)
            times.append(time.perf_counter() - t0)
            iters.append(plan.solver_meta["dual_iterations"])
        if times:
            print(f"{m},{len(times)},{statistics.median(times):.4f},{max(times):.4f},{statistics.median(iters)}")


if __name__ == "__main__":
    main()
