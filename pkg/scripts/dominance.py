"""Handover counts of the three methods over many full-size scenarios.

Reports how often the proposed plan is no worse than, and strictly better
than, each baseline.  ``--start``/``--finish`` move the mission endpoints
(fractions of the region side) to see how much the margin depends on them.
"""

import argparse

from handover_uav.baselines import GaConfig, genetic_plan, shortest_time_plan
from handover_uav.solver import Infeasible, solve
from handover_uav.suites import reference_scenario


def frac_pair(text):
    x, y = (float(v) for v in text.split(","))
    return (x, y)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--start", type=frac_pair, default=(0.1, 0.1))
    ap.add_argument("--finish", type=frac_pair, default=(0.9, 0.9))
    ap.add_argument("--no-ga", action="store_true", help="skip the genetic baseline (much faster)")
    args = ap.parse_args()

    rows, seed = [], 0
    while len(rows) < args.instances and seed < 50 * args.instances:
        sc = reference_scenario(seed, start_frac=args.start, finish_frac=args.finish)
        seed += 1
        try:
            p, s = solve(sc).handovers, shortest_time_plan(sc).handovers
            g = None if args.no_ga else genetic_plan(sc, GaConfig()).handovers
        except Infeasible:
            continue
        rows.append((seed - 1, p, s, g))
        print(f"seed={seed - 1:4d} proposed={p} shortest_time={s} genetic={g}")

    n = len(rows)
    print(f"\n{n} feasible instances out of {seed} seeds")
    print(f"proposed <= shortest_time: {sum(p <= s for _, p, s, _ in rows)}/{n}")
    print(f"proposed <  shortest_time: {sum(p < s for _, p, s, _ in rows)}/{n}")
    print(f"shortest_time with 0 handovers: {sum(s == 0 for _, _, s, _ in rows)}/{n}")
    if not args.no_ga:
        print(f"proposed <= genetic: {sum(p <= g for _, p, _, g in rows)}/{n}")
        print(f"proposed <  genetic: {sum(p < g for _, p, _, g in rows)}/{n}")


if __name__ == "__main__":
    main()
