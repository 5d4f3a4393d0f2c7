"""Plan one full-size scenario with all three methods and draw the routes.

    python scripts/demo_trajectories.py --seed 33 --out demo.svg
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from handover_uav.baselines import genetic_plan, shortest_time_plan
from handover_uav.model import radii
from handover_uav.solver import Infeasible, solve
from handover_uav.suites import reference_scenario
from handover_uav.trajectory import validate_plan

STYLES = {"proposed": "C3-", "shortest_time": "C0--", "genetic": "C2:"}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=33)
    ap.add_argument("--t-max", type=float, default=270.0)
    ap.add_argument("--out", default="demo.svg")
    args = ap.parse_args()

    sc = reference_scenario(args.seed, t_max=args.t_max)
    plans = {}
    for name, planner in (("proposed", solve), ("shortest_time", shortest_time_plan), ("genetic", genetic_plan)):
        try:
            plan = planner(sc)
        except Infeasible as exc:
            print(f"{name:14s} infeasible: {exc}")
            continue
        ok = validate_plan(sc, plan).feasible
        print(f"{name:14s} handovers={plan.handovers} time_s={plan.mission_time:7.2f} valid={ok} association={list(plan.association)}")
        plans[name] = plan

    plt.rcParams["svg.hashsalt"] = "handover-uav"
    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    r = radii(sc)
    for g in sc.gbs_list:
        if r[g.id] is not None:
            ax.add_patch(plt.Circle(g.position, r[g.id], fill=False, lw=0.5, color="0.7"))
        ax.plot(*g.position, "k^", ms=4)
        ax.annotate(str(g.id), g.position, fontsize=7, xytext=(3, 3), textcoords="offset points")
    for name, plan in plans.items():
        xs, ys = zip(*(w.position for w in plan.waypoints))
        ax.plot(xs, ys, STYLES[name], lw=1.5, label=f"{name} ({plan.handovers} handovers)")
    ax.plot(*sc.start, "ko")
    ax.plot(*sc.finish, "ks")
    ax.set_xlim(0, 10_000)
    ax.set_ylim(0, 10_000)
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend(loc="upper left", fontsize=8)
    fig.savefig(args.out, metadata={"Date": None})
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
