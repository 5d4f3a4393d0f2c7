"""Handovers versus T_max and versus the SNR threshold, for one seeded scenario.

Writes ``<outdir>/t_max.{csv,svg}`` and ``<outdir>/snr_threshold_db.{csv,svg}``
through the same code path as ``handover-uav sweep``.
"""

import argparse
from pathlib import Path

from handover_uav.baselines import GaConfig
from handover_uav.cli import METHODS, SweepSpec, run_sweep, sweep_csv, sweep_svg
from handover_uav.solver import SolverConfig
from handover_uav.suites import reference_scenario

GRIDS = {
    "t_max": tuple(float(v) for v in range(230, 411, 15)),
    "snr_threshold_db": tuple(float(v) for v in range(10, 25)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=33)
    ap.add_argument("--outdir", default="sweeps")
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    scen_path = out / "scenario.json"
    sc = reference_scenario(args.seed)
    sc.save(scen_path)

    for axis, values in GRIDS.items():
        rows = run_sweep(sc, SweepSpec(axis, values, str(scen_path), METHODS), SolverConfig(), GaConfig(), args.jobs)
        (out / f"{axis}.csv").write_text(sweep_csv(rows))
        (out / f"{axis}.svg").write_text(sweep_svg(rows, axis))
        print(f"{axis}:")
        for m in METHODS:
            print(f"  {m:14s}", " ".join("-" if r.handovers is None else str(r.handovers) for r in rows if r.method == m))


if __name__ == "__main__":
    main()
