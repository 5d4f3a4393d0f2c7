"""Turn an association sequence into a flyable trajectory, and check plans.

The UAV flies start -> top of the first station -> top of the next station
-> ... -> finish, always at full speed.  Service switches from station
``I[i-1]`` to ``I[i]`` where the centre-to-centre segment leaves the disk of
``I[i-1]``; if the next station's top is already inside that disk, the switch
happens at the next top instead (an "interior" handover).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Any, Optional, Sequence

import numpy as np

from .model import Point, Scenario, coverage_radius, distance, linear_to_db, snr

# relative slack on disk membership; handover points sit on a disk boundary
DISK_REL_SLACK = 1e-9
SPEED_REL_SLACK = 1e-9


class InvalidAssociation(ValueError):
    pass


@dataclass(frozen=True)
class Waypoint:
    """Polyline vertex.  ``serving_gbs`` serves from this instant until the next waypoint."""

    time: float
    position: Point
    serving_gbs: int


@dataclass
class Plan:
    association: tuple[int, ...]
    handovers: int
    mission_time: float
    handover_points: list[Point]
    waypoints: list[Waypoint]
    solver_meta: dict[str, Any] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return bool(self.solver_meta.get("feasible", False))

    def to_dict(self) -> dict:
        return {
            "association": list(self.association),
            "handovers": self.handovers,
            "mission_time_s": self.mission_time,
            "handover_points_m": [list(p) for p in self.handover_points],
            "waypoints": [
                {"t_s": w.time, "xy_m": list(w.position), "serving_gbs": w.serving_gbs} for w in self.waypoints
            ],
            "solver_meta": dict(self.solver_meta),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Plan":
        return cls(
            association=tuple(int(i) for i in doc["association"]),
            handovers=int(doc["handovers"]),
            mission_time=float(doc["mission_time_s"]),
            handover_points=[(float(p[0]), float(p[1])) for p in doc["handover_points_m"]],
            waypoints=[
                Waypoint(float(w["t_s"]), (float(w["xy_m"][0]), float(w["xy_m"][1])), int(w["serving_gbs"]))
                for w in doc["waypoints"]
            ],
            solver_meta=dict(doc.get("solver_meta", {})),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def save(self, path) -> None:
        FsPath(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Plan":
        return cls.from_dict(json.loads(FsPath(path).read_text(encoding="utf-8")))


def _radius(scenario: Scenario, gbs_id: int) -> float:
    r = coverage_radius(scenario.gbs(gbs_id), scenario)
    if r is None:
        raise InvalidAssociation(f"GBS {gbs_id} has no coverage at altitude {scenario.uav_height} m")
    return r


def _check_association(scenario: Scenario, association: Sequence[int]) -> None:
    if not association:
        raise InvalidAssociation("association sequence is empty")
    if len(set(association)) != len(association):
        raise InvalidAssociation(f"association repeats a GBS: {list(association)}")
    for a, b in zip(association, association[1:]):
        ga, gb = scenario.gbs(a), scenario.gbs(b)
        if distance(ga.position, gb.position) > _radius(scenario, a) + _radius(scenario, b):
            raise InvalidAssociation(f"coverage disks of GBS {a} and {b} do not overlap")
    _radius(scenario, association[-1])


def handover_points(scenario: Scenario, association: Sequence[int]) -> list[Point]:
    """Handover locations ``[u_0, u_1, ..., u_N, u_{N+1}]``.

    ``u_0`` and ``u_{N+1}`` are the mission endpoints; ``u_i`` lies on the
    segment from station ``I[i-1]`` to ``I[i]`` at distance
    ``min(radius[I[i-1]], L_i)`` from ``I[i-1]``.
    """
    _check_association(scenario, association)
    pts: list[Point] = [scenario.start]
    for a, b in zip(association, association[1:]):
        ga, gb = scenario.gbs(a).position, scenario.gbs(b).position
        L = distance(ga, gb)
        r = _radius(scenario, a)
        if L <= r:
            pts.append(gb)
        else:
            s = r / L
            pts.append((ga[0] + s * (gb[0] - ga[0]), ga[1] + s * (gb[1] - ga[1])))
    pts.append(scenario.finish)
    return pts


def mission_time(scenario: Scenario, association: Sequence[int]) -> float:
    g = [scenario.gbs(i).position for i in association]
    total = distance(scenario.start, g[0]) + distance(scenario.finish, g[-1])
    total += sum(distance(p, q) for p, q in zip(g, g[1:]))
    return total / scenario.v_max


def build_trajectory(scenario: Scenario, association: Sequence[int]) -> list[Waypoint]:
    hp = handover_points(scenario, association)
    stops: list[tuple[Point, int]] = [(scenario.start, association[0])]
    stops.append((scenario.gbs(association[0]).position, association[0]))
    for i, gid in enumerate(association[1:], start=1):
        stops.append((hp[i], gid))
        stops.append((scenario.gbs(gid).position, gid))
    stops.append((scenario.finish, association[-1]))

    waypoints: list[Waypoint] = []
    t = 0.0
    for pos, gid in stops:
        if waypoints and waypoints[-1].position == pos:
            # zero-length hop: a switch here happens at the existing waypoint
            waypoints[-1] = Waypoint(waypoints[-1].time, pos, gid)
            continue
        if waypoints:
            t += distance(waypoints[-1].position, pos) / scenario.v_max
        waypoints.append(Waypoint(t, pos, gid))
    if len(waypoints) == 1:
        # start, station top and finish all coincide
        waypoints.append(Waypoint(0.0, waypoints[0].position, association[-1]))
    return waypoints


def make_plan(scenario: Scenario, association: Sequence[int], **meta: Any) -> Plan:
    association = tuple(association)
    waypoints = build_trajectory(scenario, association)
    meta.setdefault("feasible", True)
    return Plan(
        association=association,
        handovers=len(association) - 1,
        mission_time=mission_time(scenario, association),
        handover_points=handover_points(scenario, association),
        waypoints=waypoints,
        solver_meta=meta,
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    constraint: str
    message: str


@dataclass(frozen=True)
class HandoverEvent:
    time: float
    location: Point
    from_gbs: int
    to_gbs: int


@dataclass
class FlightTrace:
    handover_events: list[HandoverEvent]
    min_snr_linear: float
    feasible: bool
    violations: list[Violation] = field(default_factory=list)
    interior_handovers: list[int] = field(default_factory=list)

    @property
    def first_violation(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "min_snr_linear": self.min_snr_linear,
            "min_snr_db": linear_to_db(self.min_snr_linear) if self.min_snr_linear > 0 else None,
            "handover_events": [
                {"t_s": e.time, "xy_m": list(e.location), "from_gbs": e.from_gbs, "to_gbs": e.to_gbs}
                for e in self.handover_events
            ],
            "interior_handovers": list(self.interior_handovers),
            "violations": [{"constraint": v.constraint, "message": v.message} for v in self.violations],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def validate_plan(scenario: Scenario, plan: Plan, time_tolerance: float = 1e-6) -> FlightTrace:
    """Check a plan against the continuous-time mission constraints.

    Along a straight segment the distance to a fixed centre is convex, so disk
    membership of both segment endpoints covers the whole segment.
    Constraint names: ``endpoints``, ``coverage``, ``association``, ``speed``,
    ``mission_time``, ``timing`` and ``handover_count``.
    """
    bad: list[Violation] = []
    wps = plan.waypoints
    ids = {g.id: g for g in scenario.gbs_list}
    radius = {g.id: coverage_radius(g, scenario) for g in scenario.gbs_list}

    if len(wps) < 2:
        bad.append(Violation("timing", "trajectory needs at least two waypoints"))
        return FlightTrace([], 0.0, False, bad)

    scale = max(1.0, *(abs(c) for c in scenario.start + scenario.finish))
    if wps[0].time != 0.0:
        bad.append(Violation("timing", f"trajectory starts at t={wps[0].time}, not 0"))
    if distance(wps[0].position, scenario.start) > 1e-9 * scale:
        bad.append(Violation("endpoints", f"first waypoint {wps[0].position} is not the start {scenario.start}"))
    if distance(wps[-1].position, scenario.finish) > 1e-9 * scale:
        bad.append(Violation("endpoints", f"last waypoint {wps[-1].position} is not the finish {scenario.finish}"))

    for w in wps:
        if w.serving_gbs not in ids:
            bad.append(Violation("association", f"waypoint served by unknown GBS {w.serving_gbs}"))
            return FlightTrace([], 0.0, False, bad)
    serving_seq = [wps[0].serving_gbs]
    for w in wps[1:]:
        if w.serving_gbs != serving_seq[-1]:
            serving_seq.append(w.serving_gbs)
    if tuple(serving_seq) != tuple(plan.association):
        bad.append(Violation("association", f"waypoints follow {serving_seq}, plan says {list(plan.association)}"))
    if len(set(plan.association)) != len(plan.association):
        bad.append(Violation("association", "association repeats a GBS"))

    def check_inside(w: Waypoint, gid: int) -> None:
        r = radius[gid]
        if r is None or distance(w.position, ids[gid].position) > r * (1 + DISK_REL_SLACK):
            bad.append(Violation("coverage", f"point {w.position} at t={w.time:.6g} s is outside the disk of GBS {gid}"))

    events: list[HandoverEvent] = []
    interior: list[int] = []
    min_snr = math.inf
    for k, w in enumerate(wps):
        check_inside(w, w.serving_gbs)
        min_snr = min(min_snr, snr(ids[w.serving_gbs], w.position, scenario))
        if k == 0:
            continue
        p = wps[k - 1]
        # the segment arriving at w is still served by p's GBS
        check_inside(w, p.serving_gbs)
        min_snr = min(min_snr, snr(ids[p.serving_gbs], w.position, scenario))
        if w.serving_gbs != p.serving_gbs:
            events.append(HandoverEvent(w.time, w.position, p.serving_gbs, w.serving_gbs))
            r_prev = radius[p.serving_gbs]
            if r_prev is not None and distance(w.position, ids[p.serving_gbs].position) < r_prev * (1 - DISK_REL_SLACK):
                interior.append(len(events) - 1)
        dt = w.time - p.time
        seg = distance(p.position, w.position)
        if not dt > 0:
            bad.append(Violation("timing", f"waypoint times not increasing at index {k}"))
        elif seg / dt > scenario.v_max * (1 + SPEED_REL_SLACK):
            bad.append(Violation("speed", f"segment {k - 1} flown at {seg / dt:.6g} m/s > {scenario.v_max}"))

    if wps[-1].time > scenario.t_max + time_tolerance:
        bad.append(Violation("mission_time", f"mission takes {wps[-1].time:.6f} s > {scenario.t_max} s"))
    if len(events) != plan.handovers:
        bad.append(Violation("handover_count", f"{len(events)} handover events, plan claims {plan.handovers}"))

    return FlightTrace(events, min_snr, not bad, bad, interior)


# ---------------------------------------------------------------------------
# sampling / export


def sample_trajectory(scenario: Scenario, plan: Plan, dt: float) -> dict[str, np.ndarray]:
    """Positions, serving ids and SNR at times ``0, dt, 2 dt, ..., T`` (T always included)."""
    wps = plan.waypoints
    times = np.array([w.time for w in wps])
    xy = np.array([w.position for w in wps])
    serving = np.array([w.serving_gbs for w in wps])
    T = times[-1]
    t = np.arange(0.0, T, dt)
    t = np.append(t, T)
    # segment k covers [times[k], times[k+1]); the new GBS serves from the waypoint on
    seg = np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(wps) - 2)
    frac = (t - times[seg]) / (times[seg + 1] - times[seg])
    pos = xy[seg] + frac[:, None] * (xy[seg + 1] - xy[seg])
    sid = serving[seg]

    g_xy = {g.id: g.position for g in scenario.gbs_list}
    gain = {
        g.id: (g.tx_power * scenario.radio.beta0 / scenario.radio.noise_power, (scenario.uav_height - g.antenna_height) ** 2)
        for g in scenario.gbs_list
    }
    centers = np.array([g_xy[i] for i in sid])
    num = np.array([gain[i][0] for i in sid])
    dh2 = np.array([gain[i][1] for i in sid])
    d2 = dh2 + np.sum((pos - centers) ** 2, axis=1)
    with np.errstate(divide="ignore"):
        snr_lin = num / d2
    return {"t": t, "x": pos[:, 0], "y": pos[:, 1], "serving": sid, "snr": snr_lin}


def trajectory_csv(scenario: Scenario, plan: Plan, dt: float = 1.0) -> str:
    s = sample_trajectory(scenario, plan, dt)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_s", "x_m", "y_m", "serving_gbs", "snr_db"])
    for t, x, y, sid, v in zip(s["t"], s["x"], s["y"], s["serving"], s["snr"]):
        w.writerow([f"{t:.6f}", f"{x:.6f}", f"{y:.6f}", int(sid), f"{10 * math.log10(v):.6f}"])
    return buf.getvalue()
