"""Domain types, unit conversions and the closed-form radio/coverage math.

All quantities are stored in SI linear units (meters, seconds, watts and
dimensionless power ratios).  dB and dBm only show up in the JSON scenario
format and in CLI output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

Point = tuple[float, float]

# Version tag of the scenario RNG stream layout (see generate_scenario).
RNG_STREAM = "pcg64-v1"


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(ratio: float) -> float:
    return 10.0 * math.log10(ratio)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def distance(p: Sequence[float], q: Sequence[float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


@dataclass(frozen=True)
class RadioParams:
    """Channel constants shared by every station.

    beta0 is the channel power gain at 1 m, noise_power is in watts and
    snr_threshold is the minimum receive SNR, all linear.
    """

    beta0: float
    noise_power: float
    snr_threshold: float

    @classmethod
    def from_db(cls, beta0_db: float, noise_dbm: float, snr_threshold_db: float) -> "RadioParams":
        return cls(db_to_linear(beta0_db), dbm_to_watts(noise_dbm), db_to_linear(snr_threshold_db))

    @property
    def snr_threshold_db(self) -> float:
        return linear_to_db(self.snr_threshold)


@dataclass(frozen=True)
class Gbs:
    id: int
    position: Point
    antenna_height: float
    tx_power: float


@dataclass(frozen=True)
class CoverageDisk:
    center: Point
    radius: float

    def contains(self, p: Sequence[float], rel_slack: float = 0.0) -> bool:
        return distance(p, self.center) <= self.radius * (1.0 + rel_slack)


@dataclass(frozen=True)
class Scenario:
    gbs_list: tuple[Gbs, ...]
    start: Point
    finish: Point
    uav_height: float
    v_max: float
    t_max: float
    radio: RadioParams

    def __post_init__(self):
        object.__setattr__(self, "gbs_list", tuple(self.gbs_list))
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))
        object.__setattr__(self, "finish", (float(self.finish[0]), float(self.finish[1])))

    @property
    def num_gbs(self) -> int:
        return len(self.gbs_list)

    def gbs(self, gbs_id: int) -> Gbs:
        for g in self.gbs_list:
            if g.id == gbs_id:
                return g
        raise KeyError(f"no GBS with id {gbs_id}")

    def with_t_max(self, t_max: float) -> "Scenario":
        return replace(self, t_max=t_max)

    def with_snr_threshold_db(self, snr_db: float) -> "Scenario":
        return replace(self, radio=replace(self.radio, snr_threshold=db_to_linear(snr_db)))

    def to_dict(self) -> dict:
        r = self.radio
        return {
            "radio": {
                "beta0_db": linear_to_db(r.beta0),
                "noise_dbm": watts_to_dbm(r.noise_power),
                "snr_threshold_db": linear_to_db(r.snr_threshold),
            },
            "uav": {
                "height_m": self.uav_height,
                "v_max_mps": self.v_max,
                "t_max_s": self.t_max,
                "start_xy_m": list(self.start),
                "finish_xy_m": list(self.finish),
            },
            "gbs": [
                {
                    "id": g.id,
                    "xy_m": list(g.position),
                    "antenna_height_m": g.antenna_height,
                    "tx_power_dbm": watts_to_dbm(g.tx_power),
                }
                for g in self.gbs_list
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        radio = doc["radio"]
        uav = doc["uav"]
        return cls(
            gbs_list=tuple(
                Gbs(
                    id=int(g["id"]),
                    position=(float(g["xy_m"][0]), float(g["xy_m"][1])),
                    antenna_height=float(g["antenna_height_m"]),
                    tx_power=dbm_to_watts(float(g["tx_power_dbm"])),
                )
                for g in doc["gbs"]
            ),
            start=tuple(uav["start_xy_m"]),
            finish=tuple(uav["finish_xy_m"]),
            uav_height=float(uav["height_m"]),
            v_max=float(uav["v_max_mps"]),
            t_max=float(uav["t_max_s"]),
            radio=RadioParams.from_db(
                float(radio["beta0_db"]), float(radio["noise_dbm"]), float(radio["snr_threshold_db"])
            ),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Scenario":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def snr(gbs: Gbs, uav_xy: Sequence[float], scenario: Scenario) -> float:
    """Receive SNR (linear) at horizontal position ``uav_xy``."""
    r = scenario.radio
    d2 = (scenario.uav_height - gbs.antenna_height) ** 2 + distance(uav_xy, gbs.position) ** 2
    if d2 == 0.0:
        return math.inf
    return gbs.tx_power * r.beta0 / (r.noise_power * d2)


def coverage_radius(gbs: Gbs, scenario: Scenario) -> Optional[float]:
    """Horizontal radius of the region where ``snr >= snr_threshold``.

    Returns None when the station can never reach the threshold at the UAV
    altitude.
    """
    r = scenario.radio
    radicand = gbs.tx_power * r.beta0 / (r.noise_power * r.snr_threshold) - (
        scenario.uav_height - gbs.antenna_height
    ) ** 2
    if not radicand > 0.0:
        return None
    return math.sqrt(radicand)


def coverage_disk(gbs: Gbs, scenario: Scenario) -> Optional[CoverageDisk]:
    radius = coverage_radius(gbs, scenario)
    if radius is None:
        return None
    return CoverageDisk(gbs.position, radius)


# ---------------------------------------------------------------------------
# scenario generation


@dataclass(frozen=True)
class GbsClass:
    """A group of identical stations.  ``ids`` pins their indices, otherwise
    they receive the lowest free ids in mix order."""

    name: str
    count: int
    tx_power_dbm: float
    antenna_height_m: float
    ids: Optional[tuple[int, ...]] = None


DEFAULT_MIX: tuple[GbsClass, ...] = (
    GbsClass("large", 1, 35.7, 20.0, ids=(2,)),
    GbsClass("medium", 2, 25.6, 15.0, ids=(14, 19)),
    GbsClass("small", 17, 20.0, 12.5),
)


@dataclass(frozen=True)
class ScenarioDefaults:
    uav_height: float = 90.0
    v_max: float = 50.0
    t_max: float = 270.0
    beta0_db: float = -30.0
    noise_dbm: float = -90.0
    snr_threshold_db: float = 17.7
    # mission endpoints as fractions of the region side
    start_frac: Point = (0.1, 0.1)
    finish_frac: Point = (0.9, 0.9)


def assign_ids(mix: Sequence[GbsClass]) -> list[tuple[int, GbsClass]]:
    total = sum(c.count for c in mix)
    pinned: dict[int, GbsClass] = {}
    for c in mix:
        if c.ids is None:
            continue
        if len(c.ids) != c.count:
            raise ValueError(f"class {c.name!r}: {len(c.ids)} ids given for count {c.count}")
        for i in c.ids:
            if i in pinned or not 1 <= i <= total:
                raise ValueError(f"class {c.name!r}: id {i} duplicated or outside 1..{total}")
            pinned[i] = c
    free = iter(i for i in range(1, total + 1) if i not in pinned)
    out = dict(pinned)
    for c in mix:
        if c.ids is None:
            for _ in range(c.count):
                out[next(free)] = c
    return sorted(out.items(), key=lambda kv: kv[0])


def generate_scenario(
    seed: int,
    region: float = 10_000.0,
    mix: Sequence[GbsClass] = DEFAULT_MIX,
    defaults: ScenarioDefaults = ScenarioDefaults(),
) -> Scenario:
    """Random scenario with stations placed i.i.d. uniformly in a square.

    Stream layout (RNG_STREAM): a PCG64 generator seeded with ``seed`` draws a
    single ``(M, 2)`` uniform block on ``[0, region)``; row ``k`` is the
    position of the station with the k-th smallest id.
    """
    if region <= 0:
        raise ValueError("region side must be positive")
    if any(c.count < 0 for c in mix):
        raise ValueError("class counts must be nonnegative")
    total = sum(c.count for c in mix)
    if total == 0:
        raise ValueError("scenario needs at least one GBS")
    classes = assign_ids(mix)
    rng = np.random.Generator(np.random.PCG64(seed))
    xy = rng.uniform(0.0, region, size=(total, 2))
    gbs_list = tuple(
        Gbs(
            id=gid,
            position=(float(xy[k, 0]), float(xy[k, 1])),
            antenna_height=c.antenna_height_m,
            tx_power=dbm_to_watts(c.tx_power_dbm),
        )
        for k, (gid, c) in enumerate(classes)
    )
    d = defaults
    return Scenario(
        gbs_list=gbs_list,
        start=(d.start_frac[0] * region, d.start_frac[1] * region),
        finish=(d.finish_frac[0] * region, d.finish_frac[1] * region),
        uav_height=d.uav_height,
        v_max=d.v_max,
        t_max=d.t_max,
        radio=RadioParams.from_db(d.beta0_db, d.noise_dbm, d.snr_threshold_db),
    )


def parse_mix(text: str) -> tuple[GbsClass, ...]:
    """Parse ``name:count:power_dbm:height_m[,...]`` (e.g. ``small:5:20:12.5``)."""
    classes = []
    for part in text.split(","):
        fields = part.strip().split(":")
        if len(fields) != 4:
            raise ValueError(f"bad class spec {part!r}; expected name:count:power_dbm:height_m")
        name, count, power, height = fields
        classes.append(GbsClass(name, int(count), float(power), float(height)))
    return tuple(classes)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    gbs_id: Optional[int] = None


def validate_scenario(scenario: Scenario) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    r = scenario.radio
    for name, value in (
        ("beta0", r.beta0),
        ("noise_power", r.noise_power),
        ("snr_threshold", r.snr_threshold),
        ("v_max", scenario.v_max),
        ("t_max", scenario.t_max),
    ):
        if not value > 0:
            out.append(Diagnostic("nonpositive_constant", f"{name} must be > 0, got {value}"))
    if not scenario.gbs_list:
        out.append(Diagnostic("no_gbs", "scenario has no GBS"))
    seen: set[int] = set()
    for g in scenario.gbs_list:
        if g.id in seen:
            out.append(Diagnostic("duplicate_id", f"GBS id {g.id} appears more than once", g.id))
        seen.add(g.id)
        if not g.tx_power > 0:
            out.append(Diagnostic("nonpositive_constant", f"GBS {g.id}: tx_power must be > 0", g.id))
            continue
        if g.antenna_height < 0:
            out.append(Diagnostic("negative_height", f"GBS {g.id}: antenna height is negative", g.id))
        if all(v > 0 for v in (r.beta0, r.noise_power, r.snr_threshold)) and coverage_radius(g, scenario) is None:
            out.append(
                Diagnostic("no_coverage", f"GBS {g.id} never serves at altitude {scenario.uav_height} m", g.id)
            )
    return out


def covering_ids(scenario: Scenario, p: Sequence[float]) -> list[int]:
    ids = []
    for g in scenario.gbs_list:
        disk = coverage_disk(g, scenario)
        if disk is not None and disk.contains(p):
            ids.append(g.id)
    return ids


def radii(scenario: Scenario) -> dict[int, Optional[float]]:
    return {g.id: coverage_radius(g, scenario) for g in scenario.gbs_list}
