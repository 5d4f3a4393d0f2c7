"""Seeded scenario families used by the experiment scripts and acceptance tests."""

from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np

from .graph import build_graph, path_time
from .model import GbsClass, Scenario, ScenarioDefaults, generate_scenario
from .solver import exhaustive_oracle, min_time_path, solve


def min_mission_time(scenario: Scenario) -> Optional[float]:
    path = min_time_path(build_graph(scenario))
    return None if path is None else path_time(path, scenario)


def small_scenario(seed: int, num_gbs: int) -> Optional[Scenario]:
    """``num_gbs`` stations (one medium, rest small) in a 5 km square.

    T_max is drawn uniformly between the fastest mission time and the time of
    the fastest minimum-handover route, so the budget binds whenever the two
    differ.  Returns None when start and finish are not connected.
    """
    mix = (GbsClass("medium", 1, 25.6, 15.0), GbsClass("small", num_gbs - 1, 20.0, 12.5))
    sc = generate_scenario(seed, 5000.0, mix)
    t_min = min_mission_time(sc)
    if t_min is None:
        return None
    t_hop = exhaustive_oracle(sc.with_t_max(math.inf)).mission_time
    u = np.random.Generator(np.random.PCG64([seed, num_gbs])).uniform()
    return sc.with_t_max(t_min + u * (t_hop - t_min))


def has_tradeoff(scenario: Scenario) -> bool:
    """True when the fastest route is not a minimum-handover route."""
    fastest = min_mission_time(scenario)
    return exhaustive_oracle(scenario.with_t_max(math.inf)).mission_time > fastest


def small_scenarios(count: int, sizes: tuple[int, ...] = (4, 5, 6, 7, 8), first_seed: int = 0) -> Iterator[Scenario]:
    """``count`` connected small scenarios, cycling through ``sizes``."""
    seed, made = first_seed, 0
    while made < count:
        sc = small_scenario(seed, sizes[made % len(sizes)])
        seed += 1
        if sc is not None:
            made += 1
            yield sc


def reference_scenario(seed: int, **overrides) -> Scenario:
    """Full-size setting: 20 stations in 10 x 10 km, T_max 270 s, 17.7 dB."""
    return generate_scenario(seed, 10_000.0, defaults=ScenarioDefaults(**overrides))


def fuzz_scenario(seed: int) -> Scenario:
    """Wide-range random scenario for property suites: 1-20 stations of mixed classes."""
    rng = np.random.Generator(np.random.PCG64([seed, 7]))
    m = int(rng.integers(1, 21))
    n_large = int(rng.integers(0, 2)) if m > 1 else 0
    n_medium = int(rng.integers(0, min(3, m - n_large) + 1))
    mix = (
        GbsClass("large", n_large, 35.7, 20.0),
        GbsClass("medium", n_medium, 25.6, 15.0),
        GbsClass("small", m - n_large - n_medium, 20.0, 12.5),
    )
    region = float(rng.uniform(2000.0, 12000.0))
    sc = generate_scenario(seed, region, mix, ScenarioDefaults(snr_threshold_db=float(rng.uniform(12.0, 22.0))))
    t_min = min_mission_time(sc)
    if t_min is not None:
        sc = sc.with_t_max(t_min * float(rng.uniform(0.9, 1.6)))
    return sc


def scaled_scenario(seed: int, num_gbs: int, region_m: float = 10_000.0) -> Optional[Scenario]:
    """``num_gbs`` stations with the 1:2:17 large/medium/small ratio kept.

    T_max sits halfway between the fastest route and the fastest
    minimum-handover route, so the budget binds when the two differ.
    """
    n_large = max(1, round(num_gbs / 20))
    n_medium = max(1, round(num_gbs / 10))
    mix = (
        GbsClass("large", n_large, 35.7, 20.0),
        GbsClass("medium", n_medium, 25.6, 15.0),
        GbsClass("small", num_gbs - n_large - n_medium, 20.0, 12.5),
    )
    sc = generate_scenario(seed, region_m, mix)
    t_min = min_mission_time(sc)
    if t_min is None:
        return None
    t_hop = solve(sc.with_t_max(math.inf)).mission_time
    return sc.with_t_max(0.5 * (t_min + t_hop))
