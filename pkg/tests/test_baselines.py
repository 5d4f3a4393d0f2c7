import math

import pytest

from handover_uav.baselines import GaConfig, genetic_plan, shortest_time_plan
from handover_uav.graph import build_graph, distance_weight
from handover_uav.solver import Infeasible, exhaustive_oracle, solve
from handover_uav.suites import small_scenarios
from handover_uav.trajectory import validate_plan

from conftest import all_simple_paths, brute_force_best, disk_scenario

FAST_GA = GaConfig(population_size=30, generations=40)
CONNECTED = list(small_scenarios(12))


@pytest.fixture
def detour():
    # one big slow disk, or a fast chain of three small ones
    return disk_scenario(
        [(1, (0, 0), 2), (2, (3, 0), 2), (3, (6, 0), 2), (9, (3, 20), 21)],
        start=(-1, 0),
        finish=(7, 0),
        t_max=9.0,
    )


class TestShortestTime:
    def test_single_station(self):
        sc = disk_scenario([(4, (5, 0), 10)], start=(0, 0), finish=(10, 0))
        plan = shortest_time_plan(sc)
        assert plan.association == (4,) and plan.handovers == 0
        assert plan.solver_meta["method"] == "shortest_time"

    def test_ignores_handovers(self, detour):
        plan = shortest_time_plan(detour.with_t_max(1e6))
        assert plan.association == (1, 2, 3)
        assert solve(detour.with_t_max(1e6)).association == (9,)

    @pytest.mark.parametrize("sc", CONNECTED)
    def test_matches_enumeration(self, sc):
        g = build_graph(sc)
        fastest = min(all_simple_paths(g), key=lambda p: (g.index_path_weight(p, distance_weight), p))
        plan = shortest_time_plan(sc.with_t_max(1e6))
        assert plan.association == g.to_path(fastest).association

    @pytest.mark.parametrize("sc", CONNECTED[:4])
    def test_handovers_do_not_depend_on_budget(self, sc):
        counts = {shortest_time_plan(sc.with_t_max(t)).handovers for t in (1e4, 1e5, 1e6)}
        assert len(counts) == 1

    def test_infeasible_budget(self, detour):
        with pytest.raises(Infeasible) as err:
            shortest_time_plan(detour.with_t_max(7.0))
        assert err.value.min_time == pytest.approx(8.0)

    def test_disconnected(self):
        sc = disk_scenario([(1, (0, 0), 1), (2, (10, 0), 1)], start=(0, 0), finish=(10, 0))
        with pytest.raises(Infeasible):
            shortest_time_plan(sc)


class TestGenetic:
    def test_deterministic(self, detour):
        a = genetic_plan(detour.with_t_max(1e6), FAST_GA)
        b = genetic_plan(detour.with_t_max(1e6), FAST_GA)
        assert a.to_dict() == b.to_dict()
        assert a.solver_meta["seed"] == 0

    def test_finds_the_one_station_route(self, detour):
        assert genetic_plan(detour.with_t_max(1e6), FAST_GA).association == (9,)

    def test_respects_budget(self, detour):
        plan = genetic_plan(detour, FAST_GA)
        assert plan.association == (1, 2, 3)
        assert validate_plan(detour, plan).feasible

    def test_no_feasible_sequence(self, detour):
        with pytest.raises(Infeasible):
            genetic_plan(detour.with_t_max(7.0), FAST_GA)

    @pytest.mark.parametrize("sc", CONNECTED)
    def test_never_beats_oracle(self, sc):
        plan = genetic_plan(sc, FAST_GA)
        assert plan.handovers >= exhaustive_oracle(sc).handovers
        assert validate_plan(sc, plan).feasible

    @pytest.mark.parametrize("seed", range(3))
    def test_any_seed_gives_a_valid_plan(self, seed):
        sc = CONNECTED[0]
        plan = genetic_plan(sc, GaConfig(population_size=30, generations=40, seed=seed))
        assert plan.solver_meta["seed"] == seed
        assert validate_plan(sc, plan).feasible

    @pytest.mark.parametrize(
        "kw", [{"population_size": 1}, {"generations": 0}, {"crossover_rate": 1.5}, {"infeasibility_penalty": 0.0}]
    )
    def test_bad_config(self, kw):
        with pytest.raises(ValueError):
            GaConfig(**kw)


@pytest.mark.parametrize("sc", CONNECTED)
def test_all_methods_validate(sc):
    for plan in (solve(sc), shortest_time_plan(sc), genetic_plan(sc, FAST_GA)):
        trace = validate_plan(sc, plan)
        assert trace.feasible, (plan.solver_meta["method"], trace.violations)
        assert plan.mission_time <= sc.t_max + 1e-6


def test_proposed_matches_brute_force_where_baseline_loses(detour):
    best = brute_force_best(detour.with_t_max(math.inf))
    assert best[2] == (9,)
    assert solve(detour.with_t_max(1e6)).handovers == 0 < shortest_time_plan(detour.with_t_max(1e6)).handovers
