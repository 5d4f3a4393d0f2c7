import csv
import io
import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handover_uav.graph import FINISH, START, MalformedPath, Path, build_graph, path_handovers, path_time
from handover_uav.model import Gbs, GbsClass, coverage_radius, generate_scenario
from handover_uav.trajectory import mission_time

from conftest import all_simple_paths, disk_scenario


def small_random(seed, m=5, region=4000.0):
    return generate_scenario(seed, region, (GbsClass("small", m, 20.0, 12.5),))


def brute_edges(scenario):
    """Edge set recomputed straight from the positions and radii."""
    rad = {g.id: coverage_radius(g, scenario) for g in scenario.gbs_list}
    pos = {g.id: g.position for g in scenario.gbs_list}
    ids = sorted(i for i in rad if rad[i] is not None)
    edges = set()
    for i in ids:
        if math.dist(scenario.start, pos[i]) <= rad[i]:
            edges.add((START, i))
        if math.dist(scenario.finish, pos[i]) <= rad[i]:
            edges.add((i, FINISH))
    for a in ids:
        for b in ids:
            if a < b and math.dist(pos[a], pos[b]) <= rad[a] + rad[b]:
                edges.add((a, b))
    return edges


def test_boundary_is_inclusive():
    sc = disk_scenario([(1, (0, 0), 2), (2, (4, 0), 2)], start=(0, 0), finish=(4, 0))
    g = build_graph(sc)
    assert g.has_edge(1, 2)
    assert g.edge(1, 2) == (1, 4.0)

    apart = disk_scenario([(1, (0, 0), 2), (2, (4.000001, 0), 2)], start=(0, 0), finish=(4, 0))
    assert not build_graph(apart).has_edge(1, 2)


def test_start_inside_every_disk():
    sc = disk_scenario([(i, (i, 0), 10) for i in range(1, 6)], start=(0, 0), finish=(100, 0))
    g = build_graph(sc)
    assert g.degree(START) == 5
    assert g.degree(FINISH) == 0


@pytest.mark.parametrize("seed", range(10))
def test_edges_match_brute_force(seed):
    sc = small_random(seed)
    g = build_graph(sc)
    got = {(u, v) for u, v, _, _ in g.edges()}
    assert got == brute_edges(sc)


def test_no_coverage_station_is_left_out():
    sc = disk_scenario([(1, (0, 0), 2), (2, (1, 0), 2)], start=(0, 0), finish=(1, 0))
    weak = Gbs(2, (1.0, 0.0), 0.0, 0.0)
    sc = replace(sc, gbs_list=(sc.gbs_list[0], weak))
    g = build_graph(sc)
    assert g.gbs_ids == (1,)
    assert g.num_edges == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 12))
def test_structural_invariants(seed, m):
    sc = small_random(seed, m, region=6000.0)
    g = build_graph(sc)
    for u, v, hw, dw in g.edges():
        assert u != v
        assert {u, v} != {START, FINISH}
        assert g.edge(v, u) == g.edge(u, v)
        assert hw == (1 if isinstance(u, int) and isinstance(v, int) else 0)
        if hw:
            # the two disks share at least one point of the centre line
            d1, d2 = g.disks[u], g.disks[v]
            L = math.dist(d1.center, d2.center)
            t = min(d1.radius, L)
            p = [d1.center[k] + (t / L if L else 0) * (d2.center[k] - d1.center[k]) for k in range(2)]
            assert math.dist(p, d2.center) <= d2.radius * (1 + 1e-12)
    for p in all_simple_paths(g)[:2000]:
        path = g.to_path(p)
        assert path_handovers(path) <= sc.num_gbs - 1


def min_hops(scenario):
    """Fewest handovers over all simple paths (brute force), or None."""
    g = build_graph(scenario)
    paths = all_simple_paths(g)
    return min((len(p) - 3 for p in paths), default=None)


@pytest.mark.parametrize("seed", range(8))
def test_removing_a_station_never_helps(seed):
    sc = small_random(seed, 6, region=3500.0)
    base = min_hops(sc)
    for drop in sc.gbs_list:
        reduced = replace(sc, gbs_list=tuple(g for g in sc.gbs_list if g is not drop))
        after = min_hops(reduced)
        if base is None:
            assert after is None
        elif after is not None:
            assert after >= base


class TestPathFunctionals:
    def test_single_association(self):
        assert path_handovers((START, 1, FINISH)) == 0

    def test_four_station_sequence(self):
        assert path_handovers((START, 1, 14, 19, 20, FINISH)) == 3

    @pytest.mark.parametrize("k", range(1, 8))
    def test_chain(self, k):
        assert path_handovers((START, *range(1, k + 1), FINISH)) == k - 1

    @pytest.mark.parametrize(
        "bad",
        [(1, 2, FINISH), (START, 1, 2), (START, FINISH), (START, 1, START, FINISH), (START, 1, 2, 1, FINISH)],
    )
    def test_malformed(self, bad):
        with pytest.raises(MalformedPath):
            path_handovers(bad)

    def test_collinear_time(self):
        sc = disk_scenario([(1, (100, 0), 500)], start=(0, 0), finish=(300, 0), v_max=50.0)
        assert path_time((START, 1, FINISH), sc) == 6.0

    def test_single_station_time(self):
        sc = disk_scenario([(1, (3, 4), 500)], start=(0, 0), finish=(3, 10), v_max=2.0)
        assert path_time(Path((1,)), sc) == pytest.approx((5.0 + 6.0) / 2.0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10_000), st.data())
    def test_matches_mission_time(self, seed, data):
        sc = generate_scenario(seed)
        ids = [g.id for g in sc.gbs_list]
        assoc = data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=8, unique=True))
        assert path_time(Path(tuple(assoc)), sc) == pytest.approx(mission_time(sc, assoc), rel=1e-12)


def test_csv_dump():
    sc = disk_scenario([(1, (0, 0), 2), (2, (3, 0), 2)], start=(-1, 0), finish=(4, 0))
    rows = list(csv.DictReader(io.StringIO(build_graph(sc).to_csv())))
    assert [(r["u"], r["v"], r["handover_weight"]) for r in rows] == [("U0", "G1", "0"), ("G1", "G2", "1"), ("G2", "UF", "0")]
    assert float(rows[1]["distance_m"]) == 3.0


def test_vertex_order_is_deterministic():
    sc = disk_scenario([(9, (0, 0), 2), (3, (1, 0), 2), (5, (2, 0), 2)], start=(0, 0), finish=(2, 0))
    g = build_graph(sc)
    assert g.gbs_ids == (3, 5, 9)
    assert [g.vertex_at(k) for k in range(g.num_vertices)] == [START, 3, 5, 9, FINISH]
