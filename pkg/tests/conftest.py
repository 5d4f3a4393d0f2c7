import itertools
import math

import pytest

from handover_uav.model import Gbs, RadioParams, Scenario

# beta0 = noise = threshold = 1 and equal heights give radius = sqrt(tx_power)
UNIT_RADIO = RadioParams(1.0, 1.0, 1.0)
REF_RADIO = RadioParams.from_db(-30.0, -90.0, 17.7)


def disk_scenario(disks, start, finish, t_max=1e9, v_max=1.0):
    """Scenario from ``[(id, (x, y), radius), ...]`` with exact radii."""
    return Scenario(
        gbs_list=tuple(Gbs(i, tuple(map(float, xy)), 0.0, float(r) ** 2) for i, xy, r in disks),
        start=start,
        finish=finish,
        uav_height=0.0,
        v_max=v_max,
        t_max=t_max,
        radio=UNIT_RADIO,
    )


def all_simple_paths(graph):
    """Every simple start-finish index path, by brute-force DFS over the adjacency."""
    out = []

    def walk(path):
        u = path[-1]
        if u == graph.finish_index:
            out.append(tuple(path))
            return
        for v, _, _ in graph.adj[u]:
            if v not in path:
                walk(path + [v])

    walk([graph.start_index])
    return out


def brute_force_best(scenario, graph=None):
    """(handovers, time, association) of the best budget-respecting association,
    by enumerating ordered subsets of stations rather than walking the graph."""
    from handover_uav.model import coverage_radius, distance

    ids = [g.id for g in scenario.gbs_list if coverage_radius(g, scenario) is not None]
    pos = {g.id: g.position for g in scenario.gbs_list}
    rad = {g.id: coverage_radius(g, scenario) for g in scenario.gbs_list}
    best = None
    for n in range(1, len(ids) + 1):
        for seq in itertools.permutations(ids, n):
            if distance(scenario.start, pos[seq[0]]) > rad[seq[0]]:
                continue
            if distance(scenario.finish, pos[seq[-1]]) > rad[seq[-1]]:
                continue
            if any(distance(pos[a], pos[b]) > rad[a] + rad[b] for a, b in zip(seq, seq[1:])):
                continue
            pts = [scenario.start, *(pos[i] for i in seq), scenario.finish]
            t = sum(math.dist(p, q) for p, q in zip(pts, pts[1:])) / scenario.v_max
            if t > scenario.t_max + 1e-6:
                continue
            key = (n - 1, t, seq)
            if best is None or key < best:
                best = key
        if best is not None:
            break
    return best


@pytest.fixture
def chain3():
    """Three radius-2 disks in a row; only the full chain links start to finish."""
    return disk_scenario(
        [(1, (0, 0), 2), (2, (3, 0), 2), (3, (6, 0), 2)],
        start=(-1, 0),
        finish=(7, 0),
    )
