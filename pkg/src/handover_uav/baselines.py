"""Comparison schemes: the minimum-time route and a genetic algorithm."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import CoverageGraph, build_graph, path_time
from .model import Scenario, distance
from .solver import Infeasible, min_time_path
from .trajectory import Plan, make_plan


def shortest_time_plan(scenario: Scenario, tolerance: float = 1e-6, graph: Optional[CoverageGraph] = None) -> Plan:
    """Fastest feasible route over the coverage graph, blind to handovers."""
    if graph is None:
        graph = build_graph(scenario)
    path = min_time_path(graph)
    if path is None:
        raise Infeasible("start and finish are not connected by coverage", None)
    t = path_time(path, scenario)
    if t > scenario.t_max + tolerance:
        raise Infeasible(f"fastest route needs {t:.3f} s > t_max={scenario.t_max} s", t)
    return make_plan(scenario, path.association, method="shortest_time", feasible=True)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    generations: int = 200
    crossover_rate: float = 0.8
    mutation_rate: float = 0.3
    seed: int = 0
    infeasibility_penalty: float = 10.0
    tournament_size: int = 3
    elite: int = 2

    def __post_init__(self):
        if self.population_size < 2 or self.generations < 1:
            raise ValueError("population_size must be >= 2 and generations >= 1")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.infeasibility_penalty <= 0:
            raise ValueError("infeasibility_penalty must be > 0")


class _Fitness:
    """Penalized objective: handovers + penalty * (seconds over budget + broken links)."""

    def __init__(self, scenario: Scenario, graph: CoverageGraph, penalty: float, tolerance: float):
        self.graph = graph
        self.t_max = scenario.t_max
        self.v_max = scenario.v_max
        self.penalty = penalty
        self.tolerance = tolerance
        self.pos = {gid: graph.disks[gid].center for gid in graph.gbs_ids}
        self.start, self.finish = scenario.start, scenario.finish
        self.cache: dict[tuple[int, ...], tuple[float, bool]] = {}

    def __call__(self, seq: tuple[int, ...]) -> tuple[float, bool]:
        hit = self.cache.get(seq)
        if hit is not None:
            return hit
        g = self.graph
        vertices = ("start", *seq, "finish")
        broken = sum(not g.has_edge(a, b) for a, b in zip(vertices, vertices[1:]))
        pts = [self.start, *(self.pos[i] for i in seq), self.finish]
        t = sum(distance(p, q) for p, q in zip(pts, pts[1:])) / self.v_max
        over = max(0.0, t - self.t_max)
        feasible = broken == 0 and t <= self.t_max + self.tolerance
        out = (len(seq) - 1 + self.penalty * (over + broken), feasible)
        self.cache[seq] = out
        return out


def _random_walk(graph: CoverageGraph, rng: np.random.Generator, max_len: int) -> tuple[int, ...]:
    """Random simple walk from the start; falls back to a single station."""
    cur, seq, on = graph.start_index, [], {graph.start_index}
    for _ in range(max_len):
        nxt = [v for v, _, _ in graph.adj[cur] if v not in on]
        if not nxt:
            break
        if graph.finish_index in nxt and seq:
            break
        nxt = [v for v in nxt if v != graph.finish_index]
        if not nxt:
            break
        cur = int(nxt[rng.integers(len(nxt))])
        on.add(cur)
        seq.append(graph.vertex_at(cur))
    if not seq:
        seq = [graph.gbs_ids[rng.integers(len(graph.gbs_ids))]]
    return tuple(seq)


def _crossover(a: tuple[int, ...], b: tuple[int, ...], rng: np.random.Generator) -> tuple[int, ...]:
    i = int(rng.integers(1, len(a) + 1))
    j = int(rng.integers(0, len(b)))
    head = a[:i]
    return head + tuple(x for x in b[j:] if x not in head)


def _mutate(seq: tuple[int, ...], ids: tuple[int, ...], rng: np.random.Generator) -> tuple[int, ...]:
    s = list(seq)
    op = rng.integers(3)
    unused = [i for i in ids if i not in s]
    if op == 0 and unused:
        s.insert(int(rng.integers(len(s) + 1)), unused[rng.integers(len(unused))])
    elif op == 1 and len(s) > 1:
        del s[int(rng.integers(len(s)))]
    elif len(s) > 1:
        i, j = rng.choice(len(s), size=2, replace=False)
        s[i], s[j] = s[j], s[i]
    elif unused:
        s[0] = unused[rng.integers(len(unused))]
    return tuple(s)


def genetic_plan(
    scenario: Scenario,
    config: GaConfig = GaConfig(),
    tolerance: float = 1e-6,
    graph: Optional[CoverageGraph] = None,
) -> Plan:
    """Evolve duplicate-free station sequences; return the best feasible one."""
    if graph is None:
        graph = build_graph(scenario)
    ids = graph.gbs_ids
    if not ids:
        raise Infeasible("no GBS provides coverage at the UAV altitude", None)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    fitness = _Fitness(scenario, graph, config.infeasibility_penalty, tolerance)
    pop = [_random_walk(graph, rng, len(ids)) for _ in range(config.population_size)]

    best: Optional[tuple[int, float, tuple[int, ...]]] = None

    def record(seq: tuple[int, ...]) -> None:
        nonlocal best
        _, ok = fitness(seq)
        if ok:
            key = (len(seq) - 1, path_time(("start", *seq, "finish"), scenario), seq)
            if best is None or key < best:
                best = key

    for seq in pop:
        record(seq)
    for _ in range(config.generations):
        scores = np.array([fitness(s)[0] for s in pop])
        order = np.argsort(scores, kind="stable")
        nxt = [pop[i] for i in order[: config.elite]]
        while len(nxt) < config.population_size:
            pa = pop[_tournament(scores, rng, config.tournament_size)]
            if rng.random() < config.crossover_rate:
                pb = pop[_tournament(scores, rng, config.tournament_size)]
                child = _crossover(pa, pb, rng)
            else:
                child = pa
            if rng.random() < config.mutation_rate:
                child = _mutate(child, ids, rng)
            nxt.append(child)
            record(child)
        pop = nxt

    if best is None:
        raise Infeasible("genetic search found no feasible association", None)
    return make_plan(scenario, best[2], method="genetic", seed=config.seed, feasible=True)


def _tournament(scores: np.ndarray, rng: np.random.Generator, size: int) -> int:
    picks = rng.integers(len(scores), size=size)
    return int(picks[np.argmin(scores[picks])])
