"""Handover-minimizing association search under a mission-time budget.

The time-constrained shortest path problem on the coverage graph is attacked
by Lagrangian relaxation: each dual iterate is a plain shortest path with
edge cost ``handover + lam * flight_time``, ``lam`` moves by projected
subgradient steps, and a K-shortest-path sweep at the final multiplier
supplies extra primal candidates to shrink the duality gap.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import (
    CoverageGraph,
    EdgeWeight,
    Path,
    build_graph,
    combined_weight,
    distance_weight,
    path_handovers,
    path_time,
)
from .model import Scenario
from .trajectory import Plan, make_plan

__all__ = [
    "DualState",
    "Infeasible",
    "Plan",
    "SolverConfig",
    "exhaustive_oracle",
    "label_setting",
    "shortest_path_combined",
    "solve",
    "solve_dual",
    "yen_k_shortest",
]


class Infeasible(Exception):
    """No association sequence meets the time budget.

    ``min_time`` is the shortest achievable mission time (None when start and
    finish are not connected at all).
    """

    def __init__(self, message: str, min_time: Optional[float] = None):
        super().__init__(message)
        self.min_time = min_time


@dataclass(frozen=True)
class SolverConfig:
    k_candidates: int = 50
    max_dual_iters: int = 200
    initial_lambda: float = 0.0
    step_rule: str = "diminishing"  # s0 / k, or "constant"
    step_size: Optional[float] = None  # s0; None means 1 / t_max
    feasibility_tolerance: float = 1e-6
    oracle_max_gbs: int = 10

    def __post_init__(self):
        if self.k_candidates < 1 or self.max_dual_iters < 1:
            raise ValueError("k_candidates and max_dual_iters must be >= 1")
        if self.initial_lambda < 0:
            raise ValueError("initial_lambda must be >= 0")
        if self.step_rule not in ("diminishing", "constant"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be > 0")
        if self.feasibility_tolerance < 0:
            raise ValueError("feasibility_tolerance must be >= 0")


@dataclass
class DualState:
    lam: float
    best_feasible: Optional[Path]
    dual_value: float
    iteration: int
    history: list[tuple[float, float]] = field(default_factory=list)  # (lam_k, g(lam_k))


# ---------------------------------------------------------------------------
# shortest paths


def label_setting(
    graph: CoverageGraph,
    weight: EdgeWeight,
    root: Sequence[int] = (0,),
    root_cost: float = 0.0,
    banned_vertices: frozenset[int] = frozenset(),
    banned_edges: frozenset[tuple[int, int]] = frozenset(),
) -> Optional[tuple[float, tuple[int, ...]]]:
    """Dijkstra from the last vertex of ``root`` to the finish.

    Labels are ``(cost, index path)`` pairs compared lexicographically, so
    among equal-cost paths the one with the smallest vertex sequence wins.
    Costs are accumulated from ``root_cost`` along the path, which makes the
    result bit-identical to re-summing the full path from the start.
    """
    target = graph.finish_index
    src = root[-1]
    best: dict[int, tuple[float, tuple[int, ...]]] = {src: (root_cost, tuple(root))}
    heap = [(root_cost, tuple(root))]
    done: set[int] = set()
    while heap:
        cost, path = heapq.heappop(heap)
        u = path[-1]
        if u in done:
            continue
        done.add(u)
        if u == target:
            return cost, path
        for v, hw, dw in graph.adj[u]:
            if v in done or v in banned_vertices or (u, v) in banned_edges:
                continue
            label = (cost + weight(hw, dw), path + (v,))
            old = best.get(v)
            if old is None or label < old:
                best[v] = label
                heapq.heappush(heap, label)
    return None


def shortest_path_combined(graph: CoverageGraph, lam: float, v_max: float) -> Optional[Path]:
    if lam < 0:
        raise ValueError("lam must be >= 0")
    found = label_setting(graph, combined_weight(lam, v_max))
    return None if found is None else graph.to_path(found[1])


def yen_k_shortest(graph: CoverageGraph, weight: EdgeWeight, K: int) -> list[Path]:
    """Up to ``K`` loopless start-finish paths in nondecreasing weight.

    Ties are ordered by vertex sequence.
    """
    return [graph.to_path(p) for _, p in _yen(graph, weight, K)]


def _yen(graph: CoverageGraph, weight: EdgeWeight, K: int) -> list[tuple[float, tuple[int, ...]]]:
    first = label_setting(graph, weight)
    if first is None or K < 1:
        return []
    accepted = [first]
    seen = {first[1]}
    candidates: list[tuple[float, tuple[int, ...]]] = []
    while len(accepted) < K:
        prev = accepted[-1][1]
        for i in range(len(prev) - 1):
            root = prev[: i + 1]
            banned_edges = frozenset((p[i], p[i + 1]) for _, p in accepted if p[: i + 1] == root)
            root_cost = graph.index_path_weight(root, weight)
            found = label_setting(graph, weight, root, root_cost, frozenset(root[:-1]), banned_edges)
            if found is not None and found[1] not in seen:
                seen.add(found[1])
                heapq.heappush(candidates, found)
        if not candidates:
            break
        accepted.append(heapq.heappop(candidates))
    accepted.sort()
    return accepted


# ---------------------------------------------------------------------------
# Lagrangian dual


def _better(key_a: tuple, key_b: Optional[tuple]) -> bool:
    return key_b is None or key_a < key_b


def _key(path: Path, scenario: Scenario) -> tuple[int, float, tuple[int, ...]]:
    return (path_handovers(path), path_time(path, scenario), path.association)


def min_time_path(graph: CoverageGraph) -> Optional[Path]:
    found = label_setting(graph, distance_weight)
    return None if found is None else graph.to_path(found[1])


def solve_dual(graph: CoverageGraph, scenario: Scenario, config: SolverConfig = SolverConfig()) -> DualState:
    """Projected subgradient ascent on the Lagrange dual.

    ``best_feasible`` is the best budget-respecting path met anywhere along
    the iteration (the minimum-time path included), ranked by handovers,
    then time, then sequence.
    """
    t_max = scenario.t_max
    tol = config.feasibility_tolerance
    fastest = min_time_path(graph)
    if fastest is None:
        raise Infeasible("start and finish are not connected by coverage", None)
    t_fast = path_time(fastest, scenario)
    if t_fast > t_max + tol:
        raise Infeasible(f"fastest route needs {t_fast:.3f} s > t_max={t_max} s", t_fast)

    best = fastest
    best_key = _key(fastest, scenario)
    s0 = config.step_size if config.step_size is not None else 1.0 / t_max
    lam = config.initial_lambda
    lam_star, g_star = lam, -math.inf
    history: list[tuple[float, float]] = []
    k = 0
    for k in range(1, config.max_dual_iters + 1):
        path = shortest_path_combined(graph, lam, scenario.v_max)
        fh, ft = path_handovers(path), path_time(path, scenario)
        g = fh + lam * (ft - t_max)
        history.append((lam, g))
        if g > g_star:
            lam_star, g_star = lam, g
        if ft <= t_max + tol:
            key = (fh, ft, path.association)
            if _better(key, best_key):
                best, best_key = path, key
        sub = ft - t_max
        if abs(sub) <= tol or (lam == 0.0 and sub <= 0.0):
            # complementary slackness holds: this multiplier is optimal
            break
        step = s0 / k if config.step_rule == "diminishing" else s0
        lam = max(0.0, lam + step * sub)
    return DualState(lam=lam_star, best_feasible=best, dual_value=g_star, iteration=k, history=history)


def solve(scenario: Scenario, config: SolverConfig = SolverConfig(), graph: Optional[CoverageGraph] = None) -> Plan:
    if graph is None:
        graph = build_graph(scenario)
    dual = solve_dual(graph, scenario, config)
    weight = combined_weight(dual.lam, scenario.v_max)
    pool = [dual.best_feasible, *yen_k_shortest(graph, weight, config.k_candidates)]
    feasible = [p for p in pool if path_time(p, scenario) <= scenario.t_max + config.feasibility_tolerance]
    best = min(feasible, key=lambda p: _key(p, scenario))
    return make_plan(
        scenario,
        best.association,
        method="proposed",
        lambda_star=dual.lam,
        dual_value=dual.dual_value,
        dual_iterations=dual.iteration,
        candidates_examined=len(pool),
        feasible=True,
    )


# ---------------------------------------------------------------------------
# exhaustive reference


def exhaustive_oracle(scenario: Scenario, max_gbs: int = 10, tolerance: float = 1e-6) -> Plan:
    """Best plan over every simple start-finish path of the coverage graph.

    Raises ValueError above ``max_gbs`` stations and Infeasible when no path
    meets the budget.
    """
    if scenario.num_gbs > max_gbs:
        raise ValueError(f"exhaustive search refused for M={scenario.num_gbs} > {max_gbs}")
    graph = build_graph(scenario)
    budget = scenario.t_max + tolerance
    best_key: Optional[tuple] = None
    best: Optional[Path] = None
    target = graph.finish_index
    pts = [graph.point(k) for k in range(graph.num_vertices)]

    def dfs(path: list[int], on_path: set[int]) -> None:
        nonlocal best, best_key
        u = path[-1]
        for v, _, _ in graph.adj[u]:
            if v in on_path:
                continue
            if v == target:
                cand = graph.to_path(path + [v])
                key = _key(cand, scenario)
                if key[1] <= budget and _better(key, best_key):
                    best, best_key = cand, key
                continue
            if best_key is not None and len(path) - 1 > best_key[0]:
                continue
            # lower bound on the remaining flight: straight to the finish
            partial = sum(math.dist(pts[a], pts[b]) for a, b in zip(path, path[1:]))
            lb = partial + math.dist(pts[u], pts[v]) + math.dist(pts[v], pts[target])
            if lb / scenario.v_max > budget:
                continue
            on_path.add(v)
            path.append(v)
            dfs(path, on_path)
            path.pop()
            on_path.discard(v)

    dfs([graph.start_index], {graph.start_index})
    if best is None:
        raise Infeasible("no simple path meets the time budget")
    return make_plan(scenario, best.association, method="oracle", feasible=True)
