"""Coverage graph over {start, stations, finish} and the path functionals.

Vertices are addressed two ways.  Public code uses labels: ``START``,
``FINISH`` or an integer GBS id.  Algorithms use dense indices: 0 is the
start, 1..n are the covered stations by ascending id and n + 1 is the
finish.  Because the index order follows the id order, comparing index
sequences lexicographically is the same as comparing association sequences.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .model import CoverageDisk, Scenario, coverage_disk, distance

START = "start"
FINISH = "finish"
Vertex = Union[str, int]

# (handover_weight, distance_weight) -> edge cost
EdgeWeight = Callable[[int, float], float]


class MalformedPath(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    """A start-to-finish path, stored as its GBS association sequence."""

    association: tuple[int, ...]

    def __post_init__(self):
        assoc = tuple(int(i) for i in self.association)
        object.__setattr__(self, "association", assoc)
        if not assoc:
            raise MalformedPath("path visits no GBS")
        if len(set(assoc)) != len(assoc):
            raise MalformedPath(f"path repeats a GBS: {list(assoc)}")

    @classmethod
    def from_vertices(cls, vertices: Sequence[Vertex]) -> "Path":
        if len(vertices) < 3 or vertices[0] != START or vertices[-1] != FINISH:
            raise MalformedPath(f"path must run start -> GBS... -> finish, got {list(vertices)}")
        middle = vertices[1:-1]
        if any(isinstance(v, str) for v in middle):
            raise MalformedPath("start/finish may only appear at the path ends")
        return cls(tuple(middle))

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return (START, *self.association, FINISH)

    @property
    def handovers(self) -> int:
        return len(self.association) - 1


def path_handovers(path: Path | Sequence[Vertex]) -> int:
    """Sum of handover weights along the path, i.e. the number of GBS-GBS edges."""
    if not isinstance(path, Path):
        path = Path.from_vertices(path)
    return path.handovers


def path_length(path: Path | Sequence[Vertex], scenario: Scenario) -> float:
    if not isinstance(path, Path):
        path = Path.from_vertices(path)
    pts = [scenario.start, *(scenario.gbs(i).position for i in path.association), scenario.finish]
    return sum(distance(p, q) for p, q in zip(pts, pts[1:]))


def path_time(path: Path | Sequence[Vertex], scenario: Scenario) -> float:
    """Mission time of flying start -> station tops -> finish at full speed."""
    return path_length(path, scenario) / scenario.v_max


class CoverageGraph:
    """Undirected graph where an edge means two consecutive associations are possible.

    Start-G_m edges exist when the start lies in disk m, G_m-G_n edges when the
    two disks touch or overlap, finish edges likewise.  All comparisons are
    inclusive and use plain float comparison.
    """

    def __init__(self, scenario: Scenario):
        disks: dict[int, CoverageDisk] = {}
        for g in sorted(scenario.gbs_list, key=lambda g: g.id):
            disk = coverage_disk(g, scenario)
            if disk is not None and g.id not in disks:
                disks[g.id] = disk
        self.gbs_ids: tuple[int, ...] = tuple(disks)
        self.disks = disks
        self.start = scenario.start
        self.finish = scenario.finish
        self.v_max = scenario.v_max

        n = len(self.gbs_ids)
        self.num_vertices = n + 2
        self.start_index = 0
        self.finish_index = n + 1
        self._index = {gid: k + 1 for k, gid in enumerate(self.gbs_ids)}

        pts = [self.start, *(disks[i].center for i in self.gbs_ids), self.finish]
        rad = [0.0, *(disks[i].radius for i in self.gbs_ids), 0.0]
        adj: list[list[tuple[int, int, float]]] = [[] for _ in range(n + 2)]
        edges: dict[tuple[int, int], tuple[int, float]] = {}

        def add(a: int, b: int, hw: int, dw: float) -> None:
            adj[a].append((b, hw, dw))
            adj[b].append((a, hw, dw))
            edges[(a, b)] = (hw, dw)

        for k in range(1, n + 1):
            d0 = distance(self.start, pts[k])
            if d0 <= rad[k]:
                add(0, k, 0, d0)
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                d = distance(pts[a], pts[b])
                if d <= rad[a] + rad[b]:
                    add(a, b, 1, d)
        for k in range(1, n + 1):
            dF = distance(self.finish, pts[k])
            if dF <= rad[k]:
                add(k, n + 1, 0, dF)

        for lst in adj:
            lst.sort()
        self.adj: tuple[tuple[tuple[int, int, float], ...], ...] = tuple(tuple(lst) for lst in adj)
        self._edges = edges
        self._points = pts

    # -- vertex addressing -------------------------------------------------

    def index_of(self, v: Vertex) -> int:
        if v == START:
            return self.start_index
        if v == FINISH:
            return self.finish_index
        return self._index[v]

    def vertex_at(self, k: int) -> Vertex:
        if k == self.start_index:
            return START
        if k == self.finish_index:
            return FINISH
        return self.gbs_ids[k - 1]

    def point(self, k: int) -> tuple[float, float]:
        return self._points[k]

    def to_path(self, indices: Sequence[int]) -> Path:
        return Path.from_vertices([self.vertex_at(k) for k in indices])

    def to_indices(self, path: Path) -> tuple[int, ...]:
        return tuple(self.index_of(v) for v in path.vertices)

    # -- edges -------------------------------------------------------------

    def edge(self, u: Vertex, v: Vertex) -> tuple[int, float] | None:
        a, b = self.index_of(u), self.index_of(v)
        return self._edges.get((min(a, b), max(a, b)))

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return self.edge(u, v) is not None

    def edges(self) -> Iterable[tuple[Vertex, Vertex, int, float]]:
        for (a, b), (hw, dw) in sorted(self._edges.items()):
            yield self.vertex_at(a), self.vertex_at(b), hw, dw

    def neighbors(self, v: Vertex) -> list[Vertex]:
        return [self.vertex_at(b) for b, _, _ in self.adj[self.index_of(v)]]

    def degree(self, v: Vertex) -> int:
        return len(self.adj[self.index_of(v)])

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def is_path(self, path: Path) -> bool:
        """True when every consecutive pair of the path is a graph edge."""
        try:
            idx = self.to_indices(path)
        except KeyError:
            return False
        return all((min(a, b), max(a, b)) in self._edges for a, b in zip(idx, idx[1:]))

    def index_path_weight(self, indices: Sequence[int], weight: EdgeWeight) -> float:
        # accumulate from the start, in path order, like the label-setting search
        total = 0.0
        for a, b in zip(indices, indices[1:]):
            hw, dw = self._edges[(min(a, b), max(a, b))]
            total += weight(hw, dw)
        return total

    def path_weight(self, path: Path, weight: EdgeWeight) -> float:
        return self.index_path_weight(self.to_indices(path), weight)

    def distance_matrix(self) -> np.ndarray:
        """Distance weights as a dense matrix, ``inf`` where there is no edge."""
        out = np.full((self.num_vertices, self.num_vertices), np.inf)
        for (a, b), (_, dw) in self._edges.items():
            out[a, b] = out[b, a] = dw
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "v", "handover_weight", "distance_m"])
        for u, v, hw, dw in self.edges():
            w.writerow([_label(u), _label(v), hw, repr(dw)])
        return buf.getvalue()


def _label(v: Vertex) -> str:
    if v == START:
        return "U0"
    if v == FINISH:
        return "UF"
    return f"G{v}"


def build_graph(scenario: Scenario) -> CoverageGraph:
    return CoverageGraph(scenario)


def handover_weight(hw: int, dw: float) -> float:
    return float(hw)


def distance_weight(hw: int, dw: float) -> float:
    return dw


def combined_weight(lam: float, v_max: float) -> EdgeWeight:
    """Lagrangian edge cost: handovers plus ``lam`` times flight time."""

    def weight(hw: int, dw: float) -> float:
        return hw + lam * dw / v_max

    return weight
