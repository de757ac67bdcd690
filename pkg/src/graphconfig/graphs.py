"""Finite multigraphs and the metric quantities that govern discretization.

A graph here is a plain combinatorial object: named vertices, named edges,
parallel edges allowed, self-loops representable.  On top of that sit the
two measurements that decide whether the discretized configuration space of
``n`` robots is a faithful model of the continuous one: the shortest
distance between essential vertices (valence != 2) and the girth.  When
either is too small, uniform edge subdivision repairs the graph.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

NAME_PATTERN = re.compile(r"[A-Za-z0-9_.\-]+\Z")

BUILTIN_NAMES = ("Y", "Q", "X", "K5", "K33", "Upsilon", "cycle", "path")


class GraphParseError(ValueError):
    """Malformed graph file: carries a human-readable line reference."""


@dataclass(frozen=True)
class Vertex:
    id: int
    name: str


@dataclass(frozen=True)
class Edge:
    id: int
    name: str
    endpoints: tuple[int, int]

    @property
    def tail(self) -> int:
        """Lower endpoint id; every non-loop edge is oriented tail -> head."""
        return min(self.endpoints)

    @property
    def head(self) -> int:
        return max(self.endpoints)

    @property
    def is_loop(self) -> bool:
        return self.endpoints[0] == self.endpoints[1]

    def other(self, v: int) -> int:
        a, b = self.endpoints
        return b if v == a else a


@dataclass(frozen=True)
class Graph:
    """Immutable multigraph with dense integer ids and unique names."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for i, v in enumerate(self.vertices):
            if v.id != i:
                raise ValueError(f"vertex ids must be dense: got {v.id} at position {i}")
            if not NAME_PATTERN.match(v.name):
                raise ValueError(f"invalid vertex name {v.name!r}")
            if v.name in seen:
                raise ValueError(f"duplicate vertex name {v.name!r}")
            seen.add(v.name)
        seen = set()
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise ValueError(f"edge ids must be dense: got {e.id} at position {i}")
            if not NAME_PATTERN.match(e.name):
                raise ValueError(f"invalid edge name {e.name!r}")
            if e.name in seen:
                raise ValueError(f"duplicate edge name {e.name!r}")
            seen.add(e.name)
            for w in e.endpoints:
                if not 0 <= w < len(self.vertices):
                    raise ValueError(f"edge {e.name!r} references unknown vertex id {w}")

    @cached_property
    def _vertex_by_name(self) -> dict[str, Vertex]:
        return {v.name: v for v in self.vertices}

    @cached_property
    def _edge_by_name(self) -> dict[str, Edge]:
        return {e.name: e for e in self.edges}

    @cached_property
    def _incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, ascending (a loop listed once)."""
        inc: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            inc[e.endpoints[0]].append(e.id)
            if not e.is_loop:
                inc[e.endpoints[1]].append(e.id)
        return tuple(tuple(sorted(ids)) for ids in inc)

    def vertex_named(self, name: str) -> Vertex:
        try:
            return self._vertex_by_name[name]
        except KeyError:
            raise KeyError(f"no vertex named {name!r}") from None

    def edge_named(self, name: str) -> Edge:
        try:
            return self._edge_by_name[name]
        except KeyError:
            raise KeyError(f"no edge named {name!r}") from None

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._incidence[v]

    def valence(self, v: int) -> int:
        """Number of edge-ends at v; a self-loop contributes 2."""
        count = 0
        for eid in self._incidence[v]:
            count += 2 if self.edges[eid].is_loop else 1
        return count

    def has_loop(self) -> bool:
        return any(e.is_loop for e in self.edges)


def parse_graph(text: str, label: str | None = None) -> Graph:
    """Parse the line-oriented graph format.

    ``#`` starts a comment line, ``v <name>`` declares a vertex and
    ``e <name> <vname1> <vname2>`` an edge between already-declared
    vertices.  Ids are assigned in file order.
    """
    vertices: list[Vertex] = []
    edges: list[Edge] = []
    vnames: dict[str, int] = {}
    enames: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) != 2:
                raise GraphParseError(f"line {lineno}: expected 'v <name>'")
            name = parts[1]
            if not NAME_PATTERN.match(name):
                raise GraphParseError(f"line {lineno}: invalid name {name!r}")
            if name in vnames:
                raise GraphParseError(f"line {lineno}: duplicate vertex name {name!r}")
            vnames[name] = len(vertices)
            vertices.append(Vertex(len(vertices), name))
        elif kind == "e":
            if len(parts) != 4:
                raise GraphParseError(f"line {lineno}: expected 'e <name> <vname1> <vname2>'")
            name, a, b = parts[1], parts[2], parts[3]
            if not NAME_PATTERN.match(name):
                raise GraphParseError(f"line {lineno}: invalid name {name!r}")
            if name in enames:
                raise GraphParseError(f"line {lineno}: duplicate edge name {name!r}")
            for w in (a, b):
                if w not in vnames:
                    raise GraphParseError(f"line {lineno}: unknown endpoint {w!r}")
            enames.add(name)
            edges.append(Edge(len(edges), name, (vnames[a], vnames[b])))
        else:
            raise GraphParseError(f"line {lineno}: unknown declaration {kind!r}")
    return Graph(tuple(vertices), tuple(edges), label=label)


def serialize_graph(g: Graph) -> str:
    """Emit the graph file format; parse_graph(serialize_graph(g)) == g."""
    lines = [f"v {v.name}" for v in g.vertices]
    for e in g.edges:
        a, b = e.endpoints
        lines.append(f"e {e.name} {g.vertices[a].name} {g.vertices[b].name}")
    return "\n".join(lines) + "\n"


def _star(k: int, label: str) -> Graph:
    verts = [Vertex(0, "c")] + [Vertex(i, f"l{i}") for i in range(1, k + 1)]
    edges = [Edge(i - 1, f"e{i}", (0, i)) for i in range(1, k + 1)]
    return Graph(tuple(verts), tuple(edges), label=label)


def builtin(name: str, param: int | None = None) -> Graph:
    """Construct a builtin graph: Y, Q, X, K5, K33, Upsilon(k), cycle(n), path(n)."""
    if name == "Y":
        return _star(3, "Y")
    if name == "X":
        return _star(4, "X")
    if name == "Upsilon":
        if param is None or param < 3:
            raise ValueError("Upsilon requires a prong count k >= 3")
        return _star(param, f"Upsilon:{param}")
    if name == "Q":
        # Y with two leaves identified: one parallel pair plus a pendant edge.
        verts = (Vertex(0, "a"), Vertex(1, "b"), Vertex(2, "c"))
        edges = (Edge(0, "e1", (0, 2)), Edge(1, "e2", (0, 2)), Edge(2, "e3", (1, 2)))
        return Graph(verts, edges, label="Q")
    if name == "K5":
        verts = tuple(Vertex(i, f"v{i + 1}") for i in range(5))
        edges = []
        for i in range(5):
            for j in range(i + 1, 5):
                edges.append(Edge(len(edges), f"v{i + 1}_v{j + 1}", (i, j)))
        return Graph(verts, tuple(edges), label="K5")
    if name == "K33":
        verts = tuple(Vertex(i, f"u{i + 1}" if i < 3 else f"w{i - 2}") for i in range(6))
        edges = []
        for i in range(3):
            for j in range(3):
                edges.append(Edge(len(edges), f"u{i + 1}_w{j + 1}", (i, 3 + j)))
        return Graph(verts, tuple(edges), label="K33")
    if name == "cycle":
        if param is None or param < 1:
            raise ValueError("cycle requires a length n >= 1")
        n = param
        verts = tuple(Vertex(i, f"v{i + 1}") for i in range(n))
        edges = tuple(Edge(i, f"c{i + 1}", (i, (i + 1) % n)) for i in range(n))
        return Graph(verts, edges, label=f"cycle:{n}")
    if name == "path":
        if param is None or param < 1:
            raise ValueError("path requires a length n >= 1")
        n = param
        verts = tuple(Vertex(i, f"v{i + 1}") for i in range(n + 1))
        edges = tuple(Edge(i, f"p{i + 1}", (i, i + 1)) for i in range(n))
        return Graph(verts, edges, label=f"path:{n}")
    raise ValueError(f"unknown builtin graph {name!r}")


def _bfs_distances(g: Graph, source: int, skip_edge: int | None = None) -> list[int | None]:
    """Unweighted distances from source, optionally ignoring one edge."""
    dist: list[int | None] = [None] * len(g.vertices)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for eid in g.incident_edges(u):
            if eid == skip_edge:
                continue
            w = g.edges[eid].other(u)
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _bfs_path_edges(g: Graph, source: int, target: int, skip_edge: int | None = None) -> list[int] | None:
    """Edge ids of a shortest source->target path, or None if unreachable."""
    if source == target:
        return []
    parent: dict[int, tuple[int, int]] = {}  # vertex -> (previous vertex, edge id)
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for eid in g.incident_edges(u):
            if eid == skip_edge:
                continue
            w = g.edges[eid].other(u)
            if w in seen:
                continue
            seen.add(w)
            parent[w] = (u, eid)
            if w == target:
                path = []
                x = w
                while x != source:
                    x, e = parent[x]
                    path.append(e)
                path.reverse()
                return path
            queue.append(w)
    return None


def essential_vertices(g: Graph) -> set[int]:
    """Vertices of valence != 2 (a self-loop counts 2 toward its vertex)."""
    return {v.id for v in g.vertices if g.valence(v.id) != 2}


def essential_separation(g: Graph) -> int | None:
    """Minimum edge-count distance between distinct essential vertices.

    None when fewer than two essential vertices exist, or when no two of
    them are connected by any path.
    """
    pair = _closest_essential_pair(g)
    return None if pair is None else pair[2]


def _closest_essential_pair(g: Graph) -> tuple[int, int, int] | None:
    essential = sorted(essential_vertices(g))
    if len(essential) < 2:
        return None
    best: tuple[int, int, int] | None = None
    for i, u in enumerate(essential):
        dist = _bfs_distances(g, u)
        for w in essential[i + 1:]:
            d = dist[w]
            if d is not None and (best is None or d < best[2]):
                best = (u, w, d)
    return best


def girth(g: Graph) -> int | None:
    """Minimum edge count of a cycle; a self-loop is 1, a parallel pair 2."""
    cyc = _shortest_cycle(g)
    return None if cyc is None else len(cyc)


def _shortest_cycle(g: Graph) -> list[int] | None:
    """Edge ids of a minimum cycle: shortest endpoint path avoiding each edge."""
    best: list[int] | None = None
    for e in g.edges:
        a, b = e.endpoints
        path = _bfs_path_edges(g, a, b, skip_edge=e.id)
        if path is None:
            continue
        cycle = path + [e.id]
        if best is None or len(cycle) < len(best):
            best = cycle
    return best


class PathWitness(NamedTuple):
    """A pair of essential vertices closer than the robot count allows."""

    u: int
    v: int
    edges: int


class CycleWitness(NamedTuple):
    """A shortest cycle, as edge ids, shorter than the robot count allows."""

    edge_ids: tuple[int, ...]
    edges: int


@dataclass(frozen=True)
class SufficiencyReport:
    """Outcome of the two separation conditions plus the vertex-count bound."""

    n: int
    satisfied: bool
    condition1_ok: bool
    condition2_ok: bool
    vertex_count_ok: bool
    witness_path: PathWitness | None
    witness_cycle: CycleWitness | None


def check_sufficiency(g: Graph, n: int) -> SufficiencyReport:
    """Decide whether the discretized space of n robots is faithful.

    Condition 1: every pair of essential vertices is at least n-1 edges
    apart.  Condition 2: every cycle has at least n+1 edges.  Both are
    checked on minimizers; a failing condition comes with its witness.
    """
    if n < 2:
        raise ValueError("sufficiency conditions are defined for n >= 2")
    witness_path = None
    witness_cycle = None
    pair = _closest_essential_pair(g)
    condition1_ok = pair is None or pair[2] >= n - 1
    if not condition1_ok:
        witness_path = PathWitness(pair[0], pair[1], pair[2])
    cyc = _shortest_cycle(g)
    condition2_ok = cyc is None or len(cyc) >= n + 1
    if not condition2_ok:
        witness_cycle = CycleWitness(tuple(cyc), len(cyc))
    vertex_count_ok = len(g.vertices) >= n
    return SufficiencyReport(
        n=n,
        satisfied=condition1_ok and condition2_ok and vertex_count_ok,
        condition1_ok=condition1_ok,
        condition2_ok=condition2_ok,
        vertex_count_ok=vertex_count_ok,
        witness_path=witness_path,
        witness_cycle=witness_cycle,
    )


def _expand_edges(g: Graph, parts_by_edge: dict[int, int]) -> Graph:
    """Replace each listed edge by a chain of that many parts."""
    vertices = list(g.vertices)
    edges: list[Edge] = []
    for e in g.edges:
        parts = parts_by_edge.get(e.id, 1)
        if parts == 1:
            edges.append(Edge(len(edges), e.name, e.endpoints))
            continue
        # Chain runs tail -> head through fresh valence-2 vertices.
        chain = [e.tail]
        for i in range(1, parts):
            vertices.append(Vertex(len(vertices), f"{e.name}.v{i}"))
            chain.append(vertices[-1].id)
        chain.append(e.head)
        for i in range(parts):
            edges.append(Edge(len(edges), f"{e.name}.s{i + 1}", (chain[i], chain[i + 1])))
    return Graph(tuple(vertices), tuple(edges), label=g.label)


def subdivide(g: Graph, edge_id: int, parts: int) -> Graph:
    """Replace one edge by a path of `parts` edges through fresh vertices."""
    if parts < 2:
        raise ValueError("parts must be >= 2")
    if not 0 <= edge_id < len(g.edges):
        raise ValueError(f"unknown edge id {edge_id}")
    return _expand_edges(g, {edge_id: parts})


def subdivide_for(g: Graph, n: int) -> Graph:
    """Uniformly subdivide every edge just enough to pass check_sufficiency.

    All edges are split into the same number of parts m, the smallest value
    for which the subdivided graph satisfies the conditions for n robots.
    The result is homeomorphic to g; m == 1 returns g unchanged.
    """
    if n < 2:
        raise ValueError("subdivide_for requires n >= 2")
    if not g.edges:
        raise ValueError("cannot subdivide a graph with no edges")
    m = 1
    while True:
        candidate = g if m == 1 else _expand_edges(g, {e.id: m for e in g.edges})
        if check_sufficiency(candidate, n).satisfied:
            return candidate
        m += 1
