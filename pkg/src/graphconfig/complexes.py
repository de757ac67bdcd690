"""Discretized configuration spaces of graphs as explicit cube complexes.

A cell is an n-tuple of vertices and edges of the underlying graph whose
closures are pairwise disjoint; its dimension is the number of edge
factors.  The labeled complex keeps tuples ordered (position i = robot i);
the unlabeled complex keeps one sorted representative per orbit.  Face
maps carry the cubical orientation signs, so the signed boundary operator
squares to zero over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np
from scipy import sparse

from .graphs import Graph

VERTEX = 0
EDGE = 1

TAIL = 0
HEAD = 1

DEFAULT_CELL_BUDGET = 10_000_000

LABELED = "labeled"
UNLABELED = "unlabeled"


class SelfLoopError(ValueError):
    """The graph has a self-loop; subdivide before building the complex."""


class BudgetError(RuntimeError):
    """Cell enumeration exceeded the configured budget."""


class CellFactor(NamedTuple):
    """One coordinate of a cell: a vertex (kind 0) or edge (kind 1) id."""

    kind: int
    ref: int


class Face(NamedTuple):
    """A codimension-1 face: which edge factor was replaced, and how."""

    position: int
    endpoint: int  # TAIL or HEAD
    sign: int
    target: int  # index of the face cell within its dimension


@dataclass(frozen=True)
class CubeCell:
    factors: tuple[CellFactor, ...]

    @property
    def dim(self) -> int:
        return sum(f.kind for f in self.factors)


@dataclass(frozen=True)
class CubeComplex:
    """All cells of the discretized configuration space, with face maps.

    cells[d] lists the d-cells in canonical (lexicographic) order; faces[d][i]
    holds the 2d face records of cells[d][i].
    """

    mode: str
    n: int
    graph: Graph
    cells: tuple[tuple[CubeCell, ...], ...]
    faces: tuple[tuple[tuple[Face, ...], ...], ...]

    def f_vector(self) -> tuple[int, ...]:
        """Cell counts for dimensions 0..n (trailing entries may be zero)."""
        return tuple(len(cs) for cs in self.cells)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(cs) for d, cs in enumerate(self.cells))

    def is_empty(self) -> bool:
        return all(not cs for cs in self.cells)

    def top_dim(self) -> int:
        """Largest dimension with a cell, or -1 for the empty complex."""
        for d in range(self.n, -1, -1):
            if self.cells[d]:
                return d
        return -1

    @cached_property
    def _index(self) -> dict[tuple[CellFactor, ...], tuple[int, int]]:
        idx: dict[tuple[CellFactor, ...], tuple[int, int]] = {}
        for d, cs in enumerate(self.cells):
            for i, cell in enumerate(cs):
                idx[cell.factors] = (d, i)
        return idx

    def index_of(self, factors: tuple[CellFactor, ...]) -> tuple[int, int]:
        return self._index[factors]


def _factor_closures(g: Graph) -> tuple[list[CellFactor], list[int]]:
    """Canonical factor list (vertices then edges) with closure bitmasks."""
    factors = [CellFactor(VERTEX, v.id) for v in g.vertices]
    masks = [1 << v.id for v in g.vertices]
    for e in g.edges:
        factors.append(CellFactor(EDGE, e.id))
        masks.append((1 << e.endpoints[0]) | (1 << e.endpoints[1]))
    return factors, masks


def build(
    g: Graph,
    n: int,
    mode: str = LABELED,
    budget: int = DEFAULT_CELL_BUDGET,
) -> CubeComplex:
    """Enumerate the discretized configuration space of n robots on g.

    Cells are all (ordered, or sorted-representative) n-tuples of factors
    with pairwise disjoint closures.  Raises SelfLoopError for graphs with
    loops and BudgetError once more than `budget` cells appear.
    """
    if n < 1:
        raise ValueError("robot count must be >= 1")
    if mode not in (LABELED, UNLABELED):
        raise ValueError(f"unknown mode {mode!r}")
    for e in g.edges:
        if e.is_loop:
            raise SelfLoopError(
                f"edge {e.name!r} is a self-loop; subdivide the graph before building"
            )

    factors, masks = _factor_closures(g)
    cells_by_dim: list[list[tuple[CellFactor, ...]]] = [[] for _ in range(n + 1)]
    count = 0
    num_factors = len(factors)

    def record(acc: tuple[CellFactor, ...], dim: int) -> None:
        nonlocal count
        count += 1
        if count > budget:
            raise BudgetError(f"cell budget of {budget} exceeded")
        cells_by_dim[dim].append(acc)

    def extend(pos: int, first: int, used: int, acc: tuple[CellFactor, ...], dim: int) -> None:
        if pos == n:
            record(acc, dim)
            return
        for i in range(first, num_factors):
            m = masks[i]
            if m & used:
                continue
            f = factors[i]
            nxt = i + 1 if mode == UNLABELED else 0
            extend(pos + 1, nxt, used | m, acc + (f,), dim + f.kind)

    extend(0, 0, 0, (), 0)

    cells = tuple(tuple(CubeCell(fs) for fs in dim_cells) for dim_cells in cells_by_dim)
    index: dict[tuple[CellFactor, ...], int] = {}
    for dim_cells in cells_by_dim:
        for i, fs in enumerate(dim_cells):
            index[fs] = i

    faces: list[tuple[tuple[Face, ...], ...]] = [()] * (n + 1)
    faces[0] = tuple(() for _ in cells_by_dim[0])
    for d in range(1, n + 1):
        dim_faces: list[tuple[Face, ...]] = []
        for fs in cells_by_dim[d]:
            recs: list[Face] = []
            k = 0
            for p, f in enumerate(fs):
                if f.kind != EDGE:
                    continue
                k += 1
                sign_head = 1 if k % 2 == 1 else -1
                e = g.edges[f.ref]
                for endpoint, vtx, sign in (
                    (TAIL, e.tail, -sign_head),
                    (HEAD, e.head, sign_head),
                ):
                    child = fs[:p] + (CellFactor(VERTEX, vtx),) + fs[p + 1:]
                    if mode == UNLABELED:
                        child = tuple(sorted(child))
                    recs.append(Face(p, endpoint, sign, index[child]))
            dim_faces.append(tuple(recs))
        faces[d] = tuple(dim_faces)

    return CubeComplex(mode=mode, n=n, graph=g, cells=cells, faces=tuple(faces))


Configuration = tuple[int, ...]


class MoveEdge(NamedTuple):
    """A 1-cell viewed as a legal single-robot move between configurations."""

    cell: int  # index of the 1-cell
    position: int  # tuple slot holding the moving robot/token
    edge: int  # graph edge id traversed
    ends: tuple[int, int]  # 0-cell indices (tail configuration, head configuration)


@dataclass(frozen=True)
class MoveGraph:
    """The 1-skeleton: configurations as nodes, single moves as multi-edges."""

    nodes: tuple[Configuration, ...]
    edges: tuple[MoveEdge, ...]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for me in self.edges:
            a, b = me.ends
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(ns) for ns in adj)


def one_skeleton(c: CubeComplex) -> MoveGraph:
    """Expose the 0- and 1-cells as a move graph over configurations."""
    nodes = tuple(tuple(f.ref for f in cell.factors) for cell in c.cells[0])
    edges = []
    for i, cell in enumerate(c.cells[1]):
        recs = c.faces[1][i]
        tail_target = next(r.target for r in recs if r.endpoint == TAIL)
        head_target = next(r.target for r in recs if r.endpoint == HEAD)
        position = recs[0].position
        edge_id = cell.factors[position].ref
        edges.append(MoveEdge(i, position, edge_id, (tail_target, head_target)))
    return MoveGraph(nodes=nodes, edges=tuple(edges))


class Components(NamedTuple):
    count: int
    labels: tuple[int, ...]  # component id per 0-cell, numbered by first visit


def connected_components(c: CubeComplex) -> Components:
    """Connected components of the 1-skeleton, deterministically numbered."""
    n0 = len(c.cells[0])
    adj: list[list[int]] = [[] for _ in range(n0)]
    for recs in c.faces[1]:
        a = next(r.target for r in recs if r.endpoint == TAIL)
        b = next(r.target for r in recs if r.endpoint == HEAD)
        adj[a].append(b)
        adj[b].append(a)
    labels = [-1] * n0
    count = 0
    for start in range(n0):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = count
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if labels[w] == -1:
                    labels[w] = count
                    stack.append(w)
        count += 1
    return Components(count, tuple(labels))


def boundary_matrix(c: CubeComplex, d: int) -> sparse.csc_matrix:
    """Signed incidence matrix from d-cells (columns) to (d-1)-cells (rows)."""
    if d < 1 or d > c.n:
        raise ValueError(f"dimension {d} out of range 1..{c.n}")
    rows, cols, data = [], [], []
    for j, recs in enumerate(c.faces[d]):
        for r in recs:
            rows.append(r.target)
            cols.append(j)
            data.append(r.sign)
    shape = (len(c.cells[d - 1]), len(c.cells[d]))
    mat = sparse.coo_matrix(
        (np.asarray(data, dtype=np.int64), (rows, cols)), shape=shape
    )
    return mat.tocsc()


def verify_dd_zero(c: CubeComplex) -> bool:
    """Check that the signed boundary operator squares to zero."""
    for d in range(2, c.n + 1):
        if len(c.cells[d]) == 0:
            continue
        prod = boundary_matrix(c, d - 1) @ boundary_matrix(c, d)
        if prod.count_nonzero() != 0:
            return False
    return True


def _factor_name(c: CubeComplex, f: CellFactor) -> list[str]:
    if f.kind == VERTEX:
        return ["v", c.graph.vertices[f.ref].name]
    return ["e", c.graph.edges[f.ref].name]


def complex_to_json(c: CubeComplex) -> dict:
    """Debug/test dump: cells by name per dimension, faces by global cell id."""
    fv = c.f_vector()
    offsets = [0]
    for count in fv:
        offsets.append(offsets[-1] + count)
    cells = [
        [[_factor_name(c, f) for f in cell.factors] for cell in dim_cells]
        for dim_cells in c.cells
    ]
    faces: dict[str, list[dict]] = {}
    for d in range(1, c.n + 1):
        for i, recs in enumerate(c.faces[d]):
            gid = offsets[d] + i
            faces[str(gid)] = [
                {"face": offsets[d - 1] + r.target, "sign": r.sign} for r in recs
            ]
    return {
        "mode": c.mode,
        "n": c.n,
        "f_vector": list(fv),
        "cells": cells,
        "faces": faces,
    }


def iter_cells(c: CubeComplex) -> Iterator[tuple[int, int, CubeCell]]:
    """Yield (dim, index, cell) over all cells in canonical order."""
    for d, dim_cells in enumerate(c.cells):
        for i, cell in enumerate(dim_cells):
            yield d, i, cell
