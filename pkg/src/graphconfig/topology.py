"""Topological invariants of a built cube complex.

Betti numbers come from exact ranks of the boundary matrices: fraction-free
integer elimination over the rationals, bitmask elimination over the
two-element field.  Surface classification, the vertex-link flag condition
(Gromov's non-positive-curvature criterion), the radial-tree bouquet count
and the token/hole duality comparison live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from scipy import sparse

from .complexes import (
    DEFAULT_CELL_BUDGET,
    HEAD,
    LABELED,
    TAIL,
    UNLABELED,
    CubeComplex,
    boundary_matrix,
    build,
    connected_components,
)
from .graphs import Graph

FIELD_Q = "q"
FIELD_F2 = "f2"


# ---------------------------------------------------------------------------
# exact ranks


def _sparse_columns(mat: sparse.spmatrix) -> list[dict[int, int]]:
    coo = mat.tocoo()
    cols: list[dict[int, int]] = [{} for _ in range(coo.shape[1])]
    for i, j, v in zip(coo.row, coo.col, coo.data):
        if v:
            cols[j][int(i)] = cols[j].get(int(i), 0) + int(v)
    return [{i: v for i, v in col.items() if v} for col in cols]


def rank_rational(mat: sparse.spmatrix) -> int:
    """Exact rank over the rationals by fraction-free column elimination.

    Columns are reduced against an incremental pivot basis using integer
    cross-multiplication; every intermediate vector is renormalized by its
    gcd, so no floating point and no unbounded growth.
    """
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in _sparse_columns(mat):
        vec = col
        while vec:
            r = min(vec)
            piv = pivots.get(r)
            if piv is None:
                g = math.gcd(*vec.values()) if len(vec) > 1 else abs(vec[r])
                if g > 1:
                    vec = {i: v // g for i, v in vec.items()}
                if vec[r] < 0:
                    vec = {i: -v for i, v in vec.items()}
                pivots[r] = vec
                rank += 1
                break
            a, b = piv[r], vec[r]
            g = math.gcd(a, b)
            ma, mb = a // g, b // g
            nxt = {i: ma * v for i, v in vec.items()}
            for i, v in piv.items():
                nxt[i] = nxt.get(i, 0) - mb * v
            vec = {i: v for i, v in nxt.items() if v}
            if vec:
                g = math.gcd(*vec.values()) if len(vec) > 1 else 0
                if g > 1:
                    vec = {i: v // g for i, v in vec.items()}
    return rank


def rank_gf2(mat: sparse.spmatrix) -> int:
    """Rank over the two-element field via bitmask elimination."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in _sparse_columns(mat):
        vec = 0
        for i, v in col.items():
            if v % 2:
                vec |= 1 << i
        while vec:
            p = vec.bit_length() - 1
            piv = pivots.get(p)
            if piv is None:
                pivots[p] = vec
                rank += 1
                break
            vec ^= piv
    return rank


# ---------------------------------------------------------------------------
# Betti numbers


@dataclass(frozen=True)
class BettiVector:
    field: str
    values: tuple[int, ...]  # b_0..b_top, trailing zeros trimmed


def betti_numbers(c: CubeComplex, field: str = FIELD_Q) -> BettiVector:
    """Betti numbers b_d = f_d - rank d_d - rank d_{d+1}, computed exactly."""
    if field not in (FIELD_Q, FIELD_F2):
        raise ValueError(f"unknown field {field!r}")
    if field == FIELD_Q and c.mode != LABELED:
        raise ValueError("rational Betti numbers require a labeled complex")
    if c.is_empty():
        return BettiVector(field, ())
    rank = rank_rational if field == FIELD_Q else rank_gf2
    fv = c.f_vector()
    ranks = [0] * (c.n + 2)
    for d in range(1, c.n + 1):
        if fv[d]:
            ranks[d] = rank(boundary_matrix(c, d))
    values = [fv[d] - ranks[d] - ranks[d + 1] for d in range(c.n + 1)]
    while values and values[-1] == 0:
        values.pop()
    return BettiVector(field, tuple(values))


# ---------------------------------------------------------------------------
# vertex links and the flag condition

LinkVertex = tuple[int, int]  # (1-cell index, TAIL or HEAD end at the base)


@dataclass(frozen=True)
class LinkComplex:
    """Simplicial link of a 0-cell: 1-cell ends, with one k-simplex per
    (k+1)-cell cornered there."""

    base: int
    vertices: tuple[LinkVertex, ...]
    simplices: frozenset[frozenset[LinkVertex]]


class FlagLinkReport(NamedTuple):
    is_flag: bool
    base: int | None = None  # 0-cell where the first violation sits
    clique: tuple[LinkVertex, ...] | None = None
    reason: str | None = None


def _one_cell_ends(c: CubeComplex) -> list[tuple[int, int]]:
    ends = []
    for recs in c.faces[1]:
        t = next(r.target for r in recs if r.endpoint == TAIL)
        h = next(r.target for r in recs if r.endpoint == HEAD)
        ends.append((t, h))
    return ends


def _iterated_one_cells(c: CubeComplex) -> list[list[frozenset[int]]]:
    """For each cell of dim >= 1, the 1-cells among its iterated faces."""
    sets: list[list[frozenset[int]]] = [[], [frozenset([i]) for i in range(len(c.cells[1]))]]
    for d in range(2, c.n + 1):
        level = []
        for recs in c.faces[d]:
            acc: frozenset[int] = frozenset()
            for r in recs:
                acc |= sets[d - 1][r.target]
            level.append(acc)
        sets.append(level)
    return sets


def _iterated_corners(c: CubeComplex) -> list[list[frozenset[int]]]:
    """For each cell, the 0-cells among its iterated faces."""
    sets: list[list[frozenset[int]]] = [[frozenset([i]) for i in range(len(c.cells[0]))]]
    for d in range(1, c.n + 1):
        level = []
        for recs in c.faces[d]:
            acc: frozenset[int] = frozenset()
            for r in recs:
                acc |= sets[d - 1][r.target]
            level.append(acc)
        sets.append(level)
    return sets


class _DegenerateLink(Exception):
    def __init__(self, base: int, reason: str):
        self.base = base
        self.reason = reason


def _link_tables(c: CubeComplex) -> tuple[
    list[list[LinkVertex]],
    list[dict[frozenset[LinkVertex], int]],
]:
    """Per 0-cell: the link vertices, and each direction-set with the number
    of distinct cells producing it.  Raises _DegenerateLink for structures a
    cube-complex link cannot have (a 1-cell with both ends at the base, or a
    cell whose direction count does not match its dimension)."""
    n0 = len(c.cells[0])
    ends = _one_cell_ends(c)
    vertices: list[list[LinkVertex]] = [[] for _ in range(n0)]
    for j, (t, h) in enumerate(ends):
        if t == h:
            raise _DegenerateLink(t, f"1-cell {j} has both ends at the same 0-cell")
        vertices[t].append((j, TAIL))
        vertices[h].append((j, HEAD))
    simplices: list[dict[frozenset[LinkVertex], int]] = [{} for _ in range(n0)]
    one_cells = _iterated_one_cells(c)
    corners = _iterated_corners(c)
    for d in range(1, c.n + 1):
        for i in range(len(c.cells[d])):
            for x in corners[d][i]:
                dirs = []
                for j in one_cells[d][i]:
                    t, h = ends[j]
                    if t == x:
                        dirs.append((j, TAIL))
                    if h == x:
                        dirs.append((j, HEAD))
                simplex = frozenset(dirs)
                if len(simplex) != d:
                    raise _DegenerateLink(
                        x, f"cell of dimension {d} meets its corner in {len(simplex)} directions"
                    )
                simplices[x][simplex] = simplices[x].get(simplex, 0) + 1
    return vertices, simplices


def vertex_link(c: CubeComplex, base: int) -> LinkComplex:
    """The link of one 0-cell as a simplicial complex on 1-cell ends."""
    vertices, simplices = _link_tables(c)
    return LinkComplex(
        base=base,
        vertices=tuple(vertices[base]),
        simplices=frozenset(simplices[base]),
    )


def flag_link_check(c: CubeComplex) -> FlagLinkReport:
    """Verify Gromov's criterion: every vertex link is a flag complex.

    A link is flag when every pairwise-compatible set of link vertices spans
    a simplex.  Checked inductively: each simplex extended by any vertex
    adjacent to all of it must again be a simplex.  Structures that are not
    simplicial links at all (doubled simplices from distinct cells) are
    rejected as non-flag.
    """
    try:
        _, simplices = _link_tables(c)
    except _DegenerateLink as exc:
        return FlagLinkReport(False, base=exc.base, clique=None, reason=exc.reason)
    for x, sims in enumerate(simplices):
        for s, count in sims.items():
            if count > 1 and len(s) >= 1:
                return FlagLinkReport(
                    False,
                    base=x,
                    clique=tuple(sorted(s)),
                    reason=f"{count} distinct cells share one direction set (non-simple gluing)",
                )
        adjacency: dict[LinkVertex, set[LinkVertex]] = {}
        for s in sims:
            if len(s) == 2:
                a, b = tuple(s)
                adjacency.setdefault(a, set()).add(b)
                adjacency.setdefault(b, set()).add(a)
        for s in sorted(sims, key=len):
            if len(s) < 2:
                continue
            members = tuple(s)
            common = set(adjacency.get(members[0], ()))
            for v in members[1:]:
                common &= adjacency.get(v, set())
            common -= s
            for u in sorted(common):
                if frozenset(s | {u}) not in sims:
                    return FlagLinkReport(
                        False,
                        base=x,
                        clique=tuple(sorted(s | {u})),
                        reason="pairwise-compatible set spans no simplex",
                    )
    return FlagLinkReport(True)


# ---------------------------------------------------------------------------
# surface classification


class SurfaceFailure(NamedTuple):
    reason: str
    cell: tuple[int, int] | None  # (dimension, index) when cell-specific


@dataclass(frozen=True)
class SurfaceReport:
    is_pure_2d: bool
    is_closed_surface: bool
    orientable: bool | None
    connected: bool
    genus: int | None
    chi: int
    failure_witness: SurfaceFailure | None


def surface_classify(c: CubeComplex) -> SurfaceReport:
    """Decide whether the complex is a closed surface and classify it.

    Checks, in order: every cell has dimension <= 2 and every 0-/1-cell
    bounds some 2-cell; every 1-cell borders exactly two 2-cell face slots;
    the link of every 0-cell is a single cycle.  Orientability is then
    decided by propagating 2-cell orientations across shared 1-cells, and
    the genus read off the Euler characteristic.
    """
    chi = c.euler_characteristic()
    connected = connected_components(c).count == 1
    fv = c.f_vector()

    def report(pure: bool, closed: bool, orientable, genus, witness) -> SurfaceReport:
        return SurfaceReport(
            is_pure_2d=pure,
            is_closed_surface=closed,
            orientable=orientable,
            connected=connected,
            genus=genus,
            chi=chi,
            failure_witness=witness,
        )

    if c.is_empty():
        return report(False, False, None, None, SurfaceFailure("complex has no cells", None))
    for d in range(3, c.n + 1):
        if fv[d]:
            return report(
                False, False, None, None,
                SurfaceFailure(f"cell of dimension {d} present", (d, 0)),
            )
    if fv[2] == 0:
        return report(False, False, None, None, SurfaceFailure("no 2-cells", (0, 0)))

    covered1 = {r.target for recs in c.faces[2] for r in recs}
    covered0 = {r.target for j in covered1 for r in c.faces[1][j]}
    for i in range(fv[0]):
        if i not in covered0:
            return report(
                False, False, None, None,
                SurfaceFailure("0-cell is not a face of any 2-cell", (0, i)),
            )
    for j in range(fv[1]):
        if j not in covered1:
            return report(
                False, False, None, None,
                SurfaceFailure("1-cell is not a face of any 2-cell", (1, j)),
            )

    border: list[list[tuple[int, int]]] = [[] for _ in range(fv[1])]  # (2-cell, sign)
    for q, recs in enumerate(c.faces[2]):
        for r in recs:
            border[r.target].append((q, r.sign))
    for j, slots in enumerate(border):
        if len(slots) != 2:
            return report(
                True, False, None, None,
                SurfaceFailure(f"1-cell borders {len(slots)} 2-cell face slots, expected 2", (1, j)),
            )

    link_failure = _link_cycle_failure(c)
    if link_failure is not None:
        return report(True, False, None, None, link_failure)

    orientable, bad_edge = _propagate_orientations(border)
    if not orientable:
        return report(
            True, True, False, None,
            SurfaceFailure("no consistent orientation of the 2-cells exists", (1, bad_edge)),
        )
    if not connected:
        return report(True, True, True, None, SurfaceFailure("complex is disconnected", None))
    # Closed connected orientable surface: chi = 2 - 2g.
    assert chi % 2 == 0
    return report(True, True, True, (2 - chi) // 2, None)


def _link_cycle_failure(c: CubeComplex) -> SurfaceFailure | None:
    """Check the link of every 0-cell is one cycle, counting multiplicities."""
    n0 = len(c.cells[0])
    ends = _one_cell_ends(c)
    adj: list[dict[LinkVertex, list[LinkVertex]]] = [{} for _ in range(n0)]
    for recs in c.faces[2]:
        by_pos: dict[int, dict[int, int]] = {}
        for r in recs:
            by_pos.setdefault(r.position, {})[r.endpoint] = r.target
        pos_a, pos_b = sorted(by_pos)
        for ca in (TAIL, HEAD):
            for cb in (TAIL, HEAD):
                keep_a = by_pos[pos_b][cb]  # 1-cell retaining the edge at pos_a
                keep_b = by_pos[pos_a][ca]
                corner = ends[keep_a][ca]
                if corner != ends[keep_b][cb]:
                    return SurfaceFailure("inconsistent corner structure", (0, corner))
                va, vb = (keep_a, ca), (keep_b, cb)
                adj[corner].setdefault(va, []).append(vb)
                adj[corner].setdefault(vb, []).append(va)
    for x in range(n0):
        link_vertices = [(j, TAIL) for j, (t, _) in enumerate(ends) if t == x]
        link_vertices += [(j, HEAD) for j, (_, h) in enumerate(ends) if h == x]
        if not link_vertices:
            return SurfaceFailure("isolated 0-cell", (0, x))
        degrees = {v: len(adj[x].get(v, ())) for v in link_vertices}
        if any(deg != 2 for deg in degrees.values()):
            return SurfaceFailure("link of 0-cell is not 2-regular", (0, x))
        seen = {link_vertices[0]}
        stack = [link_vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[x][v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(link_vertices):
            return SurfaceFailure("link of 0-cell is not a single cycle", (0, x))
    return None


def _propagate_orientations(border: list[list[tuple[int, int]]]) -> tuple[bool, int | None]:
    """2-color the 2-cells so each 1-cell gets opposite induced orientations."""
    orientation: dict[int, int] = {}
    # Adjacency of 2-cells through shared 1-cells, with the sign constraint.
    incident: dict[int, list[tuple[int, int, int]]] = {}  # 2-cell -> (other, s1*s2, shared 1-cell)
    for j, slots in enumerate(border):
        (q1, s1), (q2, s2) = slots
        if q1 == q2:
            if s1 == s2:
                return False, j
            continue
        incident.setdefault(q1, []).append((q2, s1 * s2, j))
        incident.setdefault(q2, []).append((q1, s1 * s2, j))
    for start in incident:
        if start in orientation:
            continue
        orientation[start] = 1
        stack = [start]
        while stack:
            q = stack.pop()
            for other, s_prod, j in incident[q]:
                want = -orientation[q] * s_prod
                if other not in orientation:
                    orientation[other] = want
                    stack.append(other)
                elif orientation[other] != want:
                    return False, j
    return True, None


# ---------------------------------------------------------------------------
# bouquet formula and duality comparison


class BouquetRank(NamedTuple):
    labeled: int
    unlabeled: int


def bouquet_rank(n: int, k: int) -> BouquetRank:
    """Loop count of the bouquet equivalent to n robots on a k-prong tree.

    P = 1 + (nk - 2n - k + 1) * (n + k - 2)! / (k - 1)!; the unlabeled
    variant divides the second term by n!.
    """
    if k < 3:
        raise ValueError("radial tree needs k >= 3 prongs")
    if n < 1:
        raise ValueError("robot count must be >= 1")
    lead = n * k - 2 * n - k + 1
    term = Fraction(math.factorial(n + k - 2), math.factorial(k - 1))
    labeled = 1 + lead * term
    unlabeled = 1 + lead * term / math.factorial(n)
    if labeled.denominator != 1 or unlabeled.denominator != 1:
        raise ArithmeticError(f"bouquet rank is not integral for n={n}, k={k}")
    return BouquetRank(int(labeled), int(unlabeled))


@dataclass(frozen=True)
class DualityReport:
    """Side-by-side Euler characteristics of the unlabeled spaces for n
    tokens and for V-n tokens (the 'holes').  Only what is measured is
    asserted; equal_chi simply records whether the two values agree."""

    n: int
    dual_n: int
    chi: int
    dual_chi: int
    f_vector: tuple[int, ...]
    dual_f_vector: tuple[int, ...]
    equal_chi: bool


def duality_compare(g: Graph, n: int, budget: int = DEFAULT_CELL_BUDGET) -> DualityReport:
    vcount = len(g.vertices)
    if not 1 <= n < vcount:
        raise ValueError(f"need 1 <= n < {vcount}, got {n}")
    c = build(g, n, UNLABELED, budget)
    dual = build(g, vcount - n, UNLABELED, budget)
    chi, dual_chi = c.euler_characteristic(), dual.euler_characteristic()
    return DualityReport(
        n=n,
        dual_n=vcount - n,
        chi=chi,
        dual_chi=dual_chi,
        f_vector=c.f_vector(),
        dual_f_vector=dual.f_vector(),
        equal_chi=chi == dual_chi,
    )


# ---------------------------------------------------------------------------
# aggregate report


def topology_report(
    c: CubeComplex,
    field: str | None = None,
    include_surface: bool = False,
    include_npc: bool = False,
) -> dict:
    """Assemble the JSON-ready topology report for one complex."""
    if field is None:
        field = FIELD_Q if c.mode == LABELED else FIELD_F2
    betti = betti_numbers(c, field)
    surface = surface_classify(c) if include_surface else None
    npc = flag_link_check(c) if include_npc else None
    witnesses: dict = {"surface": None, "npc": None}
    surface_dict = None
    if surface is not None:
        surface_dict = {
            "is_pure_2d": surface.is_pure_2d,
            "is_closed_surface": surface.is_closed_surface,
            "orientable": surface.orientable,
            "connected": surface.connected,
            "genus": surface.genus,
            "chi": surface.chi,
        }
        if surface.failure_witness is not None:
            witnesses["surface"] = {
                "reason": surface.failure_witness.reason,
                "cell": list(surface.failure_witness.cell)
                if surface.failure_witness.cell is not None
                else None,
            }
    if npc is not None and not npc.is_flag:
        witnesses["npc"] = {
            "base": npc.base,
            "clique": [list(v) for v in npc.clique] if npc.clique else None,
            "reason": npc.reason,
        }
    return {
        "f_vector": list(c.f_vector()),
        "chi": c.euler_characteristic(),
        "components": connected_components(c).count,
        "betti": {"field": betti.field, "values": list(betti.values)},
        "surface": surface_dict,
        "npc_flag": npc.is_flag if npc is not None else None,
        "witnesses": witnesses,
    }
