"""Collision-free motion planning on the 1-skeleton of the configuration
complex.

States are configurations (distinct occupied vertices, one per robot); a
legal move slides one robot along an edge whose far endpoint is free.
Plans are found by breadth-first search with canonical tie-breaking, so a
given query always yields the same plan.  A post-pass compresses
consecutive moves into parallel steps whenever the moved edges are
pairwise disjoint and avoid all stationary robots, i.e. whenever the step
is a cube cell.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .complexes import (
    DEFAULT_CELL_BUDGET,
    LABELED,
    VERTEX,
    BudgetError,
    CellFactor,
    Configuration,
    SelfLoopError,
    build,
    connected_components,
)
from .graphs import Graph, serialize_graph


class Move(NamedTuple):
    robot: int
    source: int  # vertex id
    target: int  # vertex id
    via: int  # edge id; its endpoints are exactly {source, target}


@dataclass(frozen=True)
class Plan:
    graph: Graph
    start: Configuration
    goal: Configuration
    steps: tuple[tuple[Move, ...], ...]

    @property
    def n(self) -> int:
        return len(self.start)

    @property
    def total_moves(self) -> int:
        return sum(len(step) for step in self.steps)

    @property
    def makespan(self) -> int:
        return len(self.steps)


class PlanCheck(NamedTuple):
    ok: bool
    step: int | None = None  # first violating step index
    reason: str | None = None


class UnreachableGoalError(RuntimeError):
    """Start and goal lie in different components of the configuration space."""

    def __init__(self, start_component: int, goal_component: int):
        super().__init__(
            f"goal unreachable: start in component {start_component}, "
            f"goal in component {goal_component}"
        )
        self.start_component = start_component
        self.goal_component = goal_component


def _check_configuration(g: Graph, n: int, cfg: Configuration, what: str) -> None:
    if len(cfg) != n:
        raise ValueError(f"{what} has {len(cfg)} entries, expected {n}")
    for v in cfg:
        if not 0 <= v < len(g.vertices):
            raise ValueError(f"{what} references unknown vertex id {v}")
    if len(set(cfg)) != n:
        raise ValueError(f"{what} repeats a vertex; robots must occupy distinct vertices")


def _legal_moves(g: Graph, cfg: Configuration) -> list[tuple[Move, Configuration]]:
    """Single-robot moves in canonical order: robots ascending, edges ascending.

    The first enumeration of a neighbor wins, so among parallel edges the
    lowest edge id is the one a breadth-first search records.
    """
    occupied = set(cfg)
    out = []
    for robot, pos in enumerate(cfg):
        for eid in g.incident_edges(pos):
            other = g.edges[eid].other(pos)
            if other in occupied:
                continue
            nxt = cfg[:robot] + (other,) + cfg[robot + 1:]
            out.append((Move(robot, pos, other, eid), nxt))
    return out


def plan(
    g: Graph,
    n: int,
    start: Configuration,
    goal: Configuration,
    budget: int = DEFAULT_CELL_BUDGET,
) -> Plan:
    """Shortest move sequence from start to goal, as singleton steps.

    Breadth-first search over configurations generated on the fly; the
    number of visited configurations is capped by `budget`.  Raises
    UnreachableGoalError (with both component ids) when no path exists.
    """
    for e in g.edges:
        if e.is_loop:
            raise SelfLoopError(
                f"edge {e.name!r} is a self-loop; subdivide the graph before planning"
            )
    start = tuple(start)
    goal = tuple(goal)
    _check_configuration(g, n, start, "start configuration")
    _check_configuration(g, n, goal, "goal configuration")
    if start == goal:
        return Plan(graph=g, start=start, goal=goal, steps=())

    parent: dict[Configuration, tuple[Configuration, Move]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        cfg = queue.popleft()
        for move, nxt in _legal_moves(g, cfg):
            if nxt in seen:
                continue
            seen.add(nxt)
            if len(seen) > budget:
                raise BudgetError(f"search budget of {budget} configurations exceeded")
            parent[nxt] = (cfg, move)
            if nxt == goal:
                moves: list[Move] = []
                cur = goal
                while cur != start:
                    cur, mv = parent[cur]
                    moves.append(mv)
                moves.reverse()
                return Plan(
                    graph=g,
                    start=start,
                    goal=goal,
                    steps=tuple((mv,) for mv in moves),
                )
            queue.append(nxt)

    c = build(g, n, LABELED, budget)
    comps = connected_components(c)
    raise UnreachableGoalError(
        comps.labels[_config_index(c, start)], comps.labels[_config_index(c, goal)]
    )


def _config_index(c, cfg: Configuration) -> int:
    factors = tuple(CellFactor(VERTEX, v) for v in cfg)
    return c.index_of(factors)[1]


def _closure(g: Graph, eid: int) -> set[int]:
    return set(g.edges[eid].endpoints)


def compress(p: Plan) -> Plan:
    """Merge consecutive moves into parallel steps where they commute.

    Greedy left-to-right: a move joins the current step iff its robot has
    not yet moved in the step, its edge closure is disjoint from every
    other active edge closure, and it avoids every other robot's current
    vertex.  Each resulting step is a cube cell of the configuration
    complex; the move multiset and final configuration are unchanged.
    """
    g = p.graph
    check = validate(p)
    if not check.ok:
        raise ValueError(f"cannot compress an invalid plan: {check.reason}")
    current = list(p.start)
    steps: list[list[Move]] = []
    open_step: list[Move] = []
    step_closures: list[set[int]] = []
    for mv in (m for step in p.steps for m in step):
        joins = open_step and mv.robot not in {m.robot for m in open_step}
        if joins:
            closure = _closure(g, mv.via)
            if any(closure & other for other in step_closures):
                joins = False
            else:
                stationary = {
                    v
                    for robot, v in enumerate(current)
                    if robot != mv.robot and robot not in {m.robot for m in open_step}
                }
                if closure & stationary:
                    joins = False
        if joins:
            open_step.append(mv)
            step_closures.append(_closure(g, mv.via))
        else:
            if open_step:
                for m in open_step:
                    current[m.robot] = m.target
                steps.append(open_step)
            open_step = [mv]
            step_closures = [_closure(g, mv.via)]
    if open_step:
        steps.append(open_step)
    return Plan(
        graph=g,
        start=p.start,
        goal=p.goal,
        steps=tuple(tuple(step) for step in steps),
    )


def validate(p: Plan) -> PlanCheck:
    """Replay a plan, reporting the first violation if any.

    Every intermediate configuration must be a valid set of distinct
    vertices and every parallel step a cube cell: moved edges pairwise
    disjoint and disjoint from all stationary robots.
    """
    g = p.graph
    n = len(p.start)
    try:
        _check_configuration(g, n, p.start, "start configuration")
        _check_configuration(g, n, p.goal, "goal configuration")
    except ValueError as exc:
        return PlanCheck(False, None, str(exc))
    current = list(p.start)
    for idx, step in enumerate(p.steps):
        if not step:
            return PlanCheck(False, idx, "empty parallel step")
        movers = [m.robot for m in step]
        if len(set(movers)) != len(movers):
            return PlanCheck(False, idx, "a robot moves twice within one step")
        closures: list[set[int]] = []
        for m in step:
            if not 0 <= m.robot < n:
                return PlanCheck(False, idx, f"unknown robot index {m.robot}")
            if not 0 <= m.via < len(g.edges):
                return PlanCheck(False, idx, f"unknown edge id {m.via}")
            edge = g.edges[m.via]
            if set(edge.endpoints) != {m.source, m.target}:
                return PlanCheck(
                    False, idx,
                    f"edge {edge.name!r} does not join the move's source and target",
                )
            if current[m.robot] != m.source:
                return PlanCheck(
                    False, idx,
                    f"robot {m.robot} is at {g.vertices[current[m.robot]].name!r}, "
                    f"not at the move's source",
                )
            closures.append(set(edge.endpoints))
        for a in range(len(step)):
            for b in range(a + 1, len(step)):
                if closures[a] & closures[b]:
                    return PlanCheck(
                        False, idx, "moved edges share a vertex (closures intersect)"
                    )
        stationary = {v for robot, v in enumerate(current) if robot not in set(movers)}
        for a, m in enumerate(step):
            if closures[a] & stationary:
                return PlanCheck(
                    False, idx,
                    f"robot {m.robot}'s edge touches a stationary robot's vertex",
                )
        for m in step:
            current[m.robot] = m.target
        if len(set(current)) != n:
            return PlanCheck(False, idx, "two robots share a vertex after the step")
    if tuple(current) != tuple(p.goal):
        return PlanCheck(False, None, "plan does not end at the goal configuration")
    return PlanCheck(True)


def plan_to_json(p: Plan) -> dict:
    """JSON payload: vertex and edge names, per-step move lists, totals."""
    g = p.graph
    if g.label is not None:
        graph_ref = g.label
    else:
        graph_ref = hashlib.sha256(serialize_graph(g).encode()).hexdigest()[:12]
    name = lambda v: g.vertices[v].name
    return {
        "graph": graph_ref,
        "n": p.n,
        "start": [name(v) for v in p.start],
        "goal": [name(v) for v in p.goal],
        "steps": [
            [
                {
                    "robot": m.robot,
                    "from": name(m.source),
                    "to": name(m.target),
                    "via": g.edges[m.via].name,
                }
                for m in step
            ]
            for step in p.steps
        ],
        "total_moves": p.total_moves,
        "makespan": p.makespan,
    }
