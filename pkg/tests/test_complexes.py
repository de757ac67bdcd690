import json
import math
from collections import Counter

import pytest

from graphconfig.complexes import (
    EDGE,
    HEAD,
    TAIL,
    VERTEX,
    BudgetError,
    CellFactor,
    SelfLoopError,
    boundary_matrix,
    build,
    complex_to_json,
    connected_components,
    one_skeleton,
    verify_dd_zero,
)
from graphconfig.graphs import builtin, parse_graph
from oracles import cells_as_tuples, oracle_cells, oracle_components, zoo


# ---------------------------------------------------------------------------
# cell enumeration against the brute-force oracle


@pytest.mark.parametrize("g", zoo(), ids=lambda g: g.label)
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mode", ["labeled", "unlabeled"])
def test_build_matches_product_filter_oracle(g, n, mode):
    c = build(g, n, mode)
    expected = oracle_cells(g, n, mode)
    got = cells_as_tuples(c)
    assert {d: len(s) for d, s in got.items()} == {d: len(s) for d, s in expected.items()}
    assert got == expected


def test_two_robot_f_vectors_on_named_graphs():
    assert build(builtin("Y"), 2).f_vector() == (12, 12, 0)
    assert build(builtin("K5"), 2).f_vector() == (20, 60, 30)
    assert build(builtin("K33"), 2).f_vector() == (30, 72, 36)


def test_higher_robot_f_vectors():
    assert build(builtin("K5"), 3).f_vector() == (60, 180, 90, 0)
    assert build(builtin("K33"), 4).f_vector() == (360, 864, 432, 0, 0)
    assert build(builtin("Q"), 2).f_vector() == (6, 6, 0)
    assert build(builtin("X"), 2).f_vector() == (20, 24, 0)


def test_path1_two_robots_is_two_isolated_points():
    c = build(builtin("path", 1), 2)
    assert c.f_vector() == (2, 0, 0)
    assert connected_components(c).count == 2


def test_empty_complex_when_more_robots_than_vertices():
    c = build(builtin("K5"), 6)
    assert c.is_empty()
    assert c.euler_characteristic() == 0
    assert connected_components(c).count == 0


def test_euler_characteristics_from_counting():
    assert build(builtin("K5"), 2).euler_characteristic() == -10
    assert build(builtin("K33"), 2).euler_characteristic() == -6
    assert build(builtin("K5"), 3).euler_characteristic() == -30
    assert build(builtin("K33"), 4).euler_characteristic() == -72


# ---------------------------------------------------------------------------
# structural invariants


@pytest.mark.parametrize("g", zoo(), ids=lambda g: g.label)
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("mode", ["labeled", "unlabeled"])
def test_every_d_cell_has_2d_faces(g, n, mode):
    c = build(g, n, mode)
    for d in range(1, n + 1):
        for recs in c.faces[d]:
            assert len(recs) == 2 * d


@pytest.mark.parametrize("g", zoo(), ids=lambda g: g.label)
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("mode", ["labeled", "unlabeled"])
def test_boundary_squares_to_zero(g, n, mode):
    assert verify_dd_zero(build(g, n, mode))


@pytest.mark.parametrize("g", zoo(), ids=lambda g: g.label)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_labeled_counts_are_factorial_multiples_of_unlabeled(g, n):
    fl = build(g, n, "labeled").f_vector()
    fu = build(g, n, "unlabeled").f_vector()
    assert fl == tuple(math.factorial(n) * x for x in fu)


def test_cells_are_in_canonical_lexicographic_order():
    c = build(builtin("K5"), 2)
    for dim_cells in c.cells:
        keys = [cell.factors for cell in dim_cells]
        assert keys == sorted(keys)
    cu = build(builtin("K5"), 2, "unlabeled")
    for dim_cells in cu.cells:
        for cell in dim_cells:
            assert tuple(sorted(cell.factors)) == cell.factors


def test_face_targets_are_subfactor_replacements():
    c = build(builtin("K33"), 2)
    for d in range(1, 3):
        for i, cell in enumerate(c.cells[d]):
            for rec in c.faces[d][i]:
                child = c.cells[d - 1][rec.target].factors
                replaced = cell.factors[rec.position]
                assert replaced.kind == EDGE
                e = c.graph.edges[replaced.ref]
                expected_vertex = e.tail if rec.endpoint == TAIL else e.head
                assert child[rec.position] == CellFactor(VERTEX, expected_vertex)


@pytest.mark.parametrize("g", zoo(), ids=lambda g: g.label)
def test_one_robot_complex_is_the_graph(g):
    c = build(g, 1)
    assert c.f_vector() == (len(g.vertices), len(g.edges))
    sk = one_skeleton(c)
    assert len(sk.edges) == len(g.edges)
    for me in sk.edges:
        e = g.edges[me.edge]
        ends = {sk.nodes[me.ends[0]][0], sk.nodes[me.ends[1]][0]}
        assert ends == set(e.endpoints)


def test_one_skeleton_of_d2_y_is_a_single_12_cycle():
    c = build(builtin("Y"), 2)
    sk = one_skeleton(c)
    assert len(sk.nodes) == 12 and len(sk.edges) == 12
    degree = Counter()
    for me in sk.edges:
        degree[me.ends[0]] += 1
        degree[me.ends[1]] += 1
    assert set(degree.values()) == {2}
    assert connected_components(c).count == 1


def test_d2_q_splits_into_two_components_of_three():
    c = build(builtin("Q"), 2)
    comp = connected_components(c)
    assert comp.count == 2
    sizes = Counter(comp.labels)
    assert sorted(sizes.values()) == [3, 3]
    sk = one_skeleton(c)
    edges_per_component = Counter(comp.labels[me.ends[0]] for me in sk.edges)
    assert sorted(edges_per_component.values()) == [3, 3]
    # moves along either parallel edge are distinct 1-cells with equal ends
    ends = Counter(tuple(sorted(me.ends)) for me in sk.edges)
    assert max(ends.values()) == 2


def test_components_match_oracle():
    for g, n in [(builtin("Q"), 2), (builtin("K5"), 2), (builtin("path", 3), 2)]:
        got = connected_components(build(g, n)).count
        assert got == len(oracle_components(g, n))


def test_component_labels_are_canonical():
    c = build(builtin("Q"), 2)
    labels = connected_components(c).labels
    assert labels[0] == 0  # first 0-cell starts component 0
    seen = []
    for lab in labels:
        if lab not in seen:
            seen.append(lab)
    assert seen == sorted(seen)


# ---------------------------------------------------------------------------
# errors and guards


def test_self_loop_rejected_with_pointer_to_subdivision():
    with pytest.raises(SelfLoopError, match="subdivide"):
        build(builtin("cycle", 1), 2)


def test_budget_guard():
    with pytest.raises(BudgetError):
        build(builtin("K5"), 3, budget=100)


def test_invalid_robot_count_and_mode():
    with pytest.raises(ValueError):
        build(builtin("Y"), 0)
    with pytest.raises(ValueError):
        build(builtin("Y"), 2, mode="weird")


def test_boundary_matrix_dimension_range():
    c = build(builtin("Y"), 2)
    with pytest.raises(ValueError):
        boundary_matrix(c, 0)
    with pytest.raises(ValueError):
        boundary_matrix(c, 3)


def test_boundary_matrix_shape_and_entries():
    c = build(builtin("K5"), 2)
    b1 = boundary_matrix(c, 1)
    b2 = boundary_matrix(c, 2)
    assert b1.shape == (20, 60)
    assert b2.shape == (60, 30)
    assert set(b1.data.tolist()) == {1, -1}
    assert (abs(b1).sum(axis=0) == 2).all()  # each 1-cell has two endpoints
    assert (abs(b2).sum(axis=0) == 4).all()  # each 2-cell has four sides


# ---------------------------------------------------------------------------
# JSON dump


def test_complex_dump_schema_and_determinism():
    c = build(builtin("Q"), 2)
    dump = complex_to_json(c)
    assert dump["mode"] == "labeled"
    assert dump["n"] == 2
    assert dump["f_vector"] == [6, 6, 0]
    assert len(dump["cells"]) == 3
    assert dump["cells"][0][0] == [["v", "a"], ["v", "b"]]
    # every 1-cell has two faces with signs +-1 referring to 0-cell ids
    for gid, face_list in dump["faces"].items():
        assert int(gid) >= 6
        assert {f["sign"] for f in face_list} == {1, -1}
        for f in face_list:
            assert 0 <= f["face"] < 6
    assert json.dumps(dump, sort_keys=True) == json.dumps(
        complex_to_json(build(builtin("Q"), 2)), sort_keys=True
    )


def test_unlabeled_dump_of_k5():
    c = build(builtin("K5"), 2, "unlabeled")
    dump = complex_to_json(c)
    assert dump["f_vector"] == [10, 30, 15]


def test_parsed_graph_builds_same_complex_as_builtin():
    from graphconfig.graphs import serialize_graph

    g = builtin("K33")
    reparsed = parse_graph(serialize_graph(g))
    assert complex_to_json(build(g, 2)) == complex_to_json(build(reparsed, 2))
