"""Blossom contraction, even alternating paths, lifting, overtake cases."""

import pytest

from streammatch.invariants import check_forest
from streammatch.matching import Matching, RemovedSet, init_labels
from streammatch.structures import (Forest, even_path_vertices, is_ancestor,
                                    lift_contracted_path)

L_MAX = 6  # eps = 1/2


def make_forest(n, matched_pairs):
    matching = Matching(n)
    for u, v in matched_pairs:
        matching.add(u, v)
    labels = init_labels(matching, L_MAX)
    forest = Forest(n, matching.mate, labels, RemovedSet(n))
    return forest, matching


def assert_alternating(path, mate, start_matched):
    for i in range(len(path) - 1):
        matched = mate[path[i]] == path[i + 1]
        assert matched == (start_matched if i % 2 == 0 else not start_matched), \
            f"alternation breaks at step {i} of {path}"


def assert_clean(forest, limit=100, delta=10_000):
    violations = check_forest(forest, limit, L_MAX, delta)
    assert not violations, violations


def test_resolve_before_contraction_is_trivial():
    forest, _ = make_forest(3, [(1, 2)])
    assert forest.resolve(0).vertex == 0
    assert forest.classify(0) == "unvisited"


def build_triangle_blossom():
    # Free vertex 0, matched edge (1, 2), edges 0-1, 1-2, 2-0.
    forest, matching = make_forest(3, [(1, 2)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    blossom = forest.contract(2, 0)
    return forest, matching, blossom


def test_contract_triangle():
    forest, matching, blossom = build_triangle_blossom()
    assert sorted(blossom.vertices) == [0, 1, 2]
    assert blossom.base == 0
    structure = forest.structures[0]
    assert structure.working is blossom
    assert structure.root is blossom
    for v in range(3):
        assert forest.resolve(v) is blossom
    assert forest.labels.get((1, 2)) == 0
    assert forest.labels.get((2, 1)) == 0
    assert_clean(forest)


def test_contract_marks_modified_and_keeps_outer():
    forest, _, blossom = build_triangle_blossom()
    assert forest.structures[0].modified
    assert blossom.outer


def test_contract_cycle5():
    # Free vertex 0 absorbs the whole 5-cycle, then closes it.
    forest, matching = make_forest(5, [(1, 2), (3, 4)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    forest.overtake(2, 3, 2)
    blossom = forest.contract(4, 0)
    assert sorted(blossom.vertices) == [0, 1, 2, 3, 4]
    assert blossom.base == 0
    for v in range(1, 5):
        assert forest.labels.by_tail[v] == 0
    assert_clean(forest)


def test_even_path_trivial_blossom():
    forest, _ = make_forest(1, [])
    node = forest.resolve(0)
    assert even_path_vertices(node, 0) == [0]
    with pytest.raises(ValueError):
        even_path_vertices(node, 1)


def test_even_path_triangle():
    forest, matching, blossom = build_triangle_blossom()
    # Spec'd shape: base 0 to 2 walks the unmatched {0,1} then matched {1,2}.
    assert even_path_vertices(blossom, 2) == [0, 1, 2]
    assert even_path_vertices(blossom, 1) == [0, 2, 1]
    assert even_path_vertices(blossom, 0) == [0]
    for x in (1, 2):
        path = even_path_vertices(blossom, x)
        assert len(path) % 2 == 1  # even edge count
        assert_alternating(path, matching.mate, start_matched=False)


def test_even_path_cycle5_all_targets():
    forest, matching = make_forest(5, [(1, 2), (3, 4)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    forest.overtake(2, 3, 2)
    blossom = forest.contract(4, 0)
    for x in range(5):
        path = even_path_vertices(blossom, x)
        assert path[0] == 0 and path[-1] == x
        assert len(path) % 2 == 1
        assert len(set(path)) == len(path)
        assert_alternating(path, matching.mate, start_matched=False)
        edge_set = {frozenset(e) for e in
                    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]}
        for i in range(len(path) - 1):
            assert frozenset((path[i], path[i + 1])) in edge_set


def build_nested_blossom():
    # Inner triangle {2,3,4} contracted first, then the 7-vertex cycle
    # through it; exercises recursion in the even-path expansion.
    forest, matching = make_forest(7, [(1, 2), (3, 4), (5, 6)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    forest.overtake(2, 3, 2)
    inner = forest.contract(4, 2)
    forest.overtake(4, 5, 1)
    outer = forest.contract(6, 0)
    return forest, matching, inner, outer


def test_nested_contraction_resolves_to_outermost():
    forest, _, inner, outer = build_nested_blossom()
    assert sorted(inner.vertices) == [2, 3, 4]
    assert sorted(outer.vertices) == list(range(7))
    for v in range(7):
        assert forest.resolve(v) is outer
    assert inner in outer.subs
    assert_clean(forest)


def test_even_path_nested_all_targets():
    forest, matching, _, outer = build_nested_blossom()
    for x in range(7):
        path = even_path_vertices(outer, x)
        assert path[0] == 0 and path[-1] == x
        assert len(path) % 2 == 1
        assert len(set(path)) == len(path)
        assert_alternating(path, matching.mate, start_matched=False)


def test_lift_trivial_nodes_is_identity():
    forest, _ = make_forest(4, [(1, 2)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    forest.init_structure(3)
    nodes = [forest.resolve(0), forest.resolve(1), forest.resolve(2),
             forest.resolve(3)]
    arcs = [(0, 1), (1, 2), (2, 3)]
    assert lift_contracted_path(nodes, arcs, forest.mate) == [0, 1, 2, 3]


def test_lift_through_contracted_triangle_six_vertices():
    # 0 - 1 = 2 - 3 = 4 - 5 with the blossom {2,3,4}; the lifted path has
    # five edges, two more than the contracted one.
    forest, matching = make_forest(6, [(1, 2), (3, 4)])
    forest.init_structure(0)
    forest.init_structure(5)
    forest.overtake(0, 1, 1)
    forest.overtake(2, 3, 2)
    blossom = forest.contract(4, 2)
    path = forest.record_augmentation(4, 5)
    assert path == [0, 1, 2, 3, 4, 5]
    assert len(path) - 1 == 5
    assert sorted(blossom.vertices) == [2, 3, 4]


def test_record_augmentation_removes_both_structures():
    forest, matching = make_forest(4, [(1, 2)])
    forest.init_structure(0)
    forest.init_structure(3)
    forest.overtake(0, 1, 1)
    path = forest.record_augmentation(2, 3)
    assert path == [0, 1, 2, 3]
    assert forest.structures == {}
    assert all(v in forest.removed for v in range(4))
    assert forest.paths == [[0, 1, 2, 3]]


def test_overtake_case1_adds_pair():
    forest, _ = make_forest(4, [(1, 2)])
    forest.init_structure(0)
    case = forest.overtake(0, 1, 1)
    assert case == "1"
    structure = forest.structures[0]
    assert structure.verts == {0, 1, 2}
    assert structure.working is forest.resolve(2)
    assert forest.labels.get((1, 2)) == 1
    assert forest.classify(1) == "inner"
    assert forest.classify(2) == "outer"
    assert_clean(forest)


def test_overtake_case21_reparents_within_structure():
    # One structure, two branches; the working tip of the short branch
    # steals the deep branch's tail pair at a smaller label.
    forest, matching = make_forest(9, [(1, 2), (3, 4), (5, 6), (7, 8)])
    forest.init_structure(0)
    forest.overtake(0, 3, 1)
    forest.overtake(4, 5, 2)
    forest.overtake(6, 7, 3)
    structure = forest.structures[0]
    forest.backtrack(structure)   # {8} -> {6}
    forest.backtrack(structure)   # {6} -> {4}
    forest.backtrack(structure)   # {4} -> {0}
    forest.overtake(0, 1, 1)
    assert structure.working is forest.resolve(2)
    node7 = forest.resolve(7)
    old_parent = node7.parent
    case = forest.overtake(2, 7, 2)
    assert case == "2.1"
    assert node7.parent is forest.resolve(2)
    assert node7.parent_arc == (2, 7)
    assert node7 not in old_parent.kids
    assert forest.labels.get((7, 8)) == 2
    assert structure.working is forest.resolve(8)
    assert_clean(forest)


def build_two_structures_for_steal():
    # S_7 grows a depth-2 branch; S_0 then reaches its inner vertex 4
    # by a shorter alternating path.
    forest, matching = make_forest(8, [(6, 5), (4, 3)])
    forest.init_structure(7)
    forest.init_structure(0)
    forest.overtake(7, 6, 1)
    forest.overtake(5, 4, 2)
    return forest, matching


def test_overtake_case22_moves_subtree_with_working_handoff():
    forest, _ = build_two_structures_for_steal()
    s0, s7 = forest.structures[0], forest.structures[7]
    assert s7.verts == {3, 4, 5, 6, 7}
    assert s7.working is forest.resolve(3)
    case = forest.overtake(0, 4, 1)
    assert case == "2.2"
    # S_7 loses exactly the subtree of the inner node {4}.
    assert s7.verts == {5, 6, 7}
    assert s0.verts == {0, 3, 4}
    assert s0.working is forest.resolve(3)      # stolen working node
    assert s7.working is forest.resolve(5)      # retreats to the cut parent
    assert forest.resolve(4).parent is forest.resolve(0)
    assert forest.resolve(4).parent_arc == (0, 4)
    assert forest.labels.get((4, 3)) == 1
    assert s0.modified and s7.modified
    assert_clean(forest)


def test_overtake_case22_without_handoff():
    # When the victim's working node is outside the stolen subtree the
    # thief's working node becomes the stolen arc's head-side node and
    # the victim keeps its own.
    forest, _ = build_two_structures_for_steal()
    s7 = forest.structures[7]
    forest.backtrack(s7)  # {3} -> {5}
    assert s7.working is forest.resolve(5)
    case = forest.overtake(0, 4, 1)
    assert case == "2.2"
    s0 = forest.structures[0]
    assert s0.working is forest.resolve(3)
    assert s7.working is forest.resolve(5)
    assert s7.verts == {5, 6, 7}
    assert_clean(forest)


def test_overtake_requires_label_improvement():
    forest, _ = make_forest(4, [(1, 2)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    forest2, _ = make_forest(4, [(1, 2)])
    forest2.init_structure(0)
    with pytest.raises(AssertionError):
        forest2.overtake(0, 1, 7)  # not below the fresh label


def test_is_ancestor_along_branch():
    forest, _ = make_forest(5, [(1, 2), (3, 4)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    forest.overtake(2, 3, 2)
    root = forest.resolve(0)
    tip = forest.resolve(4)
    assert is_ancestor(root, tip)
    assert not is_ancestor(tip, root)


def test_backtrack_steps_and_deactivates():
    forest, _ = make_forest(3, [(1, 2)])
    forest.init_structure(0)
    forest.overtake(0, 1, 1)
    structure = forest.structures[0]
    forest.backtrack(structure)
    assert structure.working is structure.root
    forest.backtrack(structure)
    assert structure.working is None
    assert not structure.active


def test_structure_size_accounting():
    forest, _ = make_forest(5, [(1, 2), (3, 4)])
    structure = forest.init_structure(0)
    assert structure.size() == 1
    forest.overtake(0, 1, 1)
    assert structure.size() == 3
    forest.overtake(2, 3, 2)
    assert structure.size() == 5


def test_structure_arc_count_includes_blossom_cycles():
    forest, _, inner, outer = build_nested_blossom()
    structure = forest.structures[0]
    # Single-node tree (everything contracted): 0 tree arcs, two cycles.
    assert forest.structure_arc_count(structure) == len(outer.cycle) + len(inner.cycle)
