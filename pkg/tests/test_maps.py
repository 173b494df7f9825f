import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from trisym import (
    KIND_MULTISET,
    KIND_SYMBOL,
    MapError,
    SymbolTable,
    collapse_to_discriminating,
    farris_project,
    induced_subtree,
    load_three_way_map,
    load_two_way_map,
    parse_newick,
    restrict,
    save_three_way_map,
    save_two_way_map,
    set_valued_view,
    three_way_from_rooted,
    three_way_from_two_way,
    three_way_from_unrooted,
    two_way_from_tree,
)
from trisym.trees import ROOTED, UNROOTED

from conftest import multiset_map, pivot_leaf_map
from test_trees import random_labelled_tree, seeds


def test_two_way_from_tree_examples(five_leaf_rooted, abc_table):
    d = two_way_from_tree(five_leaf_rooted)
    assert d.value("1", "2").name == "B"
    assert d.value("1", "5").name == "A"
    star = parse_newick("rooted", "(1,2,3)A;")
    ds = two_way_from_tree(star)
    assert {v.name for _, v in ds.pairs()} == {"A"}
    cherry4 = parse_newick("rooted", "((1,2)B,3,4)A;", abc_table)
    dc = two_way_from_tree(cherry4)
    assert dc.value("3", "4").name == "A"
    assert dc.value("1", "2").name == "B"


def test_three_way_from_unrooted_examples(five_leaf_unrooted):
    d = three_way_from_unrooted(five_leaf_unrooted)
    assert d.value("1", "3", "5").name == "A"
    assert d.value("1", "2", "3").name == "B"
    star = parse_newick("unrooted", "(1,2,3,4)A;")
    dstar = three_way_from_unrooted(star)
    assert {v.name for _, v in dstar.triples()} == {"A"}


def test_three_way_from_rooted_examples(five_leaf_rooted, quartet_trees):
    d = three_way_from_rooted(five_leaf_rooted)
    assert d.value("1", "2", "5").text() == "2A+B"
    d1 = three_way_from_rooted(quartet_trees[1])
    assert d1.value("1", "2", "3").text() == "3A"
    d7 = three_way_from_rooted(quartet_trees[7])
    assert d7.value("1", "2", "3").text() == "2B+C"
    assert d7.value("1", "2", "4").text() == "2A+C"


def test_values_from_trees_have_small_support(ab_table):
    for seed in range(30):
        lt = random_labelled_tree(seed, 5, ROOTED)
        d = three_way_from_rooted(lt)
        assert all(len(v.support) <= 2 for _, v in d.triples())


def test_restrict_examples(locally_consistent_map):
    d = restrict(locally_consistent_map, ["1", "2", "3", "4"])
    assert d.value("1", "2", "3").text() == "2A+B"
    assert d.value("1", "2", "4").text() == "2A+B"
    assert d.value("1", "3", "4").text() == "3A"
    assert d.value("2", "3", "4").text() == "3A"
    assert restrict(locally_consistent_map, locally_consistent_map.ground) == locally_consistent_map
    single = restrict(locally_consistent_map, ["1", "2", "5"])
    assert len(single.values) == 1
    with pytest.raises(MapError):
        restrict(locally_consistent_map, ["1", "2", "9"])


@settings(max_examples=25, deadline=None)
@given(seeds, seeds)
def test_restrict_commutes_with_tree_restriction(seed, pick):
    lt = random_labelled_tree(seed, 6, ROOTED, discriminating=True)
    rng = random.Random(pick)
    sub = rng.sample(lt.leaf_order, rng.choice([4, 5]))
    via_tree = three_way_from_rooted(
        collapse_to_discriminating(induced_subtree(lt, sub)))
    via_map = restrict(three_way_from_rooted(lt), sub)
    assert via_tree == via_map


def test_farris_project_examples(five_leaf_unrooted, ab_table):
    d = three_way_from_unrooted(five_leaf_unrooted)
    sliced = farris_project(d, "5")
    assert sliced.value("1", "3").name == "A"
    assert set(sliced.ground) == {"1", "2", "3", "4"}

    pivot = pivot_leaf_map(5, ab_table)
    through_one = farris_project(pivot, "1")
    assert {v.name for _, v in through_one.pairs()} == {"A"}
    with pytest.raises(MapError):
        farris_project(pivot, "9")


def test_assembled_map_matches_tree_route(five_leaf_rooted):
    assert three_way_from_two_way(two_way_from_tree(five_leaf_rooted)) == \
        three_way_from_rooted(five_leaf_rooted)


def test_map_equality_is_order_insensitive(ab_table):
    rows = {"123": "3A", "124": "2A+B", "134": "2A+B", "234": "2A+B"}
    d1 = multiset_map(tuple("1234"), rows, ab_table)
    d2 = multiset_map(("4", "2", "3", "1"), rows, ab_table)
    assert d1 == d2


def test_set_valued_view(five_leaf_rooted):
    view = set_valued_view(three_way_from_rooted(five_leaf_rooted))
    names = {frozenset(t): {s.name for s in v}
             for t, v in view.items()}
    assert names[frozenset(("1", "2", "5"))] == {"A", "B"}
    assert names[frozenset(("3", "4", "5"))] == {"A", "B"}


# -- text form -----------------------------------------------------------------

def test_three_way_tsv_roundtrip(locally_consistent_map):
    text = save_three_way_map(locally_consistent_map)
    assert text.splitlines()[0] == "x y z value"
    again = load_three_way_map(text, KIND_MULTISET)
    assert again == locally_consistent_map
    assert again.ground == locally_consistent_map.ground


def test_plain_tsv_roundtrip(five_leaf_unrooted):
    d = three_way_from_unrooted(five_leaf_unrooted)
    again = load_three_way_map(save_three_way_map(d), KIND_SYMBOL)
    assert again == d


def test_two_way_tsv_roundtrip(five_leaf_rooted):
    d = two_way_from_tree(five_leaf_rooted)
    again = load_two_way_map(save_two_way_map(d))
    assert again == d


def test_load_validates_completeness():
    text = "x y z value\n1 2 3 3A\n1 2 4 3A\n"
    with pytest.raises(MapError):
        load_three_way_map(text, KIND_MULTISET)


def test_load_rejects_duplicates():
    text = "x y z value\n1 2 3 3A\n3 2 1 3A\n1 2 4 3A\n1 3 4 3A\n2 3 4 3A\n"
    with pytest.raises(MapError):
        load_three_way_map(text, KIND_MULTISET)


def test_load_rejects_missing_header():
    with pytest.raises(MapError):
        load_three_way_map("1 2 3 3A\n", KIND_MULTISET)


def test_ground_order_is_first_appearance():
    text = "x y z value\n5 2 3 3A\n5 2 4 3A\n5 3 4 3A\n2 3 4 3A\n"
    d = load_three_way_map(text, KIND_MULTISET)
    assert d.ground == ("5", "2", "3", "4")
