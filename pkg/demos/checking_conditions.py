"""Condition checking: which symbolic maps come from labelled trees?

Maps built from trees pass their condition family; hand-made maps may fail,
and the checkers report every violation with its witness subset.
"""

from itertools import combinations

from trisym import (
    SymbolTable,
    check_three_way_ultrametric,
    check_tree_map,
    check_ultrametric,
    classify_quartet,
    farris_project,
    parse_multiset,
    parse_newick,
    three_way_from_rooted,
    three_way_from_unrooted,
)
from trisym.maps import KIND_MULTISET, KIND_SYMBOL, ThreeWayMap

# Maps from trees are always clean.
rooted = parse_newick("rooted", "((1,2)B,(3,4)B,5)A;")
print("violations on a tree-built map:",
      check_three_way_ultrametric(three_way_from_rooted(rooted)))

# A map whose every 4-subset is fine but which fails on five leaves.
table = SymbolTable(["A", "B"])
rows = {
    "123": "2A+B", "124": "2A+B", "125": "3B", "134": "3A", "135": "2A+B",
    "145": "2A+B", "234": "3A", "235": "2A+B", "245": "2A+B", "345": "A+2B",
}
values = {frozenset(k): parse_multiset(v, table) for k, v in rows.items()}
tricky = ThreeWayMap.from_triples(KIND_MULTISET, tuple("12345"), values, table)

print()
print("every four-leaf restriction matches a reference pattern:")
for four in combinations(tricky.ground, 4):
    print("  ", "".join(four), "-> pattern", classify_quartet(tricky, four).index)

print("but the five-point conditions fail:")
for violation in check_three_way_ultrametric(tricky)[:3]:
    print("  ", violation.text())

# A plain-symbol map that hides its violation from every projection: value A
# exactly when the triple contains leaf 1.
a, b = table.intern("A"), table.intern("B")
ground = tuple("12345")
pivot = ThreeWayMap.from_triples(
    KIND_SYMBOL, ground,
    {frozenset(t): (a if "1" in t else b) for t in combinations(ground, 3)},
    table)

print()
print("pivot map four-point violations:",
      [v.witness for v in check_tree_map(pivot) if v.kind == "M1"][:1])
for r in ground:
    clean = not check_ultrametric(farris_project(pivot, r))
    print(f"  projection through {r} is a two-way ultrametric: {clean}")
