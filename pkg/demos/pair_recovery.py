"""Recovering pairwise values from triple values over five leaves.

Each triple value of an assembled map is the sum of its three pair values,
which makes a 10x10 integer linear system.  Its exact inverse recovers each
pair value as a rational combination of ten triple values; the combination
has non-negative integer coefficients exactly when a pairwise map exists,
and it is then a single symbol.
"""

from fractions import Fraction

from trisym import (
    FivePointSystem,
    PAIR_OF_TRIPLES,
    TRIPLE_OF_PAIRS,
    pair_combination,
    parse_newick,
    three_way_from_rooted,
    two_way_from_tree,
)

print("triple-from-pair matrix (rows = triples, columns = pairs):")
for row in TRIPLE_OF_PAIRS:
    print("  ", row)

identity = all(
    sum(Fraction(TRIPLE_OF_PAIRS[i][k]) * PAIR_OF_TRIPLES[k][j] for k in range(10))
    == (1 if i == j else 0)
    for i in range(10) for j in range(10)
)
print("exact inverse check:", identity)

# On a tree-built map, every recovered combination is the pair's lca label.
lt = parse_newick("rooted", "(((1,2)C,3)B,4,5)A;")
d3 = three_way_from_rooted(lt)
d2 = two_way_from_tree(lt)
print()
print("recovered pair values on", d3.ground, "from the tree-built map:")
system = FivePointSystem(d3, d3.ground)
for pair, symbol in zip(system.pair_order, system.pair_symbols()):
    assert symbol == d2.value(*pair)
    print("  ", " ".join(pair), "->", symbol.name)

# On a map that is not assembled from pairs, some combination goes invalid.
from trisym import SymbolTable, parse_multiset
from trisym.maps import KIND_MULTISET, ThreeWayMap

table = SymbolTable(["A", "B"])
rows = {
    "123": "2A+B", "124": "2A+B", "125": "3B", "134": "3A", "135": "2A+B",
    "145": "2A+B", "234": "3A", "235": "2A+B", "245": "2A+B", "345": "A+2B",
}
values = {frozenset(k): parse_multiset(v, table) for k, v in rows.items()}
tricky = ThreeWayMap.from_triples(KIND_MULTISET, tuple("12345"), values, table)
combo = pair_combination(tricky, tricky.ground, "1", "2")
print()
print("combination for pair (1,2) on the tricky map:", combo.text())
print("valid (all coefficients non-negative integers)?", combo.is_valid())
