"""Walk through the basic objects: labelled trees and the symbolic maps they
induce.

An unrooted tree assigns each leaf triple the label of its median vertex; a
rooted tree assigns each triple the multiset of its three pairwise
lca labels.
"""

from trisym import (
    parse_newick,
    three_way_from_rooted,
    three_way_from_unrooted,
    two_way_from_tree,
    tree_to_text,
)

# A five-leaf unrooted tree: two labelled cherries joined through a middle
# vertex carrying leaf 3.
unrooted = parse_newick("unrooted", "((1,2)B,3,(4,5)B)A;")
print(tree_to_text(unrooted))

d_unrooted = three_way_from_unrooted(unrooted)
print("median labels per triple:")
for triple, value in d_unrooted.triples():
    print("  ", " ".join(triple), "->", value.name)

# A five-leaf rooted tree: two cherries under B plus a free leaf.
rooted = parse_newick("rooted", "((1,2)B,(3,4)B,5)A;")
print()
print(tree_to_text(rooted))

d_pairs = two_way_from_tree(rooted)
print("lca labels per pair:")
for pair, value in d_pairs.pairs():
    print("  ", " ".join(pair), "->", value.name)

d_rooted = three_way_from_rooted(rooted)
print("lca-label multisets per triple:")
for triple, value in d_rooted.triples():
    print("  ", " ".join(triple), "->", value.text())

# The triple {1,2,5} collects lca(1,2)=B, lca(1,5)=A, lca(2,5)=A.
assert d_rooted.value("1", "2", "5").text() == "2A+B"
print()
print("value on 1,2,5:", d_rooted.value("1", "2", "5").text())
