"""Counting small labelled trees, and using the census as ground truth.

The enumeration is duplicate-free, so its counts double as independent
checks: rooted shape counts match the known sequence 1, 4, 26, 236, and
unrooted shapes on n leaves biject with rooted shapes on n-1.
"""

from trisym import EnumerationSpec, SymbolTable, census, enumerate_labelled_trees
from trisym.oracle import ROOTED_SHAPE_COUNTS
from trisym.trees import ROOTED, UNROOTED

table = SymbolTable(["A", "B"])

print("flavor   leaves  symbols  shapes  labelled(discriminating)")
for flavor in (ROOTED, UNROOTED):
    start = 2 if flavor == ROOTED else 3
    for n in range(start, 6):
        spec = EnumerationSpec(tuple(str(i + 1) for i in range(n)),
                               tuple(table), flavor, discriminating_only=True)
        counts = census(spec)
        print(f"{flavor:<8} {counts['leaves']:>6} {counts['symbols']:>8} "
              f"{counts['shapes']:>7} {counts['labelled']:>9}")

print()
print("known rooted shape counts:", dict(sorted(ROOTED_SHAPE_COUNTS.items())))

# With two symbols, each shape admits exactly two discriminating labellings
# (the interior vertices form a connected subtree, so a proper 2-coloring is
# fixed by one choice).
spec = EnumerationSpec(tuple("12345"), tuple(table), ROOTED, True)
assert sum(1 for _ in enumerate_labelled_trees(spec)) == 2 * ROOTED_SHAPE_COUNTS[5]
print("five-leaf discriminating rooted trees over two symbols:",
      2 * ROOTED_SHAPE_COUNTS[5])
