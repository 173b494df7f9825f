"""The symbolic Farris transform between labelled unrooted trees on X and
labelled rooted trees on X - {r}, and its inverse.

Re-rooting at the neighbor of a leaf r turns median questions about triples
containing r into lca questions, which is what makes the two-way theory
applicable to three-way tree-maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .symbols import Symbol
from .trees import LabelledTree, PhyloTree, ROOTED, TreeBuilder, TreeError, UNROOTED


@dataclass(frozen=True)
class FarrisResult:
    """The rooted transform plus the interior-vertex correspondence."""

    rooted: LabelledTree
    removed_leaf: str
    vertex_map: dict[int, int]  # original interior vertex -> transformed vertex


def farris_transform(lt: LabelledTree, r: str) -> FarrisResult:
    """Direct all edges away from leaf r, remove r and its edge, and root the
    result at r's former neighbor.  Labels ride along the vertex bijection."""
    tree = lt.tree
    if tree.flavor != UNROOTED:
        raise TreeError("farris_transform needs an unrooted labelled tree")
    if len(tree.leaf_order) < 4:
        raise TreeError("farris_transform needs at least 4 leaves")
    rv = tree.vertex_of(r)
    (start,) = tree.adj[rv]

    # A former neighbor of degree two would be left with a single child; the
    # no-degree-two invariant makes this impossible for valid input, but a
    # malformed structure is spliced through rather than crashing downstream.
    start_parent = rv
    while not tree.is_leaf(start):
        below = [w for w in tree.adj[start] if w != start_parent]
        if len(below) != 1:
            break
        start_parent, start = start, below[0]
    if tree.is_leaf(start):
        raise TreeError("removing the leaf does not leave a rootable tree")

    builder = TreeBuilder()
    labels: dict[int, Symbol] = {}
    vmap: dict[int, int] = {}

    def copy(v: int, parent: int) -> int:
        if tree.is_leaf(v):
            return builder.add_vertex(tree.leaf_name[v])
        u = builder.add_vertex()
        labels[u] = lt.labels[v]
        vmap[v] = u
        for w in tree.adj[v]:
            if w != parent:
                builder.add_edge(u, copy(w, v))
        return u

    root = copy(start, start_parent)
    order = [n for n in tree.leaf_order if n != r]
    rooted = builder.tree(ROOTED, root=root, leaf_order=order)
    return FarrisResult(LabelledTree(rooted, labels, lt.symbols), r, vmap)


def farris_inverse(lt: LabelledTree, r: str) -> LabelledTree:
    """Attach a new leaf r to the root and forget edge directions.

    Undoes farris_transform up to labelled isomorphism.
    """
    tree = lt.tree
    if tree.flavor != ROOTED:
        raise TreeError("farris_inverse needs a rooted labelled tree")
    if r in tree.leaf_vertex:
        raise TreeError(f"leaf name {r!r} already occurs in the tree")

    builder = TreeBuilder()
    labels: dict[int, Symbol] = {}

    def copy(v: int) -> int:
        if tree.is_leaf(v):
            return builder.add_vertex(tree.leaf_name[v])
        u = builder.add_vertex()
        labels[u] = lt.labels[v]
        for w in tree.children[v]:
            builder.add_edge(u, copy(w))
        return u

    root = copy(tree.root)
    leaf = builder.add_vertex(r)
    builder.add_edge(root, leaf)
    order = list(tree.leaf_order) + [r]
    unrooted = builder.tree(UNROOTED, leaf_order=order)
    return LabelledTree(unrooted, labels, lt.symbols)
