"""k-point condition checkers for symbolic maps.

Condition families, named after the arity pattern they constrain:

  U1/U2 -- two-way maps; clean exactly when the map comes from lca labels
           of a rooted labelled tree.
  M1/M2 -- plain-symbol three-way maps; clean exactly when the map comes
           from median labels of an unrooted labelled tree.
  P1/P2/P3 -- multiset three-way maps; clean exactly when the map comes
           from the three pairwise lca labels of a rooted labelled tree
           (ground sets of size five or more).

Checkers report every violation with its witness subset rather than a bare
boolean, so reports can be printed or serialized for diagnostics.  Subsets
are scanned in lexicographic rank order over the ground set, which makes the
first witness deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Optional, Sequence

from .maps import KIND_MULTISET, KIND_SYMBOL, MapError, ThreeWayMap, TwoWayMap
from .symbols import Symbol, SymbolCombination, SymbolTable, TripleMultiset, parse_multiset

U1, U2, M1, M2, P1, P2, P3 = "U1", "U2", "M1", "M2", "P1", "P2", "P3"


@dataclass(frozen=True)
class Violation:
    """One failed condition instance: the condition tag, the offending leaf
    tuple, and a human-readable detail line."""

    kind: str
    witness: tuple[str, ...]
    detail: str

    def text(self) -> str:
        return f"{self.kind} at ({','.join(self.witness)}): {self.detail}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": list(self.witness), "detail": self.detail}


# -- pattern helpers -----------------------------------------------------------

def _pi_pattern(value: Callable[[str, str], object], quad: Sequence[str]) -> Optional[tuple]:
    """Search the 4! role assignments for D(x,y)=D(y,z)=D(z,u) != D(z,x)=D(x,u)=D(u,y).

    Returns the witnessing ordering or None.  The two value classes then each
    form a path through all four elements.
    """
    for x, y, z, u in permutations(quad):
        a = value(x, y)
        if value(y, z) != a or value(z, u) != a:
            continue
        b = value(z, x)
        if b == a:
            continue
        if value(x, u) == b and value(u, y) == b:
            return (x, y, z, u)
    return None


# -- two-way maps: U1 / U2 -----------------------------------------------------

def check_ultrametric(d: TwoWayMap, stop_after: Optional[int] = None) -> list[Violation]:
    """All U1/U2 violations; empty exactly when d is representable by lca
    labels of a rooted labelled tree."""
    out: list[Violation] = []
    for x, y, z in combinations(d.ground, 3):
        vals = (d.value(x, y), d.value(x, z), d.value(y, z))
        if len(set(vals)) == 3:
            out.append(Violation(
                U1, (x, y, z),
                f"three pairwise distinct values {vals[0].name},{vals[1].name},{vals[2].name}"))
            if stop_after and len(out) >= stop_after:
                return out
    for quad in combinations(d.ground, 4):
        hit = _pi_pattern(d.value, quad)
        if hit is not None:
            x, y, z, u = hit
            out.append(Violation(
                U2, quad,
                f"D({x},{y})=D({y},{z})=D({z},{u})={d.value(x, y).name} but "
                f"D({z},{x})=D({x},{u})=D({u},{y})={d.value(z, x).name}"))
            if stop_after and len(out) >= stop_after:
                return out
    return out


# -- plain-symbol three-way maps: M1 / M2 --------------------------------------

def check_tree_map(d: ThreeWayMap, stop_after: Optional[int] = None) -> list[Violation]:
    """All M1/M2 violations; empty exactly when d is representable by median
    labels of an unrooted labelled tree (ground set of size at least 4)."""
    if d.kind != KIND_SYMBOL:
        raise MapError("M conditions apply to plain-symbol three-way maps")
    if len(d.ground) < 4:
        raise MapError("M conditions need a ground set of size at least 4")
    out: list[Violation] = []
    for x, y, z, u in combinations(d.ground, 4):
        vals = [d.value(x, y, z), d.value(x, y, u), d.value(x, z, u), d.value(y, z, u)]
        sizes = sorted(vals.count(v) for v in set(vals))
        if sizes not in ([4], [2, 2]):
            shown = ",".join(v.name for v in vals)
            out.append(Violation(
                M1, (x, y, z, u),
                f"triple values {shown} split neither all-equal nor two-and-two"))
            if stop_after and len(out) >= stop_after:
                return out
    for five in combinations(d.ground, 5):
        for v in five:
            rest = tuple(n for n in five if n != v)
            hit = _pi_pattern(lambda a, b: d.value(v, a, b), rest)
            if hit is not None:
                out.append(Violation(
                    M2, five,
                    f"slice through {v} realizes the forbidden alternating pattern "
                    f"on ({','.join(hit)})"))
                if stop_after and len(out) >= stop_after:
                    return out
                break
    return out


# -- the five-point linear system ----------------------------------------------

# Row order: pairs of {x,y,z,u,v} in lexicographic order
#   (x,y),(x,z),(x,u),(x,v),(y,z),(y,u),(y,v),(z,u),(z,v),(u,v);
# column order: triples in lexicographic order
#   (x,y,z),(x,y,u),(x,y,v),(x,z,u),(x,z,v),(x,u,v),(y,z,u),(y,z,v),(y,u,v),(z,u,v).
# TRIPLE_OF_PAIRS expresses each triple value as the sum of its three pair
# values; PAIR_OF_TRIPLES is its exact inverse (entries times 1/6).

TRIPLE_OF_PAIRS: tuple[tuple[int, ...], ...] = (
    (1, 1, 0, 0, 1, 0, 0, 0, 0, 0),
    (1, 0, 1, 0, 0, 1, 0, 0, 0, 0),
    (1, 0, 0, 1, 0, 0, 1, 0, 0, 0),
    (0, 1, 1, 0, 0, 0, 0, 1, 0, 0),
    (0, 1, 0, 1, 0, 0, 0, 0, 1, 0),
    (0, 0, 1, 1, 0, 0, 0, 0, 0, 1),
    (0, 0, 0, 0, 1, 1, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0, 1, 0, 1, 0),
    (0, 0, 0, 0, 0, 1, 1, 0, 0, 1),
    (0, 0, 0, 0, 0, 0, 0, 1, 1, 1),
)

PAIR_OF_TRIPLES_NUMERATORS: tuple[tuple[int, ...], ...] = (
    (2, 2, 2, -1, -1, -1, -1, -1, -1, 2),
    (2, -1, -1, 2, 2, -1, -1, -1, 2, -1),
    (-1, 2, -1, 2, -1, 2, -1, 2, -1, -1),
    (-1, -1, 2, -1, 2, 2, 2, -1, -1, -1),
    (2, -1, -1, -1, -1, 2, 2, 2, -1, -1),
    (-1, 2, -1, -1, 2, -1, 2, -1, 2, -1),
    (-1, -1, 2, 2, -1, -1, -1, 2, 2, -1),
    (-1, -1, 2, 2, -1, -1, 2, -1, -1, 2),
    (-1, 2, -1, -1, 2, -1, -1, 2, -1, 2),
    (2, -1, -1, -1, -1, 2, -1, -1, 2, 2),
)

PAIR_OF_TRIPLES: tuple[tuple[Fraction, ...], ...] = tuple(
    tuple(Fraction(n, 6) for n in row) for row in PAIR_OF_TRIPLES_NUMERATORS
)


def pair_combination(d: ThreeWayMap, five: Sequence[str], p: str, q: str) -> SymbolCombination:
    """The rational combination over a 5-subset that recovers the pair value:

        (1/6) * ( 2*[d(p,q,e) + d(p,q,f) + d(p,q,g) + d(e,f,g)]
                  - sum over pairs {a,b} of {e,f,g} of [d(p,a,b) + d(q,a,b)] )

    where {e,f,g} is the 5-subset minus {p,q}.  For maps that come from a
    rooted labelled tree this is always the singleton {D(p,q)}.
    """
    if d.kind != KIND_MULTISET:
        raise MapError("pair combinations apply to multiset three-way maps")
    five = tuple(five)
    if len(set(five)) != 5:
        raise MapError("pair_combination needs five distinct names")
    if p == q or p not in five or q not in five:
        raise MapError("p and q must be distinct members of the 5-subset")
    e, f, g = [n for n in five if n not in (p, q)]
    plus = SymbolCombination.zero()
    for t in ((p, q, e), (p, q, f), (p, q, g), (e, f, g)):
        plus = plus + SymbolCombination.from_multiset(d.value(*t))
    minus = SymbolCombination.zero()
    for a, b in combinations((e, f, g), 2):
        minus = minus + SymbolCombination.from_multiset(d.value(p, a, b))
        minus = minus + SymbolCombination.from_multiset(d.value(q, a, b))
    return (plus.scaled(2) - minus).scaled(Fraction(1, 6))


class FivePointSystem:
    """The linear system tying the ten triple values over a 5-subset to the
    ten pair values of a two-way map assembling them."""

    matrix = TRIPLE_OF_PAIRS
    inverse = PAIR_OF_TRIPLES

    def __init__(self, d: ThreeWayMap, five: Sequence[str]):
        if d.kind != KIND_MULTISET:
            raise MapError("five-point systems apply to multiset maps")
        self.five = tuple(five)
        if len(set(self.five)) != 5:
            raise MapError("a five-point system needs five distinct names")
        self.triple_order = tuple(combinations(self.five, 3))
        self.pair_order = tuple(combinations(self.five, 2))
        self.triple_values: tuple[TripleMultiset, ...] = tuple(
            d.value(*t) for t in self.triple_order)  # type: ignore[misc]

    def pair_combinations(self) -> list[SymbolCombination]:
        """The matrix route: apply the inverse to the triple-value vector."""
        out = []
        for row in self.inverse:
            acc = SymbolCombination.zero()
            for coef, ms in zip(row, self.triple_values):
                acc = acc + SymbolCombination.from_multiset(ms).scaled(coef)
            out.append(acc)
        return out

    def pair_symbols(self) -> list[Optional[Symbol]]:
        """Per pair, the recovered symbol when the combination is a valid
        singleton, else None."""
        return [c.singleton() if c.is_valid() else None
                for c in self.pair_combinations()]


# -- multiset three-way maps: P1 / P2 / P3 --------------------------------------

def check_three_way_ultrametric(d: ThreeWayMap,
                                stop_after: Optional[int] = None) -> list[Violation]:
    """All P1/P2/P3 violations; empty exactly when d is representable by the
    pairwise lca-label multisets of a rooted labelled tree (|X| >= 5)."""
    if d.kind != KIND_MULTISET:
        raise MapError("P conditions apply to multiset three-way maps")
    if len(d.ground) < 5:
        raise MapError("P conditions need a ground set of size at least 5")
    out: list[Violation] = []

    for five in combinations(d.ground, 5):
        for p, q in combinations(five, 2):
            comb = pair_combination(d, five, p, q)
            if not comb.is_valid():
                out.append(Violation(
                    P1, five, f"combination for pair ({p},{q}) is {comb.text()}"))
                if stop_after and len(out) >= stop_after:
                    return out

    for t, v in d.triples():
        if len(v.support) > 2:  # type: ignore[union-attr]
            out.append(Violation(P2, t, f"value {v.text()} has three distinct symbols"))  # type: ignore[union-attr]
            if stop_after and len(out) >= stop_after:
                return out

    for quad in combinations(d.ground, 4):
        hit = _p3_violation(d, quad)
        if hit is not None:
            out.append(Violation(P3, quad, hit))
            if stop_after and len(out) >= stop_after:
                return out
    return out


def _p3_violation(d: ThreeWayMap, quad: Sequence[str]) -> Optional[str]:
    for x, y, z, u in permutations(quad):
        v_xyz, v_yzu = d.value(x, y, z), d.value(y, z, u)
        if v_xyz != v_yzu:
            continue
        v_xyu, v_xzu = d.value(x, y, u), d.value(x, z, u)
        if v_xyu != v_xzu or v_xyu == v_xyz:
            continue
        ma, mb = v_xyz.majority, v_xyu.majority  # type: ignore[union-attr]
        if ma is None or mb is None:
            continue  # a three-symbol value is already a P2 violation
        if ma != mb:
            return (f"equal pairs {v_xyz.text()} and {v_xyu.text()} have different "
                    f"majority symbols {ma.name} and {mb.name} "
                    f"(roles x={x},y={y},z={z},u={u})")
    return None


# -- quartet classification -----------------------------------------------------

# The seven value patterns realizable by a discriminating labelled rooted tree
# on four leaves, up to relabelling leaves and renaming symbols.  Rows give the
# values on the triples (1,2,3), (1,2,4), (1,3,4), (2,3,4).
_REFERENCE_PATTERNS: dict[int, tuple[str, str, str, str]] = {
    1: ("3A", "3A", "3A", "3A"),
    2: ("2A+B", "2A+B", "3A", "3A"),
    3: ("2A+B", "2A+B", "2A+B", "2A+B"),
    4: ("2A+B", "2A+B", "2A+C", "2A+C"),
    5: ("3B", "2A+B", "2A+B", "2A+B"),
    6: ("A+2B", "3A", "2A+B", "2A+B"),
    7: ("2B+C", "2A+C", "2A+B", "2A+B"),
}

_REF_TABLE = SymbolTable(("A", "B", "C"))
_REF_TRIPLES = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
_REF_VALUES: dict[int, dict[frozenset, TripleMultiset]] = {
    i: {frozenset(t): parse_multiset(txt, _REF_TABLE)
        for t, txt in zip(_REF_TRIPLES, row)}
    for i, row in _REFERENCE_PATTERNS.items()
}
_REF_SYMBOLS: dict[int, tuple[Symbol, ...]] = {
    i: tuple(sorted({s for ms in vals.values() for s in ms.entries},
                    key=lambda s: s.name))
    for i, vals in _REF_VALUES.items()
}


@dataclass(frozen=True)
class QuartetType:
    """The matched reference pattern for a 4-subset, if any, together with
    the witnessing leaf and symbol bijections."""

    index: Optional[int]
    leaf_bijection: Optional[dict[str, int]]
    symbol_bijection: Optional[dict[Symbol, Symbol]]  # reference -> map symbols

    def __bool__(self) -> bool:
        return self.index is not None


def classify_quartet(d: ThreeWayMap, four: Sequence[str]) -> QuartetType:
    """Search all 24 leaf bijections and all injective symbol renamings for a
    reference pattern matching the restriction to a 4-subset.

    A match exists exactly when the restriction is representable by a rooted
    labelled tree on the four leaves.
    """
    if d.kind != KIND_MULTISET:
        raise MapError("quartet classification applies to multiset maps")
    four = tuple(four)
    if len(set(four)) != 4:
        raise MapError("classify_quartet needs four distinct names")
    target_syms = sorted(
        {s for t in combinations(four, 3) for s in d.value(*t).entries},  # type: ignore[union-attr]
        key=lambda s: s.name)
    for index in range(1, 8):
        ref_syms = _REF_SYMBOLS[index]
        if len(ref_syms) != len(target_syms):
            continue
        ref_vals = _REF_VALUES[index]
        for perm in permutations((1, 2, 3, 4)):
            leaf_map = dict(zip(four, perm))
            for image in permutations(target_syms):
                sym_map = dict(zip(ref_syms, image))
                ok = True
                for t in combinations(four, 3):
                    ref = ref_vals[frozenset(leaf_map[n] for n in t)]
                    a, b, c = (sym_map[s] for s in ref.entries)
                    if TripleMultiset.of(a, b, c) != d.value(*t):
                        ok = False
                        break
                if ok:
                    return QuartetType(index, leaf_map, sym_map)
    return QuartetType(None, None, None)


def ultrametric_by_five_subsets(d: ThreeWayMap) -> bool:
    """True iff every 5-subset restriction satisfies the P conditions; for
    |X| >= 5 this is equivalent to representability of the whole map."""
    from .maps import restrict

    if len(d.ground) < 5:
        raise MapError("the five-subset test needs a ground set of size at least 5")
    for five in combinations(d.ground, 5):
        if check_three_way_ultrametric(restrict(d, five), stop_after=1):
            return False
    return True


def representable_by_conditions(d: ThreeWayMap) -> bool:
    """Condition-side representability verdict for a three-way map.

    Plain-symbol maps: the M conditions.  Multiset maps: the P conditions
    when the ground set has five or more elements; on exactly four elements
    the P family loses its five-point leg, so the quartet classifier (which
    is the four-leaf characterization) decides instead.
    """
    if d.kind == KIND_SYMBOL:
        return not check_tree_map(d, stop_after=1)
    if len(d.ground) >= 5:
        return not check_three_way_ultrametric(d, stop_after=1)
    return bool(classify_quartet(d, d.ground))
