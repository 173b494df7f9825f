"""Interned symbols, size-3 multisets of symbols, and exact rational combinations."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TERM_RE = re.compile(r"(\d*)([A-Za-z][A-Za-z0-9_]*)")


class SymbolError(ValueError):
    """Bad symbol name or malformed multiset text."""


@dataclass(frozen=True, eq=False)
class Symbol:
    """A label from the alphabet, interned in a SymbolTable.

    Equality and hashing go by display name, so symbols interned in
    different tables compare equal when they mean the same label.  The
    id is table-local and used for dense indexing and canonical storage
    order.
    """

    id: int
    name: str

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Symbol) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __lt__(self, other: "Symbol") -> bool:
        return self.id < other.id

    def __repr__(self) -> str:
        return f"Symbol({self.name})"


class SymbolTable:
    """Interns display names to Symbols; name <-> id is a bijection per table."""

    def __init__(self, names: Iterable[str] = ()):
        self._by_name: dict[str, Symbol] = {}
        self._by_id: list[Symbol] = []
        for n in names:
            self.intern(n)

    def intern(self, name: str) -> Symbol:
        sym = self._by_name.get(name)
        if sym is None:
            if not _NAME_RE.fullmatch(name):
                raise SymbolError(f"bad symbol name {name!r}")
            sym = Symbol(len(self._by_id), name)
            self._by_name[name] = sym
            self._by_id.append(sym)
        return sym

    def get(self, name: str) -> Optional[Symbol]:
        return self._by_name.get(name)

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._by_id)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name


@dataclass(frozen=True, eq=False)
class TripleMultiset:
    """A multiset of exactly three symbols, stored in non-decreasing id order.

    Equality and hashing use the name-sorted entries, so multisets built
    against different tables still compare structurally.
    """

    entries: tuple[Symbol, Symbol, Symbol]

    def __post_init__(self) -> None:
        if len(self.entries) != 3:
            raise SymbolError("a TripleMultiset has exactly three entries")

    @classmethod
    def of(cls, a: Symbol, b: Symbol, c: Symbol) -> "TripleMultiset":
        return cls(tuple(sorted((a, b, c), key=lambda s: s.id)))  # type: ignore[arg-type]

    def _key(self) -> tuple[str, str, str]:
        return tuple(sorted(s.name for s in self.entries))  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TripleMultiset) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: "TripleMultiset") -> bool:
        return self._key() < other._key()

    @property
    def support(self) -> frozenset[Symbol]:
        """The underlying set of the multiset."""
        return frozenset(self.entries)

    @property
    def majority(self) -> Optional[Symbol]:
        """The symbol occurring at least twice; None when all three entries differ."""
        counts = Counter(self.entries)
        if len(counts) == 3:
            return None
        return max(counts, key=lambda s: counts[s])

    @property
    def minority(self) -> Optional[Symbol]:
        """The symbol occurring exactly once; equals majority when all entries
        coincide, None when all three entries differ."""
        counts = Counter(self.entries)
        if len(counts) == 3:
            return None
        if len(counts) == 1:
            return self.entries[0]
        return min(counts, key=lambda s: counts[s])

    def text(self) -> str:
        """Coefficient form, e.g. '2A+B', '3A', 'A+B+C' (terms in name order)."""
        counts = Counter(s.name for s in self.entries)
        parts = []
        for name in sorted(counts):
            k = counts[name]
            parts.append(f"{k}{name}" if k > 1 else name)
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"TripleMultiset({self.text()})"


def parse_multiset(text: str, table: SymbolTable) -> TripleMultiset:
    """Parse '2A+B', 'A+A+B' or '3A' into a TripleMultiset, interning names."""
    entries: list[Symbol] = []
    for term in text.strip().split("+"):
        term = term.strip()
        m = _TERM_RE.fullmatch(term)
        if not m:
            raise SymbolError(f"bad multiset term {term!r} in {text!r}")
        count = int(m.group(1)) if m.group(1) else 1
        entries.extend([table.intern(m.group(2))] * count)
    if len(entries) != 3:
        raise SymbolError(f"multiset {text!r} has {len(entries)} entries, expected 3")
    return TripleMultiset.of(*entries)


class SymbolCombination:
    """A formal sum of symbols with exact rational coefficients.

    Zero coefficients are dropped, so the representation is normalized and
    equality is structural.  All arithmetic is exact.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Symbol, Fraction | int] = ()):
        cleaned = {}
        for sym, c in dict(coeffs).items():
            c = Fraction(c)
            if c != 0:
                cleaned[sym] = c
        self._coeffs = cleaned

    @classmethod
    def zero(cls) -> "SymbolCombination":
        return cls()

    @classmethod
    def from_multiset(cls, ms: TripleMultiset) -> "SymbolCombination":
        counts: Counter[Symbol] = Counter(ms.entries)
        return cls({s: Fraction(k) for s, k in counts.items()})

    @property
    def coefficients(self) -> dict[Symbol, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, sym: Symbol) -> Fraction:
        return self._coeffs.get(sym, Fraction(0))

    def __add__(self, other: "SymbolCombination") -> "SymbolCombination":
        out = dict(self._coeffs)
        for s, c in other._coeffs.items():
            out[s] = out.get(s, Fraction(0)) + c
        return SymbolCombination(out)

    def __sub__(self, other: "SymbolCombination") -> "SymbolCombination":
        out = dict(self._coeffs)
        for s, c in other._coeffs.items():
            out[s] = out.get(s, Fraction(0)) - c
        return SymbolCombination(out)

    def scaled(self, q: Fraction | int) -> "SymbolCombination":
        q = Fraction(q)
        return SymbolCombination({s: c * q for s, c in self._coeffs.items()})

    def is_valid(self) -> bool:
        """True iff every coefficient is a non-negative integer."""
        return all(c.denominator == 1 and c >= 0 for c in self._coeffs.values())

    def singleton(self) -> Optional[Symbol]:
        """The unique symbol with coefficient 1 when the combination is exactly
        one symbol; otherwise None."""
        if len(self._coeffs) == 1:
            (sym, c), = self._coeffs.items()
            if c == 1:
                return sym
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolCombination):
            return NotImplemented
        return {s.name: c for s, c in self._coeffs.items()} == {
            s.name: c for s, c in other._coeffs.items()
        }

    def __hash__(self) -> int:
        return hash(frozenset((s.name, c) for s, c in self._coeffs.items()))

    def text(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for sym in sorted(self._coeffs, key=lambda s: s.name):
            c = self._coeffs[sym]
            if c == 1:
                parts.append(sym.name)
            elif c.denominator == 1:
                parts.append(f"{c.numerator}{sym.name}")
            else:
                parts.append(f"({c}){sym.name}")
        return "+".join(parts).replace("+-", "-")

    def __repr__(self) -> str:
        return f"SymbolCombination({self.text()})"
