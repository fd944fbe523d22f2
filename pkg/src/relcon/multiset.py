"""Finite multisets with the pointwise operations used throughout the library.

A multiset maps elements to positive multiplicities.  The four pointwise
operations are intersection (min of counts), union (max), sum (addition,
``+``), and truncated difference (``max(0, m - n)``, ``-``).  Values are
immutable and kept in canonical zero-free form, so ``==`` is exact
multiplicity agreement — which is what the relevance checks rely on.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable, Iterator


def _default_key(x: Any) -> tuple[str, str]:
    # Deterministic iteration/printing order; str() is injective on the
    # formula types used here, the class name breaks cross-type ties.
    return (str(x), x.__class__.__name__)


class FMultiset:
    """An immutable finite multiset over an ordered, hashable element type."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, items: Iterable[Hashable] = ()):
        counts: dict[Any, int] = {}
        for x in items:
            counts[x] = counts.get(x, 0) + 1
        object.__setattr__(self, "_counts", counts)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def from_counts(cls, counts: dict[Any, int]) -> "FMultiset":
        """Build from an element->count mapping; zero counts are dropped."""
        m = cls()
        for x, c in counts.items():
            if c < 0:
                raise ValueError(f"negative multiplicity for {x!r}: {c}")
            if c > 0:
                m._counts[x] = c
        return m

    # -- basic queries ------------------------------------------------------

    def count(self, x: Any) -> int:
        """Multiplicity of ``x`` (0 off the support)."""
        return self._counts.get(x, 0)

    multiplicity = count

    @property
    def support(self) -> frozenset:
        """The set of elements with positive multiplicity."""
        return frozenset(self._counts)

    @property
    def size(self) -> int:
        """Total number of element occurrences."""
        return sum(self._counts.values())

    def counts(self) -> dict[Any, int]:
        """A copy of the canonical element->count mapping."""
        return dict(self._counts)

    def is_empty(self) -> bool:
        return not self._counts

    def __len__(self) -> int:
        return self.size

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __contains__(self, x: Any) -> bool:
        return x in self._counts

    def __iter__(self) -> Iterator:
        """Yield elements with repetition, in canonical sorted order."""
        for x in sorted(self._counts, key=_default_key):
            for _ in range(self._counts[x]):
                yield x

    def distinct(self) -> list:
        """Support elements in canonical sorted order."""
        return sorted(self._counts, key=_default_key)

    # -- pointwise operations -----------------------------------------------

    def _merge(self, other: "FMultiset", op: Callable[[int, int], int]) -> "FMultiset":
        result: dict[Any, int] = {}
        for x in set(self._counts) | set(other._counts):
            c = op(self.count(x), other.count(x))
            if c > 0:
                result[x] = c
        return FMultiset.from_counts(result)

    def __add__(self, other: "FMultiset") -> "FMultiset":
        """Multiset sum: counts add."""
        return self._merge(other, lambda a, b: a + b)

    def __sub__(self, other: "FMultiset") -> "FMultiset":
        """Truncated difference: max(0, m - n) per element."""
        return self._merge(other, lambda a, b: max(0, a - b))

    def __and__(self, other: "FMultiset") -> "FMultiset":
        """Intersection: min of counts."""
        return self._merge(other, min)

    def __or__(self, other: "FMultiset") -> "FMultiset":
        """Union: max of counts."""
        return self._merge(other, max)

    def __le__(self, other: "FMultiset") -> bool:
        """Submultiset order: every multiplicity is bounded by the other's."""
        return all(c <= other.count(x) for x, c in self._counts.items())

    def __lt__(self, other: "FMultiset") -> bool:
        return self <= other and self != other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FMultiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self._counts.items()))
            )
        return self._hash

    def __repr__(self) -> str:
        return f"FMultiset({list(self)!r})"

    def __str__(self) -> str:
        return "[" + ", ".join(str(x) for x in self) + "]"


EMPTY = FMultiset()


def msum(*multisets: FMultiset) -> FMultiset:
    """Sum of any number of multisets; the empty multiset is the identity."""
    total = FMultiset()
    for m in multisets:
        total = total + m
    return total


def submultisets(m: FMultiset) -> Iterator[FMultiset]:
    """All submultisets of ``m``, smallest first within each element choice."""
    elems = m.distinct()

    def rec(i: int, acc: dict) -> Iterator[FMultiset]:
        if i == len(elems):
            yield FMultiset.from_counts(acc)
            return
        x = elems[i]
        for c in range(m.count(x) + 1):
            if c:
                acc[x] = c
            yield from rec(i + 1, acc)
            acc.pop(x, None)

    return rec(0, {})
