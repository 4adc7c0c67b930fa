"""Golomb ruler verification, statistics and desk-scale optimal search.

A Golomb ruler is a set of marks whose pairwise differences are all
distinct; equivalently its difference set reaches the maximum possible
size 2*C(k,2)+1 for k marks.  Rulers instantiate the size-maximal
encoding scheme: a sub-generator whose eigenvalues form a Golomb ruler
contributes a degeneracy-free difference set.

The search is an exact depth-first enumeration with an incremental
difference bitmask, so its results are certifiable; no heuristics.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

from .spectrum import RationalLike, SpectrumSet, as_rational

ORDER_GUARD = 9  # exact search stays desk-scale up to here

__all__ = ["Ruler", "ORDER_GUARD", "is_golomb", "ruler_stats", "search_optimal"]


@dataclass(frozen=True, order=True)
class Ruler:
    """Canonical ruler: strictly increasing nonnegative integer marks, first mark 0."""

    marks: tuple[int, ...]

    def __post_init__(self):
        if not self.marks:
            raise ValueError("ruler needs at least one mark")
        if self.marks[0] != 0:
            raise ValueError("rulers are canonicalised to start at 0")
        if any(b <= a for a, b in zip(self.marks, self.marks[1:])):
            raise ValueError("marks must be strictly increasing")

    @property
    def order(self) -> int:
        return len(self.marks)

    @property
    def length(self) -> int:
        return self.marks[-1]

    def mirror(self) -> "Ruler":
        """The reflected ruler (same difference set)."""
        return Ruler(tuple(self.length - m for m in reversed(self.marks)))

    def has_distinct_mirror(self) -> bool:
        return self.mirror().marks != self.marks

    def to_json(self) -> dict:
        stats = ruler_stats(self.marks)
        return {
            "marks": list(self.marks),
            "order": stats["order"],
            "length": stats["length"],
            "perfect": stats["perfect"],
        }


def is_golomb(marks: Iterable[RationalLike]) -> bool:
    """True iff all pairwise differences are distinct (scale-invariant)."""
    values = [as_rational(m) for m in marks]
    if not values:
        raise ValueError("empty mark list")
    k = len(values)
    diffs = {a - b for a in values for b in values}
    return len(diffs) == 2 * comb(k, 2) + 1


def ruler_stats(marks: Iterable[RationalLike]) -> dict:
    """Order, length and perfection of a Golomb ruler.

    Perfect means the difference set has no gaps: its contiguous integer
    radius equals the ruler length.
    """
    values = sorted(as_rational(m) for m in marks)
    if not is_golomb(values):
        raise ValueError("not a Golomb ruler")
    length = values[-1] - values[0]
    diff = SpectrumSet(values).delta()
    perfect = length.denominator == 1 and diff.contiguous_radius() == length
    return {
        "order": len(values),
        "length": int(length) if length.denominator == 1 else length,
        "perfect": bool(perfect),
    }


def search_optimal(order: int, length_cap: int) -> list[Ruler]:
    """All shortest Golomb rulers of the given order with length <= length_cap.

    Mirrored rulers are reported once (lexicographically smaller
    representative); use :meth:`Ruler.has_distinct_mirror` to recover the
    reflection.  Returns an empty list when no ruler fits under the cap.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > ORDER_GUARD:
        raise ValueError(f"desk-scale limit: order <= {ORDER_GUARD}")
    if length_cap < order - 1:
        raise ValueError("length_cap must be at least order - 1")
    if order == 1:
        return [Ruler((0,))]

    # Any order-k ruler has C(k,2) distinct positive differences, all at
    # most its length, so length >= C(k,2).
    for target in range(comb(order, 2), length_cap + 1):
        found = _rulers_of_length(order, target)
        if found:
            canonical = {min(r, r.mirror()) for r in found}
            return sorted(canonical)
    return []


def _rulers_of_length(order: int, target: int) -> list[Ruler]:
    hits: list[Ruler] = []
    marks = [0]

    def extend(used_diffs: int, remaining: int):
        last = marks[-1]
        if remaining == 1:
            candidates = range(target, target + 1)
        else:
            candidates = range(last + 1, target - (remaining - 1) + 1)
        for m in candidates:
            new_bits = 0
            for s in marks:
                bit = 1 << (m - s)
                if (used_diffs | new_bits) & bit:
                    new_bits = -1
                    break
                new_bits |= bit
            if new_bits < 0:
                continue
            marks.append(m)
            if remaining == 1:
                hits.append(Ruler(tuple(marks)))
            else:
                extend(used_diffs | new_bits, remaining - 1)
            marks.pop()

    extend(0, order - 1)
    return hits
