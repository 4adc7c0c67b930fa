"""Exact set algebra for frequency spectra of data-encoding quantum models.

A univariate model built from layers of data-encoding generators has a
finite frequency spectrum determined solely by the generator eigenvalues:
it is the Minkowski sum, over all sub-generators, of their eigenvalue
difference sets.  This module provides the exact machinery behind that
calculus: sorted duplicate-free rational frequency sets, Minkowski sums,
difference sets, rescaling, degeneracy counting, the contiguous integer
radius, and the lazily-represented Cartesian product used by multivariate
models.

All symbolic arithmetic is exact via :class:`fractions.Fraction`; floats
never enter this path, which keeps maximality certificates decidable.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

Rational = Fraction
RationalLike = Fraction | int | str

__all__ = [
    "Rational",
    "SpectrumSet",
    "GeneratorGrid",
    "MultiSpectrum",
    "as_rational",
    "as_eigenvalues",
    "minkowski_sum",
    "delta",
    "scale",
    "contiguous_k",
    "spectrum_of_grid",
    "degeneracy",
    "degeneracy_map",
    "combination_map",
    "multivariate_spectrum",
]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, strings like ``"-3/2"``, and Fractions to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def as_eigenvalues(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    """Normalise an eigenvalue list (multiplicity allowed, order preserved)."""
    vals = tuple(as_rational(v) for v in values)
    if not vals:
        raise ValueError("eigenvalue list must be nonempty")
    return vals


class SpectrumSet:
    """A finite set of exact rational frequencies, sorted and duplicate-free."""

    __slots__ = ("_elements", "_members")

    def __init__(self, values: Iterable[RationalLike] = ()):
        elements = sorted({as_rational(v) for v in values})
        self._elements: tuple[Fraction, ...] = tuple(elements)
        self._members = frozenset(self._elements)

    @classmethod
    def symmetric_range(cls, k: int) -> "SpectrumSet":
        """The integer range {-k, ..., 0, ..., k}."""
        if k < 0:
            raise ValueError("radius must be nonnegative")
        return cls(range(-k, k + 1))

    @property
    def elements(self) -> tuple[Fraction, ...]:
        return self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._elements)

    def __contains__(self, value) -> bool:
        return value in self._members

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectrumSet):
            return NotImplemented
        return self._elements == other._elements

    def __hash__(self) -> int:
        return hash(self._elements)

    def __repr__(self) -> str:
        if len(self._elements) <= 8:
            body = ", ".join(str(e) for e in self._elements)
        else:
            head = ", ".join(str(e) for e in self._elements[:3])
            tail = ", ".join(str(e) for e in self._elements[-3:])
            body = f"{head}, ..., {tail}"
        return f"SpectrumSet({{{body}}}, size={len(self._elements)})"

    # -- algebra ---------------------------------------------------------

    def minkowski(self, other: "SpectrumSet") -> "SpectrumSet":
        """Element-wise sum set {x + y}; empty if either side is empty."""
        if not self._elements or not other._elements:
            return SpectrumSet()
        return SpectrumSet(x + y for x in self._elements for y in other._elements)

    def delta(self) -> "SpectrumSet":
        """Difference set {a - b | a, b in self}; symmetric and contains 0."""
        if not self._elements:
            raise ValueError("empty spectrum")
        return SpectrumSet(a - b for a in self._elements for b in self._elements)

    def scale(self, r: RationalLike) -> "SpectrumSet":
        """{r * a | a in self}; collapses to {0} for r = 0 and nonempty self."""
        factor = as_rational(r)
        return SpectrumSet(factor * a for a in self._elements)

    def __add__(self, other: "SpectrumSet") -> "SpectrumSet":
        if not isinstance(other, SpectrumSet):
            return NotImplemented
        return self.minkowski(other)

    def __rmul__(self, r: RationalLike) -> "SpectrumSet":
        return self.scale(r)

    def __neg__(self) -> "SpectrumSet":
        return self.scale(-1)

    # -- queries ---------------------------------------------------------

    def is_symmetric(self) -> bool:
        """True iff a in self implies -a in self."""
        return all(-a in self._members for a in self._elements)

    def radius(self) -> Fraction:
        """max |a| over the elements (0 for the empty set)."""
        if not self._elements:
            return Fraction(0)
        return max(-self._elements[0], self._elements[-1])

    def contiguous_radius(self) -> int:
        """Largest K >= 0 with every integer in {-K..K} contained in self.

        Requires 0 to be an element; raises otherwise.
        """
        if 0 not in self._members:
            raise ValueError("zero missing")
        k = 0
        while (k + 1) in self._members and -(k + 1) in self._members:
            k += 1
        return k

    def issuperset_range(self, k: int) -> bool:
        """True iff {-k..k} is contained in self."""
        return all(v in self._members for v in range(-k, k + 1))

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {"elements": [str(e) for e in self._elements]}

    @classmethod
    def from_json(cls, data: dict) -> "SpectrumSet":
        return cls(data["elements"])


def minkowski_sum(a: SpectrumSet, b: SpectrumSet) -> SpectrumSet:
    return a.minkowski(b)


def delta(a: SpectrumSet) -> SpectrumSet:
    return a.delta()


def scale(a: SpectrumSet, r: RationalLike) -> SpectrumSet:
    return a.scale(r)


def contiguous_k(a: SpectrumSet) -> int:
    return a.contiguous_radius()


@dataclass(frozen=True)
class GeneratorGrid:
    """Rectangular arrangement of sub-generator eigenvalue lists.

    ``cells[row][col]`` holds the eigenvalues of one sub-generator; every
    cell spans ``q`` qubits and therefore carries ``2**q`` eigenvalues
    (with multiplicity).  Rows are qubit blocks, columns are layers, so a
    grid with ``rows`` blocks and ``cols`` layers describes a model on
    ``R = rows * q`` qubits with area ``R * cols``.
    """

    q: int
    cells: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if not self.cells or any(not row for row in self.cells):
            raise ValueError("grid must have at least one row and one column")
        width = len(self.cells[0])
        if any(len(row) != width for row in self.cells):
            raise ValueError("grid rows must all have the same number of columns")
        dim = 2 ** self.q
        for row in self.cells:
            for cell in row:
                if len(cell) != dim:
                    raise ValueError(
                        f"every cell must hold {dim} eigenvalues for q={self.q}, got {len(cell)}"
                    )

    @classmethod
    def from_cells(
        cls, cells: Sequence[Sequence[Iterable[RationalLike]]], q: int = 1
    ) -> "GeneratorGrid":
        normalised = tuple(tuple(as_eigenvalues(cell) for cell in row) for row in cells)
        return cls(q=q, cells=normalised)

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    @property
    def qubits(self) -> int:
        return self.rows * self.q

    @property
    def area(self) -> int:
        return self.qubits * self.cols

    def cell(self, row: int, col: int) -> tuple[Fraction, ...]:
        return self.cells[row][col]

    def iter_cells(self) -> Iterator[tuple[Fraction, ...]]:
        for row in self.cells:
            yield from row

    def all_integer(self) -> bool:
        return all(v.denominator == 1 for cell in self.iter_cells() for v in cell)

    def representation_count(self) -> int:
        """Total number of ordered eigenvalue-pair tuples over all cells."""
        return math.prod(len(cell) ** 2 for cell in self.iter_cells())

    def max_spectrum_size(self) -> int:
        """Upper bound on the spectrum size: product of per-cell difference-set sizes."""
        return math.prod(
            len({a - b for a in cell for b in cell}) for cell in self.iter_cells()
        )

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "cells": [[[str(v) for v in cell] for cell in row] for row in self.cells],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorGrid":
        return cls.from_cells(data["cells"], q=int(data["q"]))


def spectrum_of_grid(grid: GeneratorGrid) -> SpectrumSet:
    """Exact frequency spectrum: Minkowski sum of all cell difference sets.

    The accumulation order is irrelevant; the result is symmetric and
    contains 0.
    """
    acc: set[Fraction] = {Fraction(0)}
    for cell in grid.iter_cells():
        diffs = {a - b for a in cell for b in cell}
        acc = {s + d for s in acc for d in diffs}
    return SpectrumSet(acc)


def degeneracy_map(grid: GeneratorGrid) -> dict[Fraction, int]:
    """Number of ordered index-pair tuples realising each frequency.

    Counts tuples ((k_c, j_c)) of indices into each cell's eigenvalue list
    with sum of (cell[k_c] - cell[j_c]) equal to the frequency, so equal
    eigenvalues at different indices are counted separately.  The counts
    sum to the grid's total representation count.
    """
    counts: Counter[Fraction] = Counter({Fraction(0): 1})
    for cell in grid.iter_cells():
        pair_diffs = Counter(a - b for a, b in product(cell, repeat=2))
        nxt: Counter[Fraction] = Counter()
        for s, cs in counts.items():
            for d, cd in pair_diffs.items():
                nxt[s + d] += cs * cd
        counts = nxt
    return dict(counts)


def degeneracy(grid: GeneratorGrid, omega: RationalLike) -> int:
    """deg(omega): 0 when omega lies outside the spectrum."""
    return degeneracy_map(grid).get(as_rational(omega), 0)


def combination_map(grid: GeneratorGrid) -> dict[Fraction, int]:
    """Number of distinct per-cell difference-value tuples per frequency.

    Unlike :func:`degeneracy_map`, equal difference values arising from
    different index pairs within one cell are merged, so this counts
    genuinely different ways to combine differences.  The size-maximal
    schemes have exactly one combination per frequency.
    """
    counts: Counter[Fraction] = Counter({Fraction(0): 1})
    for cell in grid.iter_cells():
        diffs = {a - b for a, b in product(cell, repeat=2)}
        nxt: Counter[Fraction] = Counter()
        for s, cs in counts.items():
            for d in diffs:
                nxt[s + d] += cs
        counts = nxt
    return dict(counts)


@dataclass(frozen=True)
class MultiSpectrum:
    """Cartesian product of per-variable spectra, never materialised."""

    factors: tuple[SpectrumSet, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("at least one factor required")

    @property
    def dimension(self) -> int:
        return len(self.factors)

    def total_size(self) -> int:
        return math.prod(len(f) for f in self.factors)

    def __contains__(self, point: Sequence[RationalLike]) -> bool:
        if len(point) != len(self.factors):
            return False
        return all(as_rational(v) in f for v, f in zip(point, self.factors))

    def iter_points(self) -> Iterator[tuple[Fraction, ...]]:
        return product(*(f.elements for f in self.factors))

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}


def multivariate_spectrum(grids: Sequence[GeneratorGrid]) -> MultiSpectrum:
    """One spectrum factor per variable; the product is kept implicit."""
    if not grids:
        raise ValueError("at least one grid required")
    return MultiSpectrum(tuple(spectrum_of_grid(g) for g in grids))
