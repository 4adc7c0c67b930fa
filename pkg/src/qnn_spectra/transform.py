"""Area-preserving rearrangements of generator grids.

The frequency spectrum of a grid is a Minkowski sum over its cells, so
any bijection between the cells of two grids of equal area (with the
same per-cell qubit count) leaves the spectrum unchanged.  This module
builds such bijections, applies them, and reports exact before/after
spectra.  Only the spectrum is invariant; nothing is claimed about
Fourier coefficients, which depend on the trainable layers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .spectrum import GeneratorGrid, SpectrumSet, spectrum_of_grid

Coord = tuple[int, int]
Shape = tuple[int, int]

__all__ = ["GridBijection", "canonical_bijection", "apply", "compose", "invariance_report"]


@dataclass(frozen=True)
class GridBijection:
    """Pairing of every target cell with a unique source cell.

    ``pairs`` lists (source, target) coordinate pairs, (row, col),
    0-based.  Shapes are (rows, cols) in cell units; areas must match.
    """

    source_shape: Shape
    target_shape: Shape
    pairs: tuple[tuple[Coord, Coord], ...]

    def __post_init__(self):
        src_rows, src_cols = self.source_shape
        dst_rows, dst_cols = self.target_shape
        n = src_rows * src_cols
        if n != dst_rows * dst_cols:
            raise ValueError(
                f"area mismatch: {src_rows}x{src_cols} has {n} cells, "
                f"{dst_rows}x{dst_cols} has {dst_rows * dst_cols}"
            )
        sources = [p[0] for p in self.pairs]
        targets = [p[1] for p in self.pairs]
        if len(self.pairs) != n or len(set(sources)) != n or len(set(targets)) != n:
            raise ValueError("mapping must pair every cell exactly once")
        for (sr, sc), (tr, tc) in self.pairs:
            if not (0 <= sr < src_rows and 0 <= sc < src_cols):
                raise ValueError(f"source coordinate {(sr, sc)} out of range")
            if not (0 <= tr < dst_rows and 0 <= tc < dst_cols):
                raise ValueError(f"target coordinate {(tr, tc)} out of range")

    def source_of(self) -> dict[Coord, Coord]:
        return {target: source for source, target in self.pairs}

    def to_json(self) -> dict:
        return {
            "source_shape": list(self.source_shape),
            "target_shape": list(self.target_shape),
            "pairs": [[list(s), list(t)] for s, t in self.pairs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GridBijection":
        return cls(
            source_shape=tuple(data["source_shape"]),
            target_shape=tuple(data["target_shape"]),
            pairs=tuple(
                ((int(s[0]), int(s[1])), (int(t[0]), int(t[1]))) for s, t in data["pairs"]
            ),
        )

    @classmethod
    def from_permutation(cls, src: Shape, dst: Shape, perm: Sequence[int]) -> "GridBijection":
        """perm[i] = row-major source index feeding the i-th target cell."""
        n = src[0] * src[1]
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of the source cell indices")
        pairs = tuple(
            (divmod(perm[i], src[1]), divmod(i, dst[1])) for i in range(n)
        )
        return cls(source_shape=src, target_shape=dst, pairs=pairs)


def canonical_bijection(src: Shape, dst: Shape) -> GridBijection:
    """Row-major flattening of the source paired with row-major target order."""
    return GridBijection.from_permutation(src, dst, list(range(src[0] * src[1])))


def apply(grid: GeneratorGrid, bijection: GridBijection) -> GeneratorGrid:
    """Rearrange the grid's cells; the spectrum is unchanged by construction."""
    if bijection.source_shape != (grid.rows, grid.cols):
        raise ValueError(
            f"shape mismatch: bijection expects source {bijection.source_shape}, "
            f"grid is {(grid.rows, grid.cols)}"
        )
    source_of = bijection.source_of()
    rows, cols = bijection.target_shape
    cells = tuple(
        tuple(grid.cells[source_of[(r, c)][0]][source_of[(r, c)][1]] for c in range(cols))
        for r in range(rows)
    )
    return GeneratorGrid(q=grid.q, cells=cells)


def compose(second: GridBijection, first: GridBijection) -> GridBijection:
    """Bijection equivalent to applying ``first`` and then ``second``."""
    if first.target_shape != second.source_shape:
        raise ValueError("shapes do not chain")
    first_source = first.source_of()
    pairs = tuple(
        (first_source[mid], target) for mid, target in ((p[0], p[1]) for p in second.pairs)
    )
    return GridBijection(first.source_shape, second.target_shape, pairs)


def invariance_report(grid: GeneratorGrid, target: Shape) -> dict:
    """Transform via the canonical bijection and compare exact spectra."""
    bijection = canonical_bijection((grid.rows, grid.cols), target)
    transformed = apply(grid, bijection)
    original: SpectrumSet = spectrum_of_grid(grid)
    after = spectrum_of_grid(transformed)
    return {
        "spectra_equal": original == after,
        "spectrum": original,
        "transformed": transformed,
    }
