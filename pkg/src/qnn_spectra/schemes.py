"""Encoding-scheme constructors, closed-form spectra and certification.

Each scheme fixes a base sub-generator (given by its eigenvalues) and a
grid of integer scaling factors, one per qubit block and layer.  For the
2-dimensional schemes the resulting spectrum has a closed form that is
checked here by exact set equality; the Golomb scheme is certified by
its spectrum size and the turnpike scheme by containment of a contiguous
integer range.  Certification recomputes everything from scratch, so a
passing report is a proof at the requested shape.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import golomb as golomb_mod
from . import turnpike as turnpike_mod
from .spectrum import (
    GeneratorGrid,
    RationalLike,
    SpectrumSet,
    as_eigenvalues,
    as_rational,
    contiguous_k,
    spectrum_of_grid,
)

__all__ = [
    "SchemeKind",
    "SchemeReport",
    "CertificationError",
    "build_scheme",
    "default_base",
    "predicted_spectrum",
    "certify",
    "uniqueness_check",
    "applicable_shapes",
    "scheme_table",
]


class SchemeKind(enum.Enum):
    HAMMING = "hamming"
    SEQUENTIAL_EXPONENTIAL = "sequential-exponential"
    PARALLEL_EXPONENTIAL = "parallel-exponential"
    BINARY = "binary"
    TERNARY = "ternary"
    EQUAL_LAYERS = "equal-layers"
    GOLOMB = "golomb"
    TURNPIKE = "turnpike"

    @classmethod
    def parse(cls, name: str) -> "SchemeKind":
        key = name.strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown scheme kind {name!r}")


TWO_DIM_KINDS = frozenset(
    {
        SchemeKind.HAMMING,
        SchemeKind.SEQUENTIAL_EXPONENTIAL,
        SchemeKind.PARALLEL_EXPONENTIAL,
        SchemeKind.BINARY,
        SchemeKind.TERNARY,
        SchemeKind.EQUAL_LAYERS,
    }
)
EQUAL_LAYER_KINDS = frozenset({SchemeKind.HAMMING, SchemeKind.EQUAL_LAYERS})


class CertificationError(Exception):
    """Computed spectrum disagrees with its prediction."""

    def __init__(self, message: str, missing=(), extra=()):
        super().__init__(message)
        self.missing = tuple(missing)
        self.extra = tuple(extra)


@dataclass(frozen=True)
class SchemeReport:
    """One certified row: construction, prediction, computed spectrum, flags."""

    kind: SchemeKind
    R: int
    L: int
    q: int
    grid: GeneratorGrid
    beta: str
    equal_layers: bool
    predicted: str
    predicted_set: SpectrumSet | None
    computed: SpectrumSet
    size: int
    k_contig: int
    maximal_in_size: bool
    maximal_in_k: bool

    def maximal_label(self) -> str:
        if self.maximal_in_size and self.maximal_in_k:
            return "size,K"
        if self.maximal_in_size:
            return "size"
        if self.maximal_in_k:
            return "K"
        return "-"

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "R": self.R,
            "L": self.L,
            "q": self.q,
            "grid": self.grid.to_json(),
            "beta": self.beta,
            "equal_layers": self.equal_layers,
            "predicted": self.predicted,
            "predicted_set": self.predicted_set.to_json() if self.predicted_set else None,
            "computed": self.computed.to_json(),
            "size": self.size,
            "k_contig": self.k_contig,
            "maximal_in_size": self.maximal_in_size,
            "maximal_in_k": self.maximal_in_k,
        }

    def csv_row(self) -> list:
        return [
            self.kind.value,
            self.R,
            self.L,
            2**self.q,
            self.beta,
            "yes" if self.equal_layers else "no",
            self.predicted,
            self.size,
            self.maximal_label(),
        ]


CSV_HEADER = ["kind", "R", "L", "dim", "beta", "equal", "omega", "size", "maximal"]


@lru_cache(maxsize=None)
def default_base(kind: SchemeKind, q: int = 1) -> tuple[Fraction, ...]:
    """Base eigenvalues used when the caller does not supply any."""
    if kind in TWO_DIM_KINDS:
        if q != 1:
            raise ValueError(f"{kind.value} uses 2-dimensional sub-generators (q=1)")
        return as_eigenvalues((0, 1))
    if q == 1:
        return as_eigenvalues((0, 1))
    if q == 2:
        if kind is SchemeKind.GOLOMB:
            ruler = golomb_mod.search_optimal(4, length_cap=8)[0]
            return as_eigenvalues(ruler.marks)
        return as_eigenvalues(turnpike_mod.solve(4).example)
    raise ValueError(
        f"no built-in default base for {kind.value} with q={q}; pass the eigenvalues explicitly"
    )


def _exponential_betas(axis_length: int) -> list[int]:
    # single factor degenerates to 1; the closed form Z_{2^A} needs A >= 2
    if axis_length == 1:
        return [1]
    return [2**i for i in range(axis_length - 1)] + [2 ** (axis_length - 1) + 1]


def _beta_grid(kind: SchemeKind, R: int, L: int, q: int, base) -> tuple[list[list[int]], str]:
    """Integer scaling factor per (row, col) plus a display string."""
    if kind in TWO_DIM_KINDS:
        rows = R
        if kind is SchemeKind.HAMMING:
            return [[1] * L for _ in range(rows)], "1"
        if kind is SchemeKind.EQUAL_LAYERS:
            b = 2 * L + 1
            return [[b ** (r - 1)] * L for r in range(1, rows + 1)], f"{b}^(r-1)"
        if kind is SchemeKind.TERNARY:
            return (
                [[3 ** ((l - 1) + L * (r - 1)) for l in range(1, L + 1)] for r in range(1, rows + 1)],
                "3^(l-1+L(r-1))",
            )
        if kind is SchemeKind.BINARY:
            return [[2 ** (r - 1)] for r in range(1, rows + 1)], "2^(r-1)"
        if kind is SchemeKind.PARALLEL_EXPONENTIAL:
            betas = _exponential_betas(R)
            return [[b] for b in betas], ",".join(str(b) for b in betas)
        betas = _exponential_betas(L)  # sequential-exponential
        return [betas], ",".join(str(b) for b in betas)
    if kind is SchemeKind.GOLOMB:
        ell = max(base) - min(base)
        b = 2 * int(ell) + 1
    else:  # turnpike
        b = turnpike_mod.k_of(base) + 1
    rows = R // q
    grid = [[b ** ((l - 1) + L * (r - 1)) for l in range(1, L + 1)] for r in range(1, rows + 1)]
    return grid, f"{b}^(l-1+L(r-1))"


def _validate_shape(kind: SchemeKind, R: int, L: int, q: int, base) -> tuple[Fraction, ...]:
    if R < 1 or L < 1:
        raise ValueError("R and L must be >= 1")
    values = as_eigenvalues(base)
    if kind in TWO_DIM_KINDS:
        if q != 1:
            raise ValueError(f"{kind.value} uses 2-dimensional sub-generators (q=1)")
        if len(values) != 2:
            raise ValueError(f"{kind.value} needs a 2-dimensional base, got {len(values)} eigenvalues")
        if max(values) - min(values) != 1:
            raise ValueError(
                f"{kind.value} requires a base with eigenvalue gap 1, got {max(values) - min(values)}"
            )
        if kind in (SchemeKind.BINARY, SchemeKind.PARALLEL_EXPONENTIAL) and L != 1:
            raise ValueError(f"{kind.value} is a single-layer scheme (L=1)")
        if kind is SchemeKind.SEQUENTIAL_EXPONENTIAL and R != 1:
            raise ValueError("sequential-exponential is a single-qubit scheme (R=1)")
        return values
    if q < 1 or len(values) != 2**q:
        raise ValueError(f"{kind.value} base must have exactly 2**q = {2**q} eigenvalues")
    if R % q != 0:
        raise ValueError(f"q={q} must divide R={R}")
    if any(v.denominator != 1 for v in values):
        raise ValueError(f"{kind.value} base must consist of integers")
    if kind is SchemeKind.GOLOMB and not golomb_mod.is_golomb(values):
        raise ValueError("golomb base is not a Golomb ruler")
    if kind is SchemeKind.TURNPIKE and turnpike_mod.k_of(values) == 0:
        raise ValueError("base set has no unit step")
    return values


def build_scheme(
    kind: SchemeKind, R: int, L: int, base=None, q: int = 1
) -> GeneratorGrid:
    """Grid for the scheme: cell (r, l) holds the base scaled by its factor."""
    values = _validate_shape(kind, R, L, q, base if base is not None else default_base(kind, q))
    betas, _ = _beta_grid(kind, R, L, q, values)
    cells = [[[b * v for v in values] for b in row] for row in betas]
    return GeneratorGrid.from_cells(cells, q=q)


def predicted_spectrum(
    kind: SchemeKind,
    R: int,
    L: int,
    q: int = 1,
    base_span: RationalLike = 1,
    base_k_or_k: int | None = None,
) -> SpectrumSet:
    """Closed-form spectrum where one exists; scales linearly with the base span.

    Golomb and turnpike predict only a size and a contiguous radius
    respectively, so they have no closed-form set.
    """
    span = as_rational(base_span)
    if kind is SchemeKind.HAMMING:
        radius = R * L
    elif kind is SchemeKind.BINARY:
        radius = 2**R - 1
    elif kind is SchemeKind.PARALLEL_EXPONENTIAL:
        radius = 2**R if R >= 2 else 1
    elif kind is SchemeKind.SEQUENTIAL_EXPONENTIAL:
        radius = 2**L if L >= 2 else 1
    elif kind is SchemeKind.TERNARY:
        radius = (3 ** (R * L) - 1) // 2
    elif kind is SchemeKind.EQUAL_LAYERS:
        radius = ((2 * L + 1) ** R - 1) // 2
    else:
        raise ValueError(f"{kind.value}: no closed form; use size/K bound")
    base = SpectrumSet.symmetric_range(radius)
    return base if span == 1 else base.scale(span)


def golomb_max_size(q: int, R: int, L: int) -> int:
    """Largest achievable spectrum size with 2**q-dimensional sub-generators."""
    return (4**q - 2**q + 1) ** ((R * L) // q)


@lru_cache(maxsize=None)
def _optimal_contiguous_radius(d: int) -> int | None:
    """Best K(S) over size-d sets; solved live when cheap, else the published value."""
    if d <= 6:
        return turnpike_mod.solve(d).best_k
    if d in turnpike_mod.KNOWN_OPTIMA:
        return turnpike_mod.KNOWN_OPTIMA[d][0]
    return None


def _maximality(kind, R, L, q, base, computed, size, k_contig) -> tuple[bool, bool]:
    if kind in TWO_DIM_KINDS:
        if kind in EQUAL_LAYER_KINDS:
            bound = ((2 * L + 1) ** R - 1) // 2
        else:
            bound = (3 ** (R * L) - 1) // 2
        return size == 2 * bound + 1, k_contig == bound
    if kind is SchemeKind.GOLOMB:
        max_in_size = size == golomb_max_size(q, R, L)
        # a size-maximal spectrum with no gaps cannot be beaten in K either
        contiguous = computed == SpectrumSet.symmetric_range(k_contig)
        return max_in_size, max_in_size and contiguous
    # turnpike: K-maximality is guaranteed exactly for the single-generator case
    max_in_size = size == golomb_max_size(q, R, L)
    optimal = _optimal_contiguous_radius(2**q)
    max_in_k = (
        L == 1 and q == R and optimal is not None and turnpike_mod.k_of(base) == optimal
    )
    return max_in_size, max_in_k


def certify(kind: SchemeKind, R: int, L: int, base=None, q: int = 1) -> SchemeReport:
    """Build the scheme, recompute its spectrum and check it against the claim."""
    values = _validate_shape(kind, R, L, q, base if base is not None else default_base(kind, q))
    grid = build_scheme(kind, R, L, values, q)
    _, beta_desc = _beta_grid(kind, R, L, q, values)
    computed = spectrum_of_grid(grid)
    size = len(computed)
    k_contig = contiguous_k(computed)

    predicted_set: SpectrumSet | None = None
    if kind in TWO_DIM_KINDS:
        span = max(values) - min(values)
        predicted_set = predicted_spectrum(kind, R, L, q, span)
        if computed != predicted_set:
            missing = [e for e in predicted_set if e not in computed]
            extra = [e for e in computed if e not in predicted_set]
            raise CertificationError(
                f"{kind.value} at R={R}, L={L}: computed spectrum differs from closed form "
                f"({len(missing)} missing, {len(extra)} extra); "
                f"missing[:8]={missing[:8]}, extra[:8]={extra[:8]}",
                missing=missing,
                extra=extra,
            )
        radius = int(predicted_set.elements[-1]) if span == 1 else predicted_set.elements[-1]
        predicted_desc = f"Z_{radius}" if span == 1 else f"{span}*Z_{R * L}"
    elif kind is SchemeKind.GOLOMB:
        expected = golomb_max_size(q, R, L)
        if size != expected:
            raise CertificationError(
                f"golomb at q={q}, R={R}, L={L}: |spectrum| = {size}, expected {expected}"
            )
        predicted_desc = f"size {expected}"
    else:  # turnpike
        _, radius = turnpike_mod.extended_construction(q, R, L, values)
        if not computed.issuperset_range(radius):
            missing = [v for v in range(-radius, radius + 1) if v not in computed]
            raise CertificationError(
                f"turnpike at q={q}, R={R}, L={L}: Z_{radius} not contained in spectrum; "
                f"missing[:8]={missing[:8]}",
                missing=missing,
            )
        predicted_desc = f"Z_{radius} contained"

    max_in_size, max_in_k = _maximality(kind, R, L, q, values, computed, size, k_contig)
    return SchemeReport(
        kind=kind,
        R=R,
        L=L,
        q=q,
        grid=grid,
        beta=beta_desc,
        equal_layers=kind in EQUAL_LAYER_KINDS,
        predicted=predicted_desc,
        predicted_set=predicted_set,
        computed=computed,
        size=size,
        k_contig=k_contig,
        maximal_in_size=max_in_size,
        maximal_in_k=max_in_k,
    )


def uniqueness_check(R: int, L: int, z) -> bool:
    """Exactly evaluate whether sum_r z_r * Z_L equals the full equal-layer range."""
    factors = [as_rational(v) for v in z]
    if len(factors) != R:
        raise ValueError(f"need exactly R={R} factors, got {len(factors)}")
    if any(v < 0 for v in factors):
        raise ValueError("factors must be nonnegative")
    if any(b < a for a, b in zip(factors, factors[1:])):
        raise ValueError("factors must be sorted ascending")
    z_l = SpectrumSet.symmetric_range(L)
    lhs = SpectrumSet((0,))
    for v in factors:
        lhs = lhs.minkowski(z_l.scale(v))
    rhs = SpectrumSet.symmetric_range(((2 * L + 1) ** R - 1) // 2)
    return lhs == rhs


def applicable_shapes(kind: SchemeKind, max_r: int, max_l: int, q: int = 1) -> list[tuple[int, int]]:
    """All (R, L) the kind admits within the given bounds."""
    shapes = []
    for r in range(1, max_r + 1):
        for l in range(1, max_l + 1):
            if kind in (SchemeKind.BINARY, SchemeKind.PARALLEL_EXPONENTIAL) and l != 1:
                continue
            if kind is SchemeKind.SEQUENTIAL_EXPONENTIAL and r != 1:
                continue
            if kind not in TWO_DIM_KINDS and r % q != 0:
                continue
            shapes.append((r, l))
    return shapes


def scheme_table(max_r: int = 2, max_l: int = 2) -> list[SchemeReport]:
    """One certified report per scheme kind and admissible shape."""
    reports = []
    for kind in SchemeKind:
        qs = [1]
        if kind in (SchemeKind.GOLOMB, SchemeKind.TURNPIKE) and max_r >= 2:
            qs.append(2)
        for q in qs:
            for r, l in applicable_shapes(kind, max_r, max_l, q):
                reports.append(certify(kind, r, l, q=q))
    return reports
