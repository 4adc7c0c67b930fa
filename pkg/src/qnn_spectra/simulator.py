"""Floating-point statevector cross-check of exact spectra.

Instantiates concrete models from a generator grid: Haar-random trainable
unitaries wrapped around diagonal data-encoding layers and a random
Hermitian observable, giving a real scalar output f(x).  With an
all-integer grid, f is a trigonometric polynomial with 2*pi period, so
sampling it on enough equispaced points makes the discrete Fourier
transform recover its coefficients exactly (up to float error).  The
empirical support can then be compared against the exact spectrum at
tight tolerances.

The model map is deterministic in the seed and part of the external
contract: unitaries are drawn by QR-orthonormalising a complex Gaussian
matrix with the phase correction that makes the factorisation unique.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .spectrum import GeneratorGrid, SpectrumSet, spectrum_of_grid

EVAL_IMAG_TOL = 1e-10
UNITARITY_TOL = 1e-12
MAX_QUBITS = 10
MAX_MULTIVARIATE_RADIUS = 4

__all__ = [
    "SimModel",
    "FourierExtract",
    "SupportReport",
    "MultivariateReport",
    "haar_unitary",
    "random_model",
    "evaluate",
    "extract_fourier",
    "verify_support",
    "verify_multivariate",
]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian with every entry of magnitude <= 1."""
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        m[i, i] = rng.uniform(-1.0, 1.0)
        for j in range(i + 1, dim):
            entry = rng.uniform(0.0, 1.0) * np.exp(1j * rng.uniform(0.0, 2 * np.pi))
            m[i, j] = entry
            m[j, i] = np.conjugate(entry)
    return m


def _layer_eigenvalues(grid: GeneratorGrid, col: int) -> np.ndarray:
    """Diagonal of the full layer generator, first row as the leftmost tensor factor."""
    vals = np.zeros(1, dtype=np.int64)
    for row in range(grid.rows):
        cell = np.array([int(v) for v in grid.cell(row, col)], dtype=np.int64)
        vals = (vals[:, None] + cell[None, :]).reshape(-1)
    return vals


@dataclass(frozen=True, eq=False)
class SimModel:
    grid: GeneratorGrid
    unitaries: tuple[np.ndarray, ...]  # length L+1, dimension 2**R each
    observable: np.ndarray
    seed: int
    layer_eigs: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return 2**self.grid.qubits

    def with_observable(self, observable: np.ndarray) -> "SimModel":
        if not np.allclose(observable, observable.conj().T):
            raise ValueError("observable must be Hermitian")
        return replace(self, observable=np.asarray(observable, dtype=complex))

    def spectrum_radius(self) -> int:
        """Degree bound of f: sum over layers of the layer eigenvalue span."""
        return int(sum(int(e.max() - e.min()) for e in self.layer_eigs))


def random_model(grid: GeneratorGrid, seed: int) -> SimModel:
    """Deterministic model from a seed: Haar unitaries plus a random observable."""
    if not grid.all_integer():
        raise ValueError("simulator requires integer spectrum")
    if grid.qubits > MAX_QUBITS:
        raise ValueError(f"desk-scale limit: at most {MAX_QUBITS} qubits")
    rng = np.random.default_rng(seed)
    dim = 2**grid.qubits
    unitaries = tuple(haar_unitary(dim, rng) for _ in range(grid.cols + 1))
    for u in unitaries:
        residual = np.abs(u.conj().T @ u - np.eye(dim)).max()
        if residual > UNITARITY_TOL:
            raise ArithmeticError(f"unitarity residual {residual:.3e} exceeds {UNITARITY_TOL}")
    observable = _random_hermitian(dim, rng)
    eigs = tuple(_layer_eigenvalues(grid, col) for col in range(grid.cols))
    return SimModel(grid=grid, unitaries=unitaries, observable=observable, seed=seed, layer_eigs=eigs)


def evaluate(model: SimModel, x: float) -> float:
    """f(x) = <0| U(x)^dag M U(x) |0> with diagonal-phase encoding layers."""
    psi = model.unitaries[0][:, 0].copy()
    for eig, u in zip(model.layer_eigs, model.unitaries[1:]):
        psi *= np.exp(-1j * x * eig)
        psi = u @ psi
    value = np.vdot(psi, model.observable @ psi)
    if abs(value.imag) > EVAL_IMAG_TOL:
        raise ArithmeticError(
            f"imaginary residue {abs(value.imag):.3e} exceeds {EVAL_IMAG_TOL}"
        )
    return float(value.real)


@dataclass(frozen=True)
class FourierExtract:
    """Coefficients c_w of f over the window |w| <= k_max."""

    coefficients: dict[int, complex]
    grid_points: int
    k_max: int
    sample_mean_square: float

    def conjugate_asymmetry(self) -> float:
        """max |c_{-w} - conj(c_w)|; ~0 for a real-valued f."""
        return max(
            abs(self.coefficients[-w] - np.conjugate(self.coefficients[w]))
            for w in range(self.k_max + 1)
        )

    def parseval_residual(self) -> float:
        """|sum |c_w|^2 - mean f^2| over the sample grid."""
        power = sum(abs(c) ** 2 for c in self.coefficients.values())
        return abs(power - self.sample_mean_square)

    def support(self, tol: float) -> set[int]:
        return {w for w, c in self.coefficients.items() if abs(c) > tol}


def extract_fourier(model: SimModel, k_max: int, grid_points: int | None = None) -> FourierExtract:
    """DFT of f on >= 2*k_max+1 equispaced points over one period.

    Exact for trigonometric polynomials of degree <= k_max, which is
    guaranteed when k_max covers the model's spectrum radius.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    n = grid_points if grid_points is not None else 2 * k_max + 1
    if n < 2 * k_max + 1:
        raise ValueError(f"need at least 2*k_max+1 = {2 * k_max + 1} sample points, got {n}")
    xs = 2 * np.pi * np.arange(n) / n
    samples = np.array([evaluate(model, x) for x in xs])
    spectrum = np.fft.fft(samples) / n
    coefficients = {w: complex(spectrum[w % n]) for w in range(-k_max, k_max + 1)}
    return FourierExtract(
        coefficients=coefficients,
        grid_points=n,
        k_max=k_max,
        sample_mean_square=float(np.mean(samples**2)),
    )


@dataclass(frozen=True)
class SupportReport:
    max_leak: float
    attained: frozenset[int]
    passed: bool
    k_max: int
    tol: float

    def to_json(self) -> dict:
        return {
            "max_leak": self.max_leak,
            "attained": sorted(self.attained),
            "pass": self.passed,
            "k_max": self.k_max,
            "tol": self.tol,
        }


def _integer_spectrum(exact: SpectrumSet) -> set[int]:
    if any(e.denominator != 1 for e in exact):
        raise ValueError("support check needs an integer spectrum")
    return {int(e) for e in exact}


def verify_support(
    model: SimModel, exact: SpectrumSet, tol: float = 1e-9, k_max: int | None = None
) -> SupportReport:
    """Check that every coefficient outside the exact spectrum is ~0.

    The window defaults to covering both the claimed spectrum and the
    model's own degree bound, so a too-small claim shows up as leak.
    """
    allowed = _integer_spectrum(exact)
    radius = max((abs(w) for w in allowed), default=0)
    window = max(radius, model.spectrum_radius()) if k_max is None else k_max
    extract = extract_fourier(model, window)
    leaks = [abs(c) for w, c in extract.coefficients.items() if w not in allowed]
    max_leak = max(leaks, default=0.0)
    attained = frozenset(
        w for w in allowed if abs(w) <= window and abs(extract.coefficients[w]) > tol
    )
    return SupportReport(
        max_leak=float(max_leak),
        attained=attained,
        passed=max_leak <= tol,
        k_max=window,
        tol=tol,
    )


@dataclass(frozen=True)
class MultivariateReport:
    ansatz: str
    factors: tuple[SpectrumSet, ...]
    max_leak: float
    passed: bool
    seed: int
    tol: float

    def to_json(self) -> dict:
        return {
            "ansatz": self.ansatz,
            "factors": [f.to_json() for f in self.factors],
            "max_leak": self.max_leak,
            "pass": self.passed,
            "seed": self.seed,
            "tol": self.tol,
        }


def _sample_parallel(grids, seed, radii) -> np.ndarray:
    """f on a 2-D sample grid for the tensor-product layering of two variables."""
    g1, g2 = grids
    if g1.cols != g2.cols:
        raise ValueError("parallel layering needs the same number of layers per variable")
    rng = np.random.default_rng(seed)
    dim1, dim2 = 2**g1.qubits, 2**g2.qubits
    dim = dim1 * dim2
    layers = g1.cols
    unitaries = [haar_unitary(dim, rng) for _ in range(layers + 1)]
    observable = _random_hermitian(dim, rng)
    eigs1 = [_layer_eigenvalues(g1, c) for c in range(layers)]
    eigs2 = [_layer_eigenvalues(g2, c) for c in range(layers)]
    n1, n2 = 2 * radii[0] + 1, 2 * radii[1] + 1
    values = np.empty((n1, n2))
    for i in range(n1):
        x1 = 2 * np.pi * i / n1
        for j in range(n2):
            x2 = 2 * np.pi * j / n2
            psi = unitaries[0][:, 0].copy()
            for l in range(layers):
                phase = (x1 * eigs1[l])[:, None] + (x2 * eigs2[l])[None, :]
                psi *= np.exp(-1j * phase.reshape(-1))
                psi = unitaries[l + 1] @ psi
            value = np.vdot(psi, observable @ psi)
            if abs(value.imag) > EVAL_IMAG_TOL:
                raise ArithmeticError("imaginary residue exceeds tolerance")
            values[i, j] = value.real
    return values


def _sample_sequential(grids, seed, radii) -> np.ndarray:
    """f on a 2-D sample grid for per-variable blocks applied in sequence."""
    g1, g2 = grids
    if g1.qubits != g2.qubits:
        raise ValueError("sequential blocks share one register: equal qubit counts required")
    rng = np.random.default_rng(seed)
    dim = 2**g1.qubits
    blocks = []
    for g in (g1, g2):
        unitaries = [haar_unitary(dim, rng) for _ in range(g.cols + 1)]
        eigs = [_layer_eigenvalues(g, c) for c in range(g.cols)]
        blocks.append((unitaries, eigs))
    observable = _random_hermitian(dim, rng)
    n1, n2 = 2 * radii[0] + 1, 2 * radii[1] + 1
    values = np.empty((n1, n2))
    for i in range(n1):
        x1 = 2 * np.pi * i / n1
        for j in range(n2):
            x2 = 2 * np.pi * j / n2
            psi = None
            for (unitaries, eigs), x in zip(blocks, (x1, x2)):
                psi = unitaries[0] @ psi if psi is not None else unitaries[0][:, 0].copy()
                for eig, u in zip(eigs, unitaries[1:]):
                    psi *= np.exp(-1j * x * eig)
                    psi = u @ psi
            value = np.vdot(psi, observable @ psi)
            if abs(value.imag) > EVAL_IMAG_TOL:
                raise ArithmeticError("imaginary residue exceeds tolerance")
            values[i, j] = value.real
    return values


def verify_multivariate(
    grids: Sequence[GeneratorGrid], ansatz: str, seed: int, tol: float = 1e-9
) -> MultivariateReport:
    """2-D DFT support must sit inside the product of the univariate spectra.

    Both layerings ("parallel" tensor products and "sequential"
    per-variable blocks) are checked against the same exact product.
    """
    if ansatz not in ("parallel", "sequential"):
        raise ValueError("ansatz must be 'parallel' or 'sequential'")
    if not 1 <= len(grids) <= 2:
        raise ValueError("one or two variables supported")
    factors = tuple(spectrum_of_grid(g) for g in grids)
    allowed = [_integer_spectrum(f) for f in factors]
    radii = [max((abs(w) for w in a), default=0) for a in allowed]
    if any(r > MAX_MULTIVARIATE_RADIUS for r in radii):
        raise ValueError(
            f"per-variable radius limited to {MAX_MULTIVARIATE_RADIUS} for the 2-D transform"
        )
    if len(grids) == 1:
        model = random_model(grids[0], seed)
        report = verify_support(model, factors[0], tol=tol)
        return MultivariateReport(
            ansatz=ansatz,
            factors=factors,
            max_leak=report.max_leak,
            passed=report.passed,
            seed=seed,
            tol=tol,
        )
    sampler = _sample_parallel if ansatz == "parallel" else _sample_sequential
    values = sampler(tuple(grids), seed, radii)
    n1, n2 = values.shape
    spectrum = np.fft.fft2(values) / (n1 * n2)
    max_leak = 0.0
    for w1 in range(-radii[0], radii[0] + 1):
        for w2 in range(-radii[1], radii[1] + 1):
            if w1 in allowed[0] and w2 in allowed[1]:
                continue
            max_leak = max(max_leak, abs(spectrum[w1 % n1, w2 % n2]))
    return MultivariateReport(
        ansatz=ansatz,
        factors=factors,
        max_leak=float(max_leak),
        passed=max_leak <= tol,
        seed=seed,
        tol=tol,
    )
