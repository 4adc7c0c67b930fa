import random
from itertools import permutations

import pytest

from qnn_spectra.schemes import SchemeKind, build_scheme
from qnn_spectra.spectrum import GeneratorGrid, SpectrumSet, spectrum_of_grid
from qnn_spectra.transform import (
    GridBijection,
    apply,
    canonical_bijection,
    compose,
    invariance_report,
)


def random_grid(rng, rows, cols, q=1, span=3):
    dim = 2**q
    cells = [
        [[rng.randint(-span, span) for _ in range(dim)] for _ in range(cols)]
        for _ in range(rows)
    ]
    return GeneratorGrid.from_cells(cells, q=q)


def test_canonical_bijection_full_rectangle():
    b = canonical_bijection((3, 4), (2, 6))
    assert len(b.pairs) == 12
    assert b.source_of()[(0, 0)] == (0, 0)
    assert b.source_of()[(1, 5)] == (2, 3)  # row-major index 11


def test_canonical_bijection_identity():
    b = canonical_bijection((1, 1), (1, 1))
    assert b.pairs == (((0, 0), (0, 0)),)


def test_canonical_bijection_area_mismatch():
    with pytest.raises(ValueError, match="area mismatch"):
        canonical_bijection((2, 3), (4, 2))


def test_bijection_validation():
    with pytest.raises(ValueError, match="exactly once"):
        GridBijection((1, 2), (2, 1), (((0, 0), (0, 0)), ((0, 0), (1, 0))))
    with pytest.raises(ValueError, match="out of range"):
        GridBijection((1, 1), (1, 1), (((0, 1), (0, 0)),))
    with pytest.raises(ValueError):
        GridBijection.from_permutation((1, 2), (2, 1), [0, 0])


def test_apply_ternary_reshape():
    grid = build_scheme(SchemeKind.TERNARY, R=2, L=1)
    reshaped = apply(grid, canonical_bijection((2, 1), (1, 2)))
    assert (reshaped.rows, reshaped.cols) == (1, 2)
    z4 = SpectrumSet.symmetric_range(4)
    assert spectrum_of_grid(grid) == spectrum_of_grid(reshaped) == z4


def test_apply_identity_returns_equal_grid():
    grid = random_grid(random.Random(1), 2, 2)
    assert apply(grid, canonical_bijection((2, 2), (2, 2))) == grid


def test_apply_shape_mismatch():
    grid = random_grid(random.Random(2), 2, 2)
    with pytest.raises(ValueError, match="shape mismatch"):
        apply(grid, canonical_bijection((1, 4), (2, 2)))


def test_apply_random_rectangles():
    rng = random.Random(3)
    for _ in range(10):
        grid = random_grid(rng, 3, 4)
        out = apply(grid, canonical_bijection((3, 4), (2, 6)))
        assert spectrum_of_grid(out) == spectrum_of_grid(grid)


def test_invariance_report_hamming_shapes():
    grid = build_scheme(SchemeKind.HAMMING, R=2, L=3)
    report = invariance_report(grid, (3, 2))
    assert report["spectra_equal"]
    assert report["spectrum"] == SpectrumSet.symmetric_range(6)


def test_invariance_sequential_vs_parallel_exponential():
    seq = build_scheme(SchemeKind.SEQUENTIAL_EXPONENTIAL, R=1, L=3)
    report = invariance_report(seq, (3, 1))
    assert report["spectra_equal"]
    par = build_scheme(SchemeKind.PARALLEL_EXPONENTIAL, R=3, L=1)
    assert report["spectrum"] == spectrum_of_grid(par) == SpectrumSet.symmetric_range(8)


def test_invariance_single_cell():
    grid = random_grid(random.Random(4), 1, 1)
    assert invariance_report(grid, (1, 1))["spectra_equal"]


def test_every_bijection_preserves_spectrum_small_areas():
    rng = random.Random(5)
    for rows, cols in [(1, 3), (3, 1), (2, 2), (1, 4)]:
        grid = random_grid(rng, rows, cols, q=1)
        spec = spectrum_of_grid(grid)
        n = rows * cols
        targets = [(a, n // a) for a in range(1, n + 1) if n % a == 0]
        for target in targets:
            for perm in permutations(range(n)):
                b = GridBijection.from_permutation((rows, cols), target, list(perm))
                assert spectrum_of_grid(apply(grid, b)) == spec


def test_every_bijection_preserves_spectrum_q2():
    rng = random.Random(6)
    grid = random_grid(rng, 2, 1, q=2, span=2)
    spec = spectrum_of_grid(grid)
    for perm in permutations(range(2)):
        b = GridBijection.from_permutation((2, 1), (1, 2), list(perm))
        assert spectrum_of_grid(apply(grid, b)) == spec


def test_compose_matches_sequential_application():
    rng = random.Random(7)
    grid = random_grid(rng, 2, 2)
    perm1 = list(range(4))
    perm2 = list(range(4))
    rng.shuffle(perm1)
    rng.shuffle(perm2)
    b1 = GridBijection.from_permutation((2, 2), (4, 1), perm1)
    b2 = GridBijection.from_permutation((4, 1), (1, 4), perm2)
    assert apply(apply(grid, b1), b2) == apply(grid, compose(b2, b1))


def test_compose_shape_check():
    b1 = canonical_bijection((2, 2), (4, 1))
    b2 = canonical_bijection((2, 2), (1, 4))
    with pytest.raises(ValueError, match="chain"):
        compose(b2, b1)


def test_bijection_json_round_trip():
    b = GridBijection.from_permutation((2, 2), (1, 4), [2, 0, 3, 1])
    data = b.to_json()
    assert GridBijection.from_json(data) == b
    assert data["pairs"][0][0] == [1, 0]  # source coordinate of target (0,0)
