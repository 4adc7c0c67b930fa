from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnn_spectra.schemes import (
    CertificationError,
    SchemeKind,
    applicable_shapes,
    build_scheme,
    certify,
    default_base,
    golomb_max_size,
    predicted_spectrum,
    scheme_table,
    uniqueness_check,
)
from qnn_spectra.spectrum import (
    GeneratorGrid,
    SpectrumSet,
    contiguous_k,
    degeneracy_map,
    spectrum_of_grid,
)


def cells_as_ints(grid):
    return [[[int(v) for v in cell] for cell in row] for row in grid.cells]


# -- build_scheme ------------------------------------------------------------


def test_build_hamming_all_cells_equal():
    grid = build_scheme(SchemeKind.HAMMING, R=2, L=3, base=(0, 1))
    assert cells_as_ints(grid) == [[[0, 1]] * 3] * 2


def test_build_ternary_powers_of_three():
    grid = build_scheme(SchemeKind.TERNARY, R=2, L=1, base=(0, 1))
    assert cells_as_ints(grid) == [[[0, 1]], [[0, 3]]]
    grid = build_scheme(SchemeKind.TERNARY, R=2, L=2, base=(0, 1))
    assert cells_as_ints(grid) == [[[0, 1], [0, 3]], [[0, 9], [0, 27]]]


def test_build_equal_layers_constant_across_columns():
    grid = build_scheme(SchemeKind.EQUAL_LAYERS, R=2, L=2, base=(0, 1))
    assert cells_as_ints(grid) == [[[0, 1], [0, 1]], [[0, 5], [0, 5]]]


def test_build_binary():
    grid = build_scheme(SchemeKind.BINARY, R=3, L=1, base=(0, 1))
    assert cells_as_ints(grid) == [[[0, 1]], [[0, 2]], [[0, 4]]]


def test_build_exponentials_last_factor_bumped():
    seq = build_scheme(SchemeKind.SEQUENTIAL_EXPONENTIAL, R=1, L=3)
    assert cells_as_ints(seq) == [[[0, 1], [0, 2], [0, 5]]]
    par = build_scheme(SchemeKind.PARALLEL_EXPONENTIAL, R=3, L=1)
    assert cells_as_ints(par) == [[[0, 1]], [[0, 2]], [[0, 5]]]


def test_build_exponential_single_factor_degenerates():
    # the doubling pattern needs at least two factors; a lone factor stays 1
    seq = build_scheme(SchemeKind.SEQUENTIAL_EXPONENTIAL, R=1, L=1)
    assert cells_as_ints(seq) == [[[0, 1]]]


def test_build_pauli_normalised_base():
    grid = build_scheme(SchemeKind.TERNARY, R=1, L=2, base=(Fraction(-1, 2), Fraction(1, 2)))
    assert grid.cell(0, 1) == (Fraction(-3, 2), Fraction(3, 2))


def test_build_golomb_scaling():
    grid = build_scheme(SchemeKind.GOLOMB, R=4, L=1, base=(0, 1, 4, 6), q=2)
    assert cells_as_ints(grid) == [[[0, 1, 4, 6]], [[0, 13, 52, 78]]]


def test_build_turnpike_scaling():
    grid = build_scheme(SchemeKind.TURNPIKE, R=4, L=1, base=(0, 1, 4, 6), q=2)
    assert cells_as_ints(grid) == [[[0, 1, 4, 6]], [[0, 7, 28, 42]]]


def test_build_shape_constraints():
    with pytest.raises(ValueError, match="single-layer"):
        build_scheme(SchemeKind.BINARY, R=2, L=2)
    with pytest.raises(ValueError, match="single-layer"):
        build_scheme(SchemeKind.PARALLEL_EXPONENTIAL, R=2, L=3)
    with pytest.raises(ValueError, match="single-qubit"):
        build_scheme(SchemeKind.SEQUENTIAL_EXPONENTIAL, R=2, L=2)
    with pytest.raises(ValueError, match="gap 1"):
        build_scheme(SchemeKind.TERNARY, R=1, L=1, base=(0, 2))
    with pytest.raises(ValueError, match="q=1"):
        build_scheme(SchemeKind.HAMMING, R=2, L=1, q=2)
    with pytest.raises(ValueError, match="Golomb ruler"):
        build_scheme(SchemeKind.GOLOMB, R=2, L=1, base=(0, 1, 2, 3), q=2)
    with pytest.raises(ValueError, match="unit step"):
        build_scheme(SchemeKind.TURNPIKE, R=1, L=1, base=(0, 2))
    with pytest.raises(ValueError, match="divide"):
        build_scheme(SchemeKind.GOLOMB, R=3, L=1, base=(0, 1, 4, 6), q=2)


def test_default_bases():
    assert default_base(SchemeKind.TERNARY) == (0, 1)
    assert default_base(SchemeKind.GOLOMB, q=2) == (0, 1, 4, 6)
    assert default_base(SchemeKind.TURNPIKE, q=2) == (0, 1, 4, 6)
    with pytest.raises(ValueError, match="explicitly"):
        default_base(SchemeKind.GOLOMB, q=3)


# -- predicted_spectrum -------------------------------------------------------


def test_predicted_examples():
    assert predicted_spectrum(SchemeKind.HAMMING, 3, 2) == SpectrumSet.symmetric_range(6)
    assert predicted_spectrum(SchemeKind.TERNARY, 2, 2) == SpectrumSet.symmetric_range(40)
    assert predicted_spectrum(SchemeKind.EQUAL_LAYERS, 2, 2) == SpectrumSet.symmetric_range(12)
    assert predicted_spectrum(SchemeKind.BINARY, 4, 1) == SpectrumSet.symmetric_range(15)
    assert predicted_spectrum(SchemeKind.PARALLEL_EXPONENTIAL, 3, 1) == SpectrumSet.symmetric_range(8)
    assert predicted_spectrum(SchemeKind.SEQUENTIAL_EXPONENTIAL, 1, 4) == SpectrumSet.symmetric_range(16)


def test_predicted_single_factor_edge():
    assert predicted_spectrum(SchemeKind.SEQUENTIAL_EXPONENTIAL, 1, 1) == SpectrumSet.symmetric_range(1)
    assert predicted_spectrum(SchemeKind.PARALLEL_EXPONENTIAL, 1, 1) == SpectrumSet.symmetric_range(1)


def test_predicted_scales_with_span():
    pred = predicted_spectrum(SchemeKind.HAMMING, 3, 2, base_span=Fraction(1, 2))
    assert pred == SpectrumSet.symmetric_range(6).scale(Fraction(1, 2))


def test_predicted_no_closed_form():
    with pytest.raises(ValueError, match="no closed form"):
        predicted_spectrum(SchemeKind.GOLOMB, 2, 1, q=2)
    with pytest.raises(ValueError, match="no closed form"):
        predicted_spectrum(SchemeKind.TURNPIKE, 2, 1, q=2)


# -- certify -----------------------------------------------------------------


def test_certify_ternary_r1_l3():
    report = certify(SchemeKind.TERNARY, R=1, L=3)
    assert report.computed == SpectrumSet.symmetric_range(13)
    assert report.maximal_in_size and report.maximal_in_k
    assert report.size == 27 and report.k_contig == 13


def test_certify_binary_not_maximal():
    report = certify(SchemeKind.BINARY, R=3, L=1)
    assert report.computed == SpectrumSet.symmetric_range(7)
    assert not report.maximal_in_size and not report.maximal_in_k


def test_certify_hamming_not_maximal_beyond_single_qubit():
    report = certify(SchemeKind.HAMMING, R=2, L=3)
    assert report.computed == SpectrumSet.symmetric_range(6)
    assert not report.maximal_in_size and not report.maximal_in_k


def test_certify_hamming_single_qubit_is_equal_layer_optimum():
    report = certify(SchemeKind.HAMMING, R=1, L=2)
    assert report.maximal_in_k  # K = L is the best any equal-layer single-qubit model can do


def test_certify_equal_layers():
    report = certify(SchemeKind.EQUAL_LAYERS, R=2, L=2)
    assert report.computed == SpectrumSet.symmetric_range(12)
    assert report.maximal_in_size and report.maximal_in_k


def test_certify_golomb_sizes():
    report = certify(SchemeKind.GOLOMB, R=2, L=1, base=(0, 1, 4, 6), q=2)
    assert report.size == 13 == golomb_max_size(2, 2, 1)
    assert report.maximal_in_size
    assert report.maximal_in_k  # order-4 ruler is perfect, so the spectrum has no gaps
    report = certify(SchemeKind.GOLOMB, R=4, L=1, base=(0, 1, 4, 6), q=2)
    assert report.size == 169
    assert report.maximal_in_size and not report.maximal_in_k  # beta=13 leaves gaps


def test_certify_turnpike():
    report = certify(SchemeKind.TURNPIKE, R=2, L=1, base=(0, 1, 4, 6), q=2)
    assert report.k_contig >= 6
    assert report.maximal_in_k  # single generator with an optimal base
    report = certify(SchemeKind.TURNPIKE, R=4, L=1, base=(0, 1, 4, 6), q=2)
    assert report.computed.issuperset_range(48)
    assert not report.maximal_in_k  # multi-block containment carries no maximality claim


def test_certify_coincides_at_1x1():
    hamming = certify(SchemeKind.HAMMING, R=1, L=1)
    ternary = certify(SchemeKind.TERNARY, R=1, L=1)
    assert hamming.computed == ternary.computed == SpectrumSet.symmetric_range(1)
    assert ternary.maximal_in_size and ternary.maximal_in_k


def test_certify_detects_wrong_prediction(monkeypatch):
    import qnn_spectra.schemes as schemes_mod

    monkeypatch.setattr(
        schemes_mod,
        "predicted_spectrum",
        lambda *a, **k: SpectrumSet.symmetric_range(99),
    )
    with pytest.raises(CertificationError) as err:
        certify(SchemeKind.HAMMING, R=1, L=1)
    assert err.value.missing  # carries the diff
    assert 99 in {int(m) for m in err.value.missing}


def test_report_json_and_csv():
    report = certify(SchemeKind.TERNARY, R=2, L=1)
    data = report.to_json()
    assert data["kind"] == "ternary"
    assert data["size"] == 9
    assert data["computed"]["elements"][0] == "-4"
    row = report.csv_row()
    assert row[0] == "ternary" and row[-1] == "size,K"


# -- uniqueness_check ---------------------------------------------------------


def test_uniqueness_examples():
    assert uniqueness_check(2, 1, [1, 3])
    assert not uniqueness_check(2, 1, [1, 2])
    assert uniqueness_check(3, 2, [1, 5, 25])


def test_uniqueness_validation():
    with pytest.raises(ValueError):
        uniqueness_check(2, 1, [1])
    with pytest.raises(ValueError):
        uniqueness_check(2, 1, [3, 1])
    with pytest.raises(ValueError):
        uniqueness_check(2, 1, [-1, 3])


def test_uniqueness_exhaustive_r2_l1():
    hits = [
        (z1, z2)
        for z1 in range(0, 11)
        for z2 in range(z1, 11)
        if uniqueness_check(2, 1, [z1, z2])
    ]
    assert hits == [(1, 3)]


# -- scheme_table -------------------------------------------------------------


def test_applicable_shapes():
    assert applicable_shapes(SchemeKind.BINARY, 2, 2) == [(1, 1), (2, 1)]
    assert applicable_shapes(SchemeKind.SEQUENTIAL_EXPONENTIAL, 2, 2) == [(1, 1), (1, 2)]
    assert applicable_shapes(SchemeKind.GOLOMB, 4, 1, q=2) == [(2, 1), (4, 1)]


def test_scheme_table_all_rows_certified():
    reports = scheme_table(2, 2)
    assert len(reports) > 10
    kinds = {r.kind for r in reports}
    assert kinds == set(SchemeKind)
    for r in reports:
        if r.predicted_set is not None:
            assert r.computed == r.predicted_set


def test_scheme_kind_parse():
    assert SchemeKind.parse("equal_layers") is SchemeKind.EQUAL_LAYERS
    assert SchemeKind.parse("Ternary") is SchemeKind.TERNARY
    with pytest.raises(ValueError):
        SchemeKind.parse("nope")


# -- invariant properties -------------------------------------------------


def test_ternary_degeneracy_free_off_zero():
    for r, l in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (4, 1), (1, 4)]:
        grid = build_scheme(SchemeKind.TERNARY, R=r, L=l)
        table = degeneracy_map(grid)
        assert all(count == 1 for w, count in table.items() if w != 0), (r, l)


@settings(max_examples=40)
@given(
    st.integers(1, 2),
    st.integers(1, 2),
    st.lists(st.integers(0, 6), min_size=2, max_size=2),
)
def test_equal_layer_bound_never_exceeded(r_count, layers, spans):
    spans = spans[:r_count]
    cells = [[[0, span]] * layers for span in spans]
    grid = GeneratorGrid.from_cells(cells, q=1)
    bound = ((2 * layers + 1) ** grid.rows - 1) // 2
    assert contiguous_k(spectrum_of_grid(grid)) <= bound


@settings(max_examples=40)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=4))
def test_arbitrary_layer_bound_never_exceeded(spans):
    cells = [[[0, span] for span in spans]]
    grid = GeneratorGrid.from_cells(cells, q=1)
    bound = (3 ** grid.area - 1) // 2
    assert contiguous_k(spectrum_of_grid(grid)) <= bound
