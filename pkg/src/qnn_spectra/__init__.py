"""Exact frequency-spectrum calculus for data-encoding quantum models.

Submodules:
  spectrum   - rational set algebra (Minkowski sums, difference sets,
               degeneracy, contiguous radius) and generator grids
  schemes    - encoding-scheme constructors with certified closed forms
  golomb     - Golomb ruler checks and desk-scale optimal search
  turnpike   - exact relaxed-turnpike solver with checkpointing
  transform  - area-preserving grid rearrangements
  simulator  - floating-point statevector cross-check via DFT
  cli        - command-line surface (`qnn-spectra`)
"""
from .spectrum import (
    GeneratorGrid,
    MultiSpectrum,
    Rational,
    SpectrumSet,
    contiguous_k,
    degeneracy,
    degeneracy_map,
    delta,
    minkowski_sum,
    multivariate_spectrum,
    scale,
    spectrum_of_grid,
)
from .schemes import (
    CertificationError,
    SchemeKind,
    SchemeReport,
    build_scheme,
    certify,
    predicted_spectrum,
    scheme_table,
    uniqueness_check,
)
from .golomb import Ruler, is_golomb, ruler_stats, search_optimal
from .turnpike import (
    KNOWN_OPTIMA,
    TurnpikeSolution,
    extended_construction,
    k_of,
    solve,
    verify_reference,
)
from .transform import GridBijection, canonical_bijection, invariance_report
from .simulator import (
    FourierExtract,
    SimModel,
    extract_fourier,
    random_model,
    verify_multivariate,
    verify_support,
)

__version__ = "0.1.0"
