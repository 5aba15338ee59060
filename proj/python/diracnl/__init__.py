"""Spectral solver for the 1-D Dirac operator with a rank-one non-local potential.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    BoundaryParams,
    Potential,
    OperatorSpec,
    CharFunEval,
    SpectrumEntry,
    Classification,
    RecoveredOperator,
    ClassJReport,
    delta_free,
    free_spectrum,
    classify,
    assemble,
    matrix_oracle,
    recover_single,
    recover_two_spectra_fourier,
    recover_two_spectra_cauchy,
    validate_operator,
    random_spec_json,
    __version__,
)

__all__ = [
    "BoundaryParams",
    "Potential",
    "OperatorSpec",
    "CharFunEval",
    "SpectrumEntry",
    "Classification",
    "RecoveredOperator",
    "ClassJReport",
    "delta_free",
    "free_spectrum",
    "classify",
    "assemble",
    "matrix_oracle",
    "recover_single",
    "recover_two_spectra_fourier",
    "recover_two_spectra_cauchy",
    "validate_operator",
    "random_spec_json",
    "__version__",
]
