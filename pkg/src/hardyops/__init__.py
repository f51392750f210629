"""Exact operator-identity engine for the Hardy space of the unit circle.

The package decides, over Laurent-polynomial symbols with exact
complex-rational coefficients, when products and commutators of the
compression-type operators of the circle (Toeplitz, Hankel, dual Toeplitz,
singular integral and related block operators) stay inside their structured
classes — and cross-validates every symbol-side decision against two
independent oracles: exact operator application on finite Fourier
expansions, and double-precision finite sections.
"""

from .decisions import (
    CaseMatch,
    CommuteVerdict,
    InconsistencyError,
    RankClassification,
    SemiCommuteVerdict,
    adjoint_product_symbol,
    adtp_product,
    commute,
    dtt_commute,
    isometry_check,
    semi_commute,
    sio_commute,
    sio_normal,
    sio_product,
    sio_quasinormal,
    th_commute,
)
from .symbols import (
    EXACT,
    NUMERIC,
    ExactComplex,
    InnerMonomial,
    LaurentPoly,
    SymbolMatrix2,
    parse_symbol,
)

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "NUMERIC",
    "CaseMatch",
    "CommuteVerdict",
    "ExactComplex",
    "InconsistencyError",
    "InnerMonomial",
    "LaurentPoly",
    "RankClassification",
    "SemiCommuteVerdict",
    "SymbolMatrix2",
    "adjoint_product_symbol",
    "adtp_product",
    "commute",
    "dtt_commute",
    "isometry_check",
    "parse_symbol",
    "semi_commute",
    "sio_commute",
    "sio_normal",
    "sio_product",
    "sio_quasinormal",
    "th_commute",
    "__version__",
]
