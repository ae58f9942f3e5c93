"""quadlie: exact-arithmetic toolkit for quadratic Lie algebras.

Canonical forms of skew-adjoint endomorphisms on orthogonal spaces,
one-dimensional-by-abelian double extensions (generalized oscillator
algebras), and the classification and isomorphism decisions built on them.
"""

__version__ = "0.1.0"

from .exact_field import Field, Polynomial, factor_poly, poly_gcd, poly_star, square_class
from .linalg import Matrix, Subspace, kernel_basis, minimal_polynomial
from .quadspace import OrthogonalSpace, SkewEndo, isotropy_report, skew_basis
from .skewcanon import (
    CanonicalBlock,
    CanonicalPair,
    caalim_convert,
    canonical_pair,
    canonical_pair_zero,
    four_part_split,
    primary_split,
    spectral_form,
)
from .liecore import (
    LieAlgebra,
    QuadraticLieAlgebra,
    centre,
    derived_series,
    dq_lower_bound_check,
    invariant_forms_basis,
    is_heisenberg,
    is_nilpotent,
    is_reduced,
    is_solvable,
    jacobi_check,
    lower_central_series,
    nilpotency_index,
    quadratic_dimension,
    series_duality_check,
    upper_central_series,
)
from .oscillator import (
    IsoWitness,
    LorentzKey,
    OscillatorData,
    build_double_extension,
    classify_nilpotent,
    decide_isometric,
    from_lambda_tuple,
    local_criteria,
    lorentz_normalize,
    phi_ts_form,
    phi_ts_isometry,
    recover_double_extension,
    skew_census,
    verify_iso_witness,
    verify_structure,
    witt1_certify,
)

__all__ = [
    "Field",
    "Polynomial",
    "factor_poly",
    "poly_gcd",
    "poly_star",
    "square_class",
    "Matrix",
    "Subspace",
    "kernel_basis",
    "minimal_polynomial",
    "OrthogonalSpace",
    "SkewEndo",
    "isotropy_report",
    "skew_basis",
    "CanonicalBlock",
    "CanonicalPair",
    "caalim_convert",
    "canonical_pair",
    "canonical_pair_zero",
    "four_part_split",
    "primary_split",
    "spectral_form",
    "LieAlgebra",
    "QuadraticLieAlgebra",
    "centre",
    "derived_series",
    "dq_lower_bound_check",
    "invariant_forms_basis",
    "is_heisenberg",
    "is_nilpotent",
    "is_reduced",
    "is_solvable",
    "jacobi_check",
    "lower_central_series",
    "nilpotency_index",
    "quadratic_dimension",
    "series_duality_check",
    "upper_central_series",
    "IsoWitness",
    "LorentzKey",
    "OscillatorData",
    "build_double_extension",
    "classify_nilpotent",
    "decide_isometric",
    "from_lambda_tuple",
    "local_criteria",
    "lorentz_normalize",
    "phi_ts_form",
    "phi_ts_isometry",
    "recover_double_extension",
    "skew_census",
    "verify_iso_witness",
    "verify_structure",
    "witt1_certify",
    "__version__",
]
