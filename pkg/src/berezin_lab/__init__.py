"""Operator symbols on a finite set, the Berezin transform, and rank
analysis of the unitary-to-doubly-stochastic squared-modulus map."""

from .errors import (
    BerezinLabError,
    DimensionMismatchError,
    EigensolverFailure,
    NotApplicableError,
    NotDoublyStochasticError,
    NotSkewHermitianError,
    NotSquareError,
    NotTangentError,
    NotUnitaryError,
    ThetaDegenerateError,
    ZeroEntryError,
)
from .matrices import (
    DoublyStochastic,
    Unitary,
    equivalence_normal_form,
    haar_random_unitary,
    load_matrix,
    save_matrix,
    to_doubly_stochastic,
    validate_doubly_stochastic,
    validate_unitary,
)
from .spectral import FixedSpace, SpectralSummary, eigenspace_of_one, spectrum
from .submersion import (
    JacobianReport,
    SweepReport,
    jacobian_report,
    skew_hermitian_basis,
    submersion_sweep,
    symbol_pair_of_direction,
    tangent_direction,
)
from .symbols import (
    BerezinTransform,
    WeightedSpace,
    berezin_from_composition,
    build_berezin,
    c_symbol_to_operator,
    d_symbol_to_operator,
    e_subspace_basis,
    is_skew_c_symbol,
    operator_to_c_symbol,
    operator_to_d_symbol,
)
from .symmetry import (
    check_permutation_equivariance,
    check_shift_commutation,
    check_weyl_relations,
    fourier_eigenfunction_check,
    fourier_matrix,
    invariant_pair_count,
    isotypic_projectors,
    symmetric_family_matrix,
    verify_symmetric_family_spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
