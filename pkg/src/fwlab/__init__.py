"""Foldy-Wouthuysen-type representation changes for Dirac Hamiltonians, with a
verification battery built around the wave-function reduction condition.
"""

__version__ = "0.1.0"

from .algebra import DiracMatrixSet, dirac_matrices, mat_exp, mat_inv_sqrt_psd, mat_sqrt_psd, sign_operator
from .estimators import FWTransformer
from .exceptions import ConfigurationError, FWLabError, NumericalPreconditionError
from .hamiltonians import ScenarioSpec, SplitHamiltonian, build_hamiltonian
from .lattice import FieldProfile, Lattice1D, make_lattice
from .transforms import METHODS, TransformResult, eriksen
from .verify import check_reduction

__all__ = [
    "__version__",
    "ConfigurationError",
    "DiracMatrixSet",
    "FWLabError",
    "FWTransformer",
    "FieldProfile",
    "Lattice1D",
    "METHODS",
    "NumericalPreconditionError",
    "ScenarioSpec",
    "SplitHamiltonian",
    "TransformResult",
    "build_hamiltonian",
    "check_reduction",
    "dirac_matrices",
    "eriksen",
    "make_lattice",
    "mat_exp",
    "mat_inv_sqrt_psd",
    "mat_sqrt_psd",
    "sign_operator",
]
