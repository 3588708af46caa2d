"""Input validation helpers shared by the builders, transforms and checkers."""

import numpy as np

from .exceptions import HermiticityError, UnitarityError

GAP_MIN = 1e-8
TOL_SMALL = 1e-10  # 4x4 momentum-mode operators
TOL_LATTICE = 1e-8  # 4N lattice operators, limited by eigensolver conditioning


def default_tol(dim):
    return TOL_SMALL if dim <= 4 else TOL_LATTICE


def check_square(a, name="matrix"):
    """Return ``a`` as a complex 2-D square array or raise ``ValueError``."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {a.shape}")
    return a.astype(complex, copy=False)


def check_spinor_dim(a, name="matrix"):
    a = check_square(a, name)
    if a.shape[0] % 4:
        raise ValueError(f"{name} dimension {a.shape[0]} is not a multiple of 4")
    return a


def hermiticity_residual(a):
    """Largest entry of ``a - a^dag``, relative to the largest entry of ``a`` (floored at 1)."""
    a = np.asarray(a)
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    return float(np.max(np.abs(a - a.conj().T))) / scale if a.size else 0.0


def check_hermitian(a, tol=None, name="matrix"):
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    a = check_square(a, name)
    tol = default_tol(a.shape[0]) if tol is None else tol
    res = hermiticity_residual(a)
    if res > tol:
        raise HermiticityError(res, tol, name)
    return 0.5 * (a + a.conj().T)


def unitarity_residual(u, norm="spectral"):
    u = np.asarray(u)
    d = u.conj().T @ u - np.eye(u.shape[0])
    return float(np.linalg.norm(d, 2 if norm == "spectral" else "fro"))


def check_unitary(u, tol=None):
    """Raise :class:`UnitarityError` unless ``u^dag u = 1`` within ``tol`` (spectral norm)."""
    u = check_square(u, "unitary")
    tol = default_tol(u.shape[0]) if tol is None else tol
    res = unitarity_residual(u)
    if res > tol:
        raise UnitarityError(res, tol)
    return u


def check_is_fitted(estimator, attributes=("u_",)):
    from sklearn.exceptions import NotFittedError

    if not all(hasattr(estimator, a) for a in attributes):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; call 'fit' first."
        )
