"""Dirac matrices and Hermitian matrix functions.

All matrix functions go through a full Hermitian eigendecomposition, so the
principal branch is unambiguous and results are exact to roundoff at the
dimensions used here (a few hundred).
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import SpectralGapError
from .validation import GAP_MIN, check_hermitian

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _blocks(a, b, c, d):
    return np.block([[a, b], [c, d]]).astype(complex)


@dataclass(frozen=True)
class DiracMatrixSet:
    """The 4x4 Dirac-Pauli algebra.

    ``gamma5`` is ``-[[0, 1], [1, 0]]``; with this sign the Eriksen-Kolsrud
    operator ``j_matrix = i gamma5 beta`` gives the EK spin factor
    ``1 + i sigma.p / (E + m)`` and the EK->FW correction ``1 - i beta Sigma.p / (E + m)``.
    """

    beta: np.ndarray
    alpha_x: np.ndarray
    alpha_y: np.ndarray
    alpha_z: np.ndarray
    sigma_big: tuple
    pi_big: tuple
    gamma5: np.ndarray
    j_matrix: np.ndarray

    @property
    def alpha(self):
        return (self.alpha_x, self.alpha_y, self.alpha_z)

    @property
    def gamma(self):
        """Spatial gamma matrices ``gamma^i = beta alpha_i``."""
        return tuple(self.beta @ a for a in self.alpha)

    @property
    def identity(self):
        return np.eye(4, dtype=complex)


def dirac_matrices():
    z = np.zeros((2, 2))
    one = np.eye(2)
    beta = _blocks(one, z, z, -one)
    alpha = [_blocks(z, s, s, z) for s in PAULI]
    sigma_big = tuple(_blocks(s, z, z, s) for s in PAULI)
    pi_big = tuple(beta @ s for s in sigma_big)
    gamma5 = -_blocks(z, one, one, z)
    j_matrix = 1j * gamma5 @ beta
    return DiracMatrixSet(
        beta=beta,
        alpha_x=alpha[0],
        alpha_y=alpha[1],
        alpha_z=alpha[2],
        sigma_big=sigma_big,
        pi_big=pi_big,
        gamma5=gamma5,
        j_matrix=j_matrix,
    )


def dot3(mats, vec):
    """``sum_i mats[i] * vec[i]`` for a 3-vector of c-numbers."""
    return sum(m * v for m, v in zip(mats, vec))


def hermitian_function(h, func, tol=None):
    """Apply ``func`` to the eigenvalues of Hermitian ``h``: ``V f(w) V^dag``."""
    h = check_hermitian(h, tol)
    w, v = np.linalg.eigh(h)
    return (v * func(w)) @ v.conj().T


def mat_exp(g, tol=None):
    """``exp(i g)`` for Hermitian ``g``."""
    g = check_hermitian(g, tol, "exponent generator")
    w, v = np.linalg.eigh(g)
    return (v * np.exp(1j * w)) @ v.conj().T


def _positive_spectrum(h, gap_min, tol):
    h = check_hermitian(h, tol)
    w, v = np.linalg.eigh(h)
    if w[0] < gap_min:
        raise SpectralGapError(w[0], gap_min)
    return w, v


def mat_sqrt_psd(h, gap_min=GAP_MIN, tol=None):
    """Principal square root of a Hermitian matrix with spectrum above ``gap_min``."""
    w, v = _positive_spectrum(h, gap_min, tol)
    return (v * np.sqrt(w)) @ v.conj().T


def mat_inv_sqrt_psd(h, gap_min=GAP_MIN, tol=None):
    w, v = _positive_spectrum(h, gap_min, tol)
    return (v / np.sqrt(w)) @ v.conj().T


def sign_operator(h, gap_min=GAP_MIN, tol=None):
    """``lam = h (h^2)^(-1/2)``, evaluated spectrally as ``sum_k sign(E_k) |k><k|``."""
    h = check_hermitian(h, tol, "Hamiltonian")
    w, v = np.linalg.eigh(h)
    k = int(np.argmin(np.abs(w)))
    if abs(w[k]) < gap_min:
        raise SpectralGapError(w[k], gap_min)
    lam = (v * np.sign(w)) @ v.conj().T
    return 0.5 * (lam + lam.conj().T)


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


def lift_beta(dim):
    """``beta`` acting on a ``dim = 4N`` spinor-outermost space."""
    n = dim // 4
    return np.kron(dirac_matrices().beta, np.eye(n))
