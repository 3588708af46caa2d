"""Verification battery: unitarity, block structure, spectra, the reduction
condition (with the exact Eriksen operator as oracle), BCH residuals and
power-law fits.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import commutator, lift_beta, mat_exp
from .exceptions import SpectralGapError, UnitarityError
from .validation import GAP_MIN, check_hermitian, check_spinor_dim, check_square, default_tol

TOL_DEGEN = 1e-9  # relative eigenvalue spacing that counts as degenerate


@dataclass(frozen=True)
class SpinorField:
    """A 4N-component state; ``upper``/``lower`` are the beta = +1 / -1 halves."""

    entries: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.entries, dtype=complex)
        if v.ndim != 1 or v.size % 4:
            raise ValueError(f"spinor field needs a 1-D array of length 4N, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("spinor field has non-finite entries")
        object.__setattr__(self, "entries", v)

    @property
    def dim(self):
        return self.entries.size

    @property
    def upper(self):
        return self.entries[: self.dim // 2]

    @property
    def lower(self):
        return self.entries[self.dim // 2 :]

    @property
    def norm(self):
        return float(np.linalg.norm(self.entries))


@dataclass
class EnergySplitEigensystem:
    """Eigensystem of a gapped Hamiltonian, sorted ascending and split by sign.

    ``groups`` partitions the eigen-indices into degeneracy groups; each group
    has a single sign.
    """

    energies: np.ndarray
    vectors: np.ndarray
    groups: list

    @property
    def positive_mask(self):
        return self.energies > 0

    @property
    def positive(self):
        idx = np.flatnonzero(self.positive_mask)
        return [(float(self.energies[i]), SpinorField(self.vectors[:, i])) for i in idx]

    @property
    def negative(self):
        idx = np.flatnonzero(~self.positive_mask)
        return [(float(self.energies[i]), SpinorField(self.vectors[:, i])) for i in idx]


def _degeneracy_groups(w, tol_degen):
    groups, start = [], 0
    for i in range(1, len(w) + 1):
        boundary = i == len(w) or (w[i] - w[i - 1]) > tol_degen * max(1.0, abs(w[i]))
        if boundary or np.sign(w[i - 1]) != np.sign(w[min(i, len(w) - 1)]):
            groups.append(np.arange(start, i))
            start = i
    return groups


def split_eigensystem(h, gap_min=GAP_MIN, tol_degen=TOL_DEGEN, tol=None):
    h = check_hermitian(check_spinor_dim(h, "Hamiltonian"), tol, "Hamiltonian")
    w, v = np.linalg.eigh(h)
    k = int(np.argmin(np.abs(w)))
    if abs(w[k]) < gap_min:
        raise SpectralGapError(w[k], gap_min)
    return EnergySplitEigensystem(w, v, _degeneracy_groups(w, tol_degen))


def check_unitary(u, norm="spectral"):
    """``||U^dag U - 1||`` in the spectral (default) or Frobenius norm."""
    u = check_square(u, "unitary")
    d = u.conj().T @ u - np.eye(u.shape[0])
    if norm == "spectral":
        return float(np.linalg.norm(d, 2))
    if norm == "fro":
        return float(np.linalg.norm(d, "fro"))
    raise ValueError(f"norm must be 'spectral' or 'fro', got {norm!r}")


def off_block_norm(h):
    """Spectral norm of the upper-right (beta-odd) block."""
    h = check_spinor_dim(h)
    half = h.shape[0] // 2
    return float(np.linalg.norm(h[:half, half:], 2))


def check_block_diagonal(h):
    """``||[beta, H]|| / ||H||`` (spectral norms); zero for an even operator."""
    h = check_spinor_dim(h)
    scale = np.linalg.norm(h, 2)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(commutator(lift_beta(h.shape[0]), h), 2) / scale)


def subspace_distance(a, b):
    """Sine of the largest principal angle between the column spans of ``a`` and ``b``."""
    qa = np.linalg.qr(a)[0]
    qb = np.linalg.qr(b)[0]
    # ||(1 - P_b) Q_a|| keeps full precision for nearly equal subspaces
    return float(np.linalg.norm(qa - qb @ (qb.conj().T @ qa), 2))


@dataclass
class ReductionVerdict:
    passed: bool
    max_lower_residual: float
    max_upper_residual: float
    max_oracle_mismatch: float
    max_subspace_distance: float
    tol_reduction: float
    unitarity_residual: float
    per_state: list = field(default_factory=list, repr=False)
    per_group: list = field(default_factory=list, repr=False)

    def summary(self):
        keys = ("passed", "max_lower_residual", "max_upper_residual", "max_oracle_mismatch",
                "max_subspace_distance", "tol_reduction", "unitarity_residual")
        return {k: getattr(self, k) for k in keys}


def check_reduction(u, h, tol_reduction=None, tol_unitary=None, gap_min=GAP_MIN,
                    tol_degen=TOL_DEGEN, oracle=None):
    """Test the wave-function reduction condition for the map ``psi -> U psi``.

    Positive-energy eigenstates must land in the upper spinor and negative
    ones in the lower spinor.  Beyond that nullity test, each degeneracy group
    ``V_g`` is compared with the exact operator: ``||(U - U_E) V_g||``.  The
    same eigenvectors feed both maps, so the comparison is blind to the
    eigensolver's phases and to rotations inside a degenerate group, yet it
    still sees a spin rotation within the doublet, which a subspace comparison
    cannot.  The principal-angle distance between ``span(U V_g)`` and
    ``span(U_E V_g)`` is recorded alongside as a diagnostic.
    """
    from .transforms import eriksen

    h = check_hermitian(check_spinor_dim(h, "Hamiltonian"), name="Hamiltonian")
    u = check_square(u, "unitary")
    if u.shape != h.shape:
        raise ValueError(f"operator shape {u.shape} does not match Hamiltonian {h.shape}")
    dim = h.shape[0]
    tol_reduction = default_tol(dim) if tol_reduction is None else tol_reduction
    tol_unitary = default_tol(dim) if tol_unitary is None else tol_unitary
    unit_res = check_unitary(u)
    if unit_res > tol_unitary:
        raise UnitarityError(unit_res, tol_unitary)
    eig = split_eigensystem(h, gap_min, tol_degen)
    u_e = eriksen(h, gap_min).u if oracle is None else oracle
    half = dim // 2
    mapped = u @ eig.vectors
    diff = (u - u_e) @ eig.vectors
    per_state, per_group = [], []
    lower_max = upper_max = mismatch_max = angle_max = 0.0
    for g, idx in enumerate(eig.groups):
        energy = float(eig.energies[idx[0]])
        positive = energy > 0
        for i in idx:
            col = mapped[:, i]
            wrong = np.linalg.norm(col[half:] if positive else col[:half])
            per_state.append({"index": int(i), "energy": float(eig.energies[i]),
                              "sign": "+" if positive else "-", "group": g, "residual": float(wrong)})
            if positive:
                lower_max = max(lower_max, wrong)
            else:
                upper_max = max(upper_max, wrong)
        mismatch = float(np.linalg.norm(diff[:, idx], 2))
        angle = subspace_distance(mapped[:, idx], (u_e @ eig.vectors)[:, idx])
        mismatch_max, angle_max = max(mismatch_max, mismatch), max(angle_max, angle)
        per_group.append({"group": g, "energy": energy, "size": int(len(idx)),
                          "oracle_mismatch": mismatch, "subspace_distance": angle})
    passed = max(lower_max, upper_max, mismatch_max) < tol_reduction
    return ReductionVerdict(bool(passed), float(lower_max), float(upper_max), float(mismatch_max),
                            float(angle_max), float(tol_reduction), unit_res, per_state, per_group)


def check_spectrum_preserved(h_in, h_out, relative=False):
    """Largest difference of the sorted spectra (optionally over ``max|E_in|``)."""
    a = check_hermitian(h_in, np.inf, "input Hamiltonian")
    b = check_hermitian(h_out, np.inf, "output Hamiltonian")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    wa, wb = np.linalg.eigvalsh(a), np.linalg.eigvalsh(b)
    res = float(np.max(np.abs(wa - wb)))
    if relative:
        res /= max(float(np.max(np.abs(wa))), np.finfo(float).tiny)
    return res


def bch_residual(s1, s2):
    """``(||e^{iS1} e^{iS2} - e^{i(S1+S2)}||, ||[S1, S2]|| / 2)`` in the spectral norm."""
    s1 = check_hermitian(s1, name="S1")
    s2 = check_hermitian(s2, name="S2")
    raw = np.linalg.norm(mat_exp(s1) @ mat_exp(s2) - mat_exp(s1 + s2), 2)
    return float(raw), float(0.5 * np.linalg.norm(commutator(s1, s2), 2))


def order_scaling_fit(samples):
    """Least-squares slope of ``log(residual)`` against ``log(parameter)``."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (parameter, residual) pairs")
    if len(arr) < 3:
        raise ValueError(f"need at least 3 samples, got {len(arr)}")
    if np.any(arr <= 0):
        raise ValueError("parameters and residuals must be strictly positive")
    return float(np.polyfit(np.log(arr[:, 0]), np.log(arr[:, 1]), 1)[0])
