"""Representation-changing unitaries and the Hamiltonians they produce.

Every function returns a :class:`TransformResult` whose ``h_transformed`` is
``u H u^dag`` (static fields, so no time-derivative term), except for the
perturbative operators, which return the truncated series for the Hamiltonian
term by term.  Operator products keep the factor order of the closed forms;
symmetrization only appears where a formula has an anticommutator.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    commutator,
    dirac_matrices,
    dot3,
    lift_beta,
    mat_exp,
    mat_inv_sqrt_psd,
    mat_sqrt_psd,
    sign_operator,
)
from .exceptions import (
    AnticommutationError,
    CommutingPreconditionError,
    ConfigurationError,
    DegenerateMomentumError,
    EriksenDegeneracyError,
    SpectralGapError,
    SusyViolationError,
)
from .hamiltonians import SplitHamiltonian
from .lattice import (
    FieldProfile,
    momentum_function,
    momentum_operator,
    position_multiplier,
    profile_values,
)
from .validation import GAP_MIN, check_hermitian, default_tol

METHODS = (
    "u0-free",
    "fw-commuting",
    "eriksen",
    "stepwise",
    "perturbative-electrostatic",
    "perturbative-gravity",
    "su2-susy",
    "ek",
    "ek-to-fw",
    "melosh",
    "melosh-to-fw",
    "heidenreich",
)


@dataclass
class TransformResult:
    u: np.ndarray
    h_transformed: np.ndarray
    method: str
    metadata: dict = field(default_factory=dict)
    # matrices produced along the way (not serialized into reports)
    intermediates: dict = field(default_factory=dict, repr=False)


@dataclass
class StepwiseSchedule:
    max_steps: int
    generators: list


def conjugate(u, h):
    """``u h u^dag``, symmetrized."""
    out = u @ h @ u.conj().T
    return 0.5 * (out + out.conj().T)


def _matrix(h):
    if isinstance(h, SplitHamiltonian):
        return h.h_full
    return check_hermitian(h, name="Hamiltonian")


def _lift(d, dim):
    return np.kron(d, np.eye(dim // 4))


def _free_mode_hamiltonian(mass, momentum):
    d = dirac_matrices()
    return mass * d.beta + dot3(d.alpha, np.asarray(momentum, dtype=float))


def u0_free(mass, momentum=(0.0, 0.0, 0.0), lattice=None):
    """Free-particle FW operator ``sqrt((E+m)/2E) (1 + beta alpha.p / (E+m))``.

    With ``lattice`` given, ``E`` and ``p`` are the spectral lattice operators
    and only ``alpha_x p`` appears.
    """
    d = dirac_matrices()
    m = float(mass)
    if lattice is None:
        p = np.asarray(momentum, dtype=float)
        e = np.sqrt(m * m + p @ p)
        h = _free_mode_hamiltonian(m, p)
        u = np.sqrt((e + m) / (2 * e)) * (np.eye(4) + d.beta @ dot3(d.alpha, p) / (e + m))
        meta = {"energy": float(e)}
    else:
        energy = lambda p: np.sqrt(m * m + p * p)
        scalar = momentum_function(lattice, lambda p: np.sqrt((energy(p) + m) / (2 * energy(p))))
        odd = momentum_function(lattice, lambda p: p / np.sqrt(2 * energy(p) * (energy(p) + m)))
        u = np.kron(np.eye(4), scalar) + np.kron(d.beta @ d.alpha_x, odd)
        h = np.kron(d.beta, m * np.eye(lattice.n_points)) + np.kron(d.alpha_x, momentum_operator(lattice))
        meta = {"n_points": lattice.n_points}
    return TransformResult(u, conjugate(u, h), "u0-free", meta)


def commutator_tolerance(even, odd, rel=1e-10):
    return rel * np.linalg.norm(even, 2) * np.linalg.norm(odd, 2)


def fw_commuting(split, tol_commute=None):
    """Exact FW operator for ``[even, odd] = 0``.

    ``U = sqrt((E+m)/2E) (1 + beta O / (E+m))`` with ``E = sqrt(m^2 + O^2)``.
    """
    even, odd, beta, m = split.even_part, split.odd_part, split.beta, split.mass
    tol = commutator_tolerance(even, odd) if tol_commute is None else tol_commute
    cnorm = np.linalg.norm(commutator(even, odd), 2)
    if cnorm > tol:
        raise CommutingPreconditionError(cnorm, tol)
    o2 = check_hermitian(odd @ odd, name="odd^2")
    w, v = np.linalg.eigh(o2)
    w = np.clip(w, 0.0, None)
    e = np.sqrt(m * m + w)
    prefactor = (v * np.sqrt((e + m) / (2 * e))) @ v.conj().T
    inv_e_plus_m = (v / (e + m)) @ v.conj().T
    u = prefactor @ (np.eye(split.dim) + beta @ odd @ inv_e_plus_m)
    energy = (v * e) @ v.conj().T
    h_t = conjugate(u, split.h_full)
    expected = beta @ energy + even
    meta = {
        "commutator_norm": float(cnorm),
        "tol_commute": float(tol),
        "closed_form_residual": float(np.linalg.norm(h_t - expected, 2)),
    }
    return TransformResult(u, h_t, "fw-commuting", meta, {"energy": energy})


def _eriksen_pieces(h, gap_min):
    beta = lift_beta(h.shape[0])
    lam = sign_operator(h, gap_min)
    blam = beta @ lam + lam @ beta
    two_plus = 2 * np.eye(h.shape[0]) + blam
    w = np.linalg.eigvalsh(0.5 * (two_plus + two_plus.conj().T))
    if w[0] < gap_min:
        raise EriksenDegeneracyError(w[0], gap_min)
    return beta, lam, blam, two_plus


def eriksen(h, gap_min=GAP_MIN):
    """Exact one-step FW operator ``U_E = (2 + beta lam + lam beta)^(-1/2) (1 + beta lam)``."""
    h = _matrix(h)
    beta, lam, blam, two_plus = _eriksen_pieces(h, gap_min)
    x = np.eye(h.shape[0]) + beta @ lam
    u = mat_inv_sqrt_psd(two_plus, gap_min) @ x
    # polar form X (X^dag X)^(-1/2) of the same operator
    polar = x @ mat_inv_sqrt_psd(x.conj().T @ x, gap_min)
    meta = {"polar_form_residual": float(np.linalg.norm(u - polar, 2))}
    return TransformResult(u, conjugate(u, h), "eriksen", meta, {"sign": lam, "beta_lam_sym": blam})


def normalization_operator(h, gap_min=GAP_MIN):
    """``A_+ = A_- = [1/2 + 1/4 (beta lam + lam beta)]^(1/2)``."""
    h = _matrix(h)
    _, _, blam, _ = _eriksen_pieces(h, gap_min)
    return mat_sqrt_psd(0.5 * np.eye(h.shape[0]) + 0.25 * blam, gap_min)


def odd_part(h):
    beta = lift_beta(h.shape[0])
    return 0.5 * (h - beta @ h @ beta)


def stepwise_fw(split, schedule_depth=3):
    """Iterated FW steps with ``S_k = -i beta O_{k-1} / (2m)``.

    Each ``O_{k-1}`` is the odd part of the Hamiltonian after ``k-1`` exact
    conjugations; the composed operator is ``U_n ... U_2 U_1``.
    """
    if schedule_depth not in (1, 2, 3):
        raise ConfigurationError(f"schedule_depth must be 1, 2 or 3, got {schedule_depth}")
    m, beta = split.mass, split.beta
    h = split.h_full
    u = np.eye(split.dim, dtype=complex)
    gens = []
    odd_norms = []
    for _ in range(schedule_depth):
        s = -1j * beta @ odd_part(h) / (2 * m)
        s = 0.5 * (s + s.conj().T)
        gens.append(s)
        step = mat_exp(s)
        h = conjugate(step, h)
        u = step @ u
        odd_norms.append(float(np.linalg.norm(odd_part(h), 2)))
    meta = {
        "steps": schedule_depth,
        "recipe": "S_k = -i beta O_{k-1} / (2m)",
        "odd_norm_per_step": odd_norms,
    }
    return TransformResult(u, h, "stepwise", meta), StepwiseSchedule(schedule_depth, gens)


def lattice_derivative(p, f):
    """``f' = i [p, f]``: the derivative consistent with the lattice commutator.

    On band-limited states it equals multiplication by the analytic
    derivative; near the band edge the lattice ``[p, f]`` differs, and the
    expansions below are operator identities in ``[p, f]``.
    """
    return 1j * (p @ f - f @ p)


def perturbative_electrostatic(spec):
    """Truncated FW operator and Hamiltonian for ``H = beta m + alpha_x p + e A0(x)``.

    Linear in ``e``, through ``p^2/m^2``; ``grad A0`` becomes the lattice
    derivative ``i [p, A0]``.
    """
    if spec.scenario != "electrostatic" or spec.backend != "lattice":
        raise ConfigurationError("perturbative-electrostatic needs an electrostatic lattice scenario")
    d = dirac_matrices()
    lat, m, e = spec.lattice, spec.mass, spec.coupling
    n = lat.n_points
    prof = spec.profiles["A0"]
    p = momentum_operator(lat)
    a0 = position_multiplier(lat, prof)
    da0 = lattice_derivative(p, a0)
    eye = np.eye(4 * n)
    # (alpha.p)(alpha.grad A0) - (alpha.grad A0)(alpha.p) -> [p, A0'] in 1-D
    comm = np.kron(np.eye(4), p @ da0 - da0 @ p)
    u = (
        eye
        + np.kron(d.beta @ d.alpha_x, p) / (2 * m)
        - np.kron(np.eye(4), p @ p) / (8 * m**2)
        - 1j * e / (4 * m**2) * np.kron(d.alpha_x, da0)
        - 1j * e / (16 * m**3) * np.kron(d.beta, np.eye(n)) @ comm
    )
    h_t = (
        np.kron(d.beta, m * np.eye(n) + p @ p / (2 * m))
        + e * np.kron(np.eye(4), a0)
        + 1j * e / (8 * m**2) * comm
    )
    meta = {"coupling_order": 1, "momentum_order": 2, "truncation_tolerance": electrostatic_truncation(spec)}
    return TransformResult(u, 0.5 * (h_t + h_t.conj().T), "perturbative-electrostatic", meta)


def perturbative_gravity(spec):
    """First order in ``V-1``, ``F-1`` and their derivatives, through ``p^2/m^2``.

    In 1-D the ``Sigma . (grad x p)`` terms vanish and divergences become second
    derivatives.
    """
    if spec.scenario != "gravity" or spec.backend != "lattice":
        raise ConfigurationError("perturbative-gravity needs a gravity lattice scenario")
    d = dirac_matrices()
    lat, m = spec.lattice, spec.mass
    n = lat.n_points
    flat = FieldProfile("constant", 1.0)
    vprof, fprof = spec.profiles.get("V", flat), spec.profiles.get("F", flat)
    v = np.diag(profile_values(lat, vprof)).astype(complex)
    f = np.diag(profile_values(lat, fprof)).astype(complex)
    p = momentum_operator(lat)
    v2 = lattice_derivative(p, lattice_derivative(p, v))
    f2 = lattice_derivative(p, lattice_derivative(p, f))
    p2 = p @ p
    one = np.eye(n)
    fv = f - v
    u = (
        np.eye(4 * n)
        + np.kron(d.beta @ d.alpha_x, p) / (2 * m)
        - np.kron(np.eye(4), p2) / (8 * m**2)
        + np.kron(d.beta @ d.alpha_x, fv @ p + p @ fv) / (4 * m)
        - np.kron(np.eye(4), fv @ p2 + 2 * p @ fv @ p + p2 @ fv) / (16 * m**2)
    )
    vm1, fm1 = v - one, f - one
    scalar = (
        m * one
        + p2 / (2 * m)
        + m * vm1
        - (p2 @ vm1 + vm1 @ p2) / (4 * m)
        + (p2 @ fm1 + fm1 @ p2) / (2 * m)
        - v2 / (8 * m)
        + f2 / (4 * m)
    )
    h_t = np.kron(d.beta, scalar)
    meta = {"potential_order": 1, "momentum_order": 2, "truncation_tolerance": gravity_truncation(spec)}
    return TransformResult(u, 0.5 * (h_t + h_t.conj().T), "perturbative-gravity", meta)


def _max_momentum(lat):
    return np.pi * lat.n_points / lat.length


def electrostatic_truncation(spec, safety=10.0):
    """A-priori size of the first omitted terms of the electrostatic expansion."""
    lat, m, e = spec.lattice, spec.mass, abs(spec.coupling)
    x = _max_momentum(lat) / m
    a0, g1, g2 = (np.max(np.abs(profile_values(lat, spec.profiles["A0"], k))) for k in (0, 1, 2))
    linear = e * (g1 * x**2 / m**2 + g2 * x / m**3)
    # second order in e: the potential shifts the gap seen by the gradient term
    quadratic = e**2 * a0 * g1 / m**3 + (e * g1 / m**2) ** 2
    field_terms = linear + quadratic
    return float(safety * (x**3 + field_terms))


def gravity_truncation(spec, safety=10.0):
    """A-priori size of the first omitted terms: ``(p/m)^3``, second order in the potentials."""
    lat, m = spec.lattice, spec.mass
    x = _max_momentum(lat) / m
    flat = FieldProfile("constant", 1.0)
    amp = g1 = g2 = 0.0
    for name in ("V", "F"):
        prof = spec.profiles.get(name, flat)
        amp = max(amp, np.max(np.abs(profile_values(lat, prof) - 1.0)))
        g1 = max(g1, np.max(np.abs(profile_values(lat, prof, 1))))
        g2 = max(g2, np.max(np.abs(profile_values(lat, prof, 2))))
    terms = x**3 + amp * x**2 + amp**2 * x + (amp * g1 + g2 * x) / m
    return float(safety * terms)


def _susy_mass(lam, tol):
    lam2 = lam @ lam
    m2 = float(np.real(np.trace(lam2))) / lam.shape[0]
    if np.abs(lam2 - m2 * np.eye(lam.shape[0])).max() > tol * max(1.0, m2):
        raise SusyViolationError("Lambda^2 is not proportional to the identity (Lambda != beta m)")
    return np.sqrt(m2)


def su2_susy(triple, sign="plus", gap_min=GAP_MIN):
    """SU(2) block diagonalization ``U = cos(theta/2) + 2 i J_2 sin(theta/2)``.

    ``sign="plus"`` is ``exp(+i J_2 theta)``; ``sign="minus"`` is the
    opposite-sign operator ``exp(-i J_2 theta)``.
    """
    if sign not in ("plus", "minus"):
        raise ConfigurationError(f"sign must be 'plus' or 'minus', got {sign!r}")
    lam, q, qd = triple.lambda_even, triple.q, triple.q_dag
    dim = lam.shape[0]
    m = _susy_mass(lam, default_tol(dim))
    if m < gap_min:
        raise SpectralGapError(m, gap_min)
    k = check_hermitian(triple.anticommutator, name="{Q, Q^dag}")
    w, v = np.linalg.eigh(k)
    w = np.clip(w, 0.0, None)
    e = np.sqrt(w + m * m)
    # cos(theta/2) and (Lambda^2 {Q,Q^dag})^(-1/2) sin(theta/2), both functions of {Q, Q^dag}
    cos_half = (v * np.sqrt((e + m) / (2 * e))) @ v.conj().T
    sin_half_scaled = (v / (m * np.sqrt(2 * e * (e + m)))) @ v.conj().T
    s = 1.0 if sign == "plus" else -1.0
    u = cos_half + s * lam @ (q + qd) @ sin_half_scaled
    h = lam + q + qd
    h_t = conjugate(u, h)
    diag_form = lam / m @ ((v * e) @ v.conj().T)
    theta = np.arctan2(np.sqrt(w), m)
    meta = {
        "sign": sign,
        "theta_min": float(theta.min()),
        "theta_max": float(theta.max()),
        "diagonal_form_residual": float(np.linalg.norm(h_t - diag_form, 2)),
    }
    return TransformResult(u, h_t, "su2-susy", meta)


def ek(h, gap_min=GAP_MIN):
    """Eriksen-Kolsrud operator from ``U_1 = (1 + J lam)/sqrt2`` and ``U_2 = (1 + beta J)/sqrt2``.

    ``U_1`` is built from the sign operator of the input Hamiltonian, so it
    acts first: the composed operator is ``U_2 @ U_1``.  ``U_1`` is unitary
    only if ``{J, H} = 0`` (free and gravity Hamiltonians), which is checked.
    """
    h = _matrix(h)
    dim = h.shape[0]
    d = dirac_matrices()
    beta, jm = _lift(d.beta, dim), _lift(d.j_matrix, dim)
    tol = default_tol(dim)
    res = np.linalg.norm(jm @ h + h @ jm, 2) / max(1.0, np.linalg.norm(h, 2))
    if res > tol:
        raise AnticommutationError("EK precondition {J, H} = 0 violated", res, tol)
    lam = sign_operator(h, gap_min)
    eye = np.eye(dim)
    u1 = (eye + jm @ lam) / np.sqrt(2)
    u2 = (eye + beta @ jm) / np.sqrt(2)
    u = u2 @ u1
    return TransformResult(u, conjugate(u, h), "ek", {"stages": "U2 @ U1"}, {"u1": u1, "u2": u2})


def _momentum_mode(mass, momentum):
    p = np.asarray(momentum, dtype=float)
    if p.shape != (3,):
        raise ConfigurationError("momentum must be a 3-vector")
    return float(mass), p, float(np.sqrt(mass * mass + p @ p))


def ek_to_fw(mass, momentum):
    """``U_{EK->FW} = sqrt((E+m)/2E) (1 - i beta Sigma.p / (E+m))`` on a free momentum mode."""
    m, p, e = _momentum_mode(mass, momentum)
    d = dirac_matrices()
    return np.sqrt((e + m) / (2 * e)) * (np.eye(4) - 1j * d.beta @ dot3(d.sigma_big, p) / (e + m))


def ek_then_fw(mass, momentum, gap_min=GAP_MIN):
    """EK followed by the EK->FW correction; should reproduce the Eriksen operator."""
    h = _free_mode_hamiltonian(mass, momentum)
    u = ek_to_fw(mass, momentum) @ ek(h, gap_min).u
    return TransformResult(u, conjugate(u, h), "ek-to-fw")


def melosh(mass, momentum):
    """Generalized Melosh operator ``U_M = U_2 U_1`` for a free momentum mode.

    ``U_1`` removes the transverse momentum, leaving ``H_1 = beta(eps + gamma_z p_z)``;
    ``U_2`` then removes ``p_z``.
    """
    m, p, e = _momentum_mode(mass, momentum)
    d = dirac_matrices()
    gx, gy, gz = d.gamma
    eps = np.sqrt(m * m + p[0] ** 2 + p[1] ** 2)
    eye = np.eye(4)
    u1 = ((eps + m) * eye + gx * p[0] + gy * p[1]) / np.sqrt(2 * eps * (eps + m))
    u2 = ((e + eps) * eye + gz * p[2]) / np.sqrt(2 * e * (e + eps))
    h = _free_mode_hamiltonian(m, p)
    h1 = conjugate(u1, h)
    u = u2 @ u1
    meta = {"epsilon": float(eps), "energy": float(e)}
    return TransformResult(u, conjugate(u, h), "melosh", meta, {"u1": u1, "u2": u2, "h_intermediate": h1})


def melosh_to_fw(mass, momentum, direction="m-to-fw", gap_min=GAP_MIN):
    """Spin rotation connecting the Melosh and FW representations.

    ``direction="m-to-fw"`` gives ``U_{M->FW}``; ``"fw-to-m"`` its adjoint.
    """
    if direction not in ("m-to-fw", "fw-to-m"):
        raise ConfigurationError(f"direction must be 'm-to-fw' or 'fw-to-m', got {direction!r}")
    m, p, e = _momentum_mode(mass, momentum)
    p_perp = float(np.hypot(p[0], p[1]))
    if p_perp < gap_min:
        raise DegenerateMomentumError(p_perp, gap_min)
    d = dirac_matrices()
    sx, sy, _ = d.sigma_big
    r = (p[0] * sy - p[1] * sx) / p_perp
    eps = np.sqrt(m * m + p_perp**2)
    s = 1.0 if direction == "m-to-fw" else -1.0
    # sqrt((E - eps)) ~ |p_z|: the rotation angle is odd in p_z
    s *= np.sign(p[2])
    num = np.sqrt((e + eps) * (eps + m)) * np.eye(4) + s * 1j * np.sqrt((e - eps) * (eps - m)) * r
    return num / np.sqrt(2 * eps * (e + m))


def melosh_then_fw(mass, momentum, gap_min=GAP_MIN):
    h = _free_mode_hamiltonian(mass, momentum)
    u = melosh_to_fw(mass, momentum, "m-to-fw", gap_min) @ melosh(mass, momentum).u
    return TransformResult(u, conjugate(u, h), "melosh-to-fw")


def heidenreich(split, gap_min=GAP_MIN):
    """Closed EK-type operator ``(1/2)(1 + beta Q (Q^2)^(-1/2)) (1 - i gamma5)``.

    ``Q = 1/2 {alpha.p, F} + i beta gamma5 m V``; ``m V`` is read off the even
    sector of a gravity (or free) split Hamiltonian.
    """
    if split.scenario not in ("gravity", "free"):
        raise ConfigurationError("heidenreich needs a gravity (or free) Hamiltonian")
    dim = split.dim
    d = dirac_matrices()
    beta, g5 = _lift(d.beta, dim), _lift(d.gamma5, dim)
    mv = beta @ (split.mass_term + split.even_part)
    q = split.odd_part + 1j * beta @ g5 @ mv
    q2 = check_hermitian(q @ q, name="Q^2")
    unit_q = q @ mat_inv_sqrt_psd(q2, gap_min)
    eye = np.eye(dim)
    u = 0.5 * (eye + beta @ unit_q) @ (eye - 1j * g5)
    return TransformResult(u, conjugate(u, split.h_full), "heidenreich")
