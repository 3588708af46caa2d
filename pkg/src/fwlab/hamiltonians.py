"""Scenario Hamiltonians ``H = beta m + even + odd`` on the momentum-mode or lattice backend.

In one dimension ``alpha . p`` becomes ``alpha_x p`` and gradients become
``d/dx``.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import anticommutator, dirac_matrices, dot3, lift_beta
from .exceptions import ConfigurationError, DomainError, SusyViolationError
from .lattice import (
    FieldProfile,
    Lattice1D,
    make_lattice,
    momentum_operator,
    position_multiplier,
    profile_values,
)
from .validation import check_hermitian, check_spinor_dim

SCENARIOS = ("free", "electrostatic", "susy-fields", "gravity")
BACKENDS = ("momentum-mode", "lattice")
FIELD_NAMES = ("A0", "Ax", "eps_x", "A5", "eps5", "V", "F")
_SCENARIO_FIELDS = {
    "free": (),
    "electrostatic": ("A0",),
    "susy-fields": ("Ax", "eps_x", "A5", "eps5"),
    "gravity": ("V", "F"),
}

DEFAULT_N = 64
DEFAULT_L = 16.0
DEFAULT_MASS = 1.0
DEFAULT_COUPLING = 0.1
DEFAULT_OMEGA = 0.1


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: str = "free"
    mass: float = DEFAULT_MASS
    coupling: float = DEFAULT_COUPLING
    momentum: tuple = (0.0, 0.0, 0.0)
    profiles: dict = field(default_factory=dict)
    backend: str = "momentum-mode"
    lattice: Lattice1D | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if self.backend not in BACKENDS:
            raise ConfigurationError(f"unknown backend {self.backend!r}; choose from {BACKENDS}")
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")
        if len(self.momentum) != 3:
            raise ConfigurationError("momentum must be a 3-vector")
        if self.backend == "lattice" and self.lattice is None:
            raise ConfigurationError("lattice backend requires a lattice")
        if self.scenario != "free" and self.backend != "lattice":
            raise ConfigurationError(f"scenario {self.scenario!r} requires the lattice backend")
        for name, prof in self.profiles.items():
            if name not in _SCENARIO_FIELDS[self.scenario]:
                raise ConfigurationError(
                    f"profile {name!r} is not used by scenario {self.scenario!r}"
                )
            if not isinstance(prof, FieldProfile):
                raise ConfigurationError(f"profile {name!r} must be a FieldProfile")

    @property
    def dim(self):
        return 4 if self.backend == "momentum-mode" else 4 * self.lattice.n_points

    def replace(self, **changes):
        from dataclasses import replace

        return replace(self, **changes)

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "mass": self.mass,
            "coupling": self.coupling,
            "momentum": list(map(float, self.momentum)),
            "profiles": {k: v.to_dict() for k, v in self.profiles.items()},
            "backend": self.backend,
            "lattice": None if self.lattice is None else self.lattice.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        lat = d.pop("lattice", None)
        profiles = {k: FieldProfile.from_dict(v) for k, v in d.pop("profiles", {}).items()}
        if lat is not None:
            lat = make_lattice(lat["n_points"], lat["length"])
        d["momentum"] = tuple(d.get("momentum", (0.0, 0.0, 0.0)))
        return cls(profiles=profiles, lattice=lat, **d)


@dataclass(frozen=True)
class SplitHamiltonian:
    """``h_full = mass_term + even_part + odd_part`` with ``[beta, even] = {beta, odd} = 0``."""

    h_full: np.ndarray
    even_part: np.ndarray
    odd_part: np.ndarray
    mass_term: np.ndarray
    mass: float
    scenario: str = "free"
    lattice: Lattice1D | None = None

    @property
    def dim(self):
        return self.h_full.shape[0]

    @property
    def beta(self):
        return self.mass_term / self.mass


@dataclass(frozen=True)
class SusyTriple:
    q: np.ndarray
    q_dag: np.ndarray
    lambda_even: np.ndarray
    m_block: np.ndarray

    @property
    def anticommutator(self):
        return self.q @ self.q_dag + self.q_dag @ self.q


def _assemble(mass_term, even, odd, spec):
    return SplitHamiltonian(
        h_full=mass_term + even + odd,
        even_part=even,
        odd_part=odd,
        mass_term=mass_term,
        mass=float(spec.mass),
        scenario=spec.scenario,
        lattice=spec.lattice,
    )


def _lattice_mass_term(spec):
    d = dirac_matrices()
    return np.kron(d.beta, spec.mass * np.eye(spec.lattice.n_points))


def _require(spec, scenario):
    if spec.scenario != scenario:
        raise ConfigurationError(f"expected a {scenario!r} scenario, got {spec.scenario!r}")
    if scenario != "free" and spec.backend != "lattice":
        raise ConfigurationError(f"{scenario!r} requires the lattice backend")


def _profile(spec, name, default=None):
    prof = spec.profiles.get(name, default)
    if prof is None:
        raise ConfigurationError(f"scenario {spec.scenario!r} requires profile {name!r}")
    return prof


def build_free(spec):
    _require(spec, "free")
    d = dirac_matrices()
    if spec.backend == "momentum-mode":
        mass_term = spec.mass * d.beta
        odd = dot3(d.alpha, np.asarray(spec.momentum, dtype=float)).astype(complex)
    else:
        mass_term = _lattice_mass_term(spec)
        odd = np.kron(d.alpha_x, momentum_operator(spec.lattice))
    return _assemble(mass_term, np.zeros_like(mass_term), odd, spec)


def build_electrostatic(spec):
    _require(spec, "electrostatic")
    d = dirac_matrices()
    lat = spec.lattice
    a0 = position_multiplier(lat, _profile(spec, "A0"))
    even = spec.coupling * np.kron(np.eye(4), a0)
    odd = np.kron(d.alpha_x, momentum_operator(lat))
    return _assemble(_lattice_mass_term(spec), even, odd, spec)


def susy_m_block(spec):
    """``M = sigma_x (p + A_x - i eps_x) - i (A_5 - i eps_5)`` on the 2N upper/lower space."""
    lat = spec.lattice
    zero = FieldProfile("constant", 0.0)
    diag = {k: position_multiplier(lat, spec.profiles.get(k, zero)) for k in _SCENARIO_FIELDS["susy-fields"]}
    p = momentum_operator(lat)
    spatial = p + diag["Ax"] - 1j * diag["eps_x"]
    pseudo = -1j * (diag["A5"] - 1j * diag["eps5"])
    return np.kron(np.array([[0, 1], [1, 0]]), spatial) + np.kron(np.eye(2), pseudo)


def build_susy(spec, tol=None):
    """Return the split Hamiltonian and its supercharge triple ``H = beta m + Q + Q^dag``."""
    _require(spec, "susy-fields")
    n2 = 2 * spec.lattice.n_points
    mblock = susy_m_block(spec)
    z = np.zeros((n2, n2), dtype=complex)
    q = np.block([[z, z], [mblock, z]])
    q_dag = q.conj().T
    lam = _lattice_mass_term(spec)
    tol = 1e-8 if tol is None else tol
    scale = max(1.0, np.abs(q).max() * spec.mass)
    for name, op in (("Q", q), ("Q^dag", q_dag)):
        res = np.abs(anticommutator(op, lam)).max() / scale
        if res > tol:
            raise SusyViolationError(f"{{{name}, Lambda}} = {res:.3e} exceeds {tol:.1e}")
    split = _assemble(lam, np.zeros_like(lam), q + q_dag, spec)
    return split, SusyTriple(q=q, q_dag=q_dag, lambda_even=lam, m_block=mblock)


def build_gravity(spec):
    """``H = beta m V + 1/2 {alpha_x p, F}``; the even part reported is ``beta m (V - 1)``."""
    _require(spec, "gravity")
    d = dirac_matrices()
    lat = spec.lattice
    flat = FieldProfile("constant", 1.0)
    v = profile_values(lat, _profile(spec, "V", flat))
    f = profile_values(lat, _profile(spec, "F", flat))
    if v.min() <= 0 or f.min() <= 0:
        raise DomainError(
            f"metric profiles must be positive on the grid (min V={v.min():.3g}, min F={f.min():.3g})"
        )
    p = momentum_operator(lat)
    fmat = np.diag(f)
    even = np.kron(d.beta, spec.mass * np.diag(v - 1.0))
    odd = 0.5 * np.kron(d.alpha_x, p @ fmat + fmat @ p)
    return _assemble(_lattice_mass_term(spec), even, odd, spec)


def split_hamiltonian(h, mass, scenario="free", lattice=None):
    """Split a raw Hamiltonian matrix: ``even = (H + beta H beta)/2 - beta m``, ``odd = (H - beta H beta)/2``."""
    h = check_hermitian(check_spinor_dim(h, "Hamiltonian"), name="Hamiltonian")
    if not mass > 0:
        raise ConfigurationError(f"mass must be positive, got {mass}")
    beta = lift_beta(h.shape[0])
    mass_term = mass * beta
    even = 0.5 * (h + beta @ h @ beta) - mass_term
    odd = 0.5 * (h - beta @ h @ beta)
    return SplitHamiltonian(h, even, odd, mass_term, float(mass), scenario, lattice)


def build_hamiltonian(spec):
    """Dispatch on ``spec.scenario``; always returns a :class:`SplitHamiltonian`."""
    if spec.scenario == "free":
        return build_free(spec)
    if spec.scenario == "electrostatic":
        return build_electrostatic(spec)
    if spec.scenario == "susy-fields":
        return build_susy(spec)[0]
    return build_gravity(spec)


def dirac_oscillator(mass=DEFAULT_MASS, omega=DEFAULT_OMEGA, n_points=DEFAULT_N,
                     length=DEFAULT_L, harmonics=4):
    """Dirac-oscillator preset: ``eps_x = m omega x`` (periodized), all other fields zero."""
    lat = make_lattice(n_points, length)
    prof = FieldProfile("sawtooth-smooth", amplitude=mass * omega, mode=harmonics)
    return ScenarioSpec("susy-fields", mass=mass, profiles={"eps_x": prof},
                        backend="lattice", lattice=lat)


def free_mode(mass=DEFAULT_MASS, momentum=(0.0, 0.0, 0.0)):
    return ScenarioSpec("free", mass=mass, momentum=tuple(momentum))


def free_lattice(mass=DEFAULT_MASS, n_points=DEFAULT_N, length=DEFAULT_L):
    return ScenarioSpec("free", mass=mass, backend="lattice", lattice=make_lattice(n_points, length))


def electrostatic(mass=DEFAULT_MASS, coupling=DEFAULT_COUPLING, amplitude=1.0, mode=1,
                  n_points=DEFAULT_N, length=DEFAULT_L):
    prof = FieldProfile("cosine", amplitude=amplitude, mode=mode)
    return ScenarioSpec("electrostatic", mass=mass, coupling=coupling, profiles={"A0": prof},
                        backend="lattice", lattice=make_lattice(n_points, length))


def gravity(mass=DEFAULT_MASS, v_amplitude=1e-3, f_amplitude=1e-3, mode=1,
            n_points=DEFAULT_N, length=DEFAULT_L):
    v = FieldProfile("cosine", amplitude=v_amplitude, mode=mode, offset=1.0)
    f = FieldProfile("cosine", amplitude=f_amplitude, mode=mode, offset=1.0)
    return ScenarioSpec("gravity", mass=mass, profiles={"V": v, "F": f},
                        backend="lattice", lattice=make_lattice(n_points, length))
