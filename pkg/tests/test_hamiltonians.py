import numpy as np
import pytest

import oracles
from fwlab.algebra import commutator, lift_beta
from fwlab.exceptions import ConfigurationError, DomainError, SusyViolationError
from fwlab.hamiltonians import (
    ScenarioSpec,
    SusyTriple,
    build_electrostatic,
    build_free,
    build_gravity,
    build_hamiltonian,
    build_susy,
    dirac_oscillator,
    electrostatic,
    free_lattice,
    free_mode,
    gravity,
    split_hamiltonian,
)
from fwlab.lattice import FieldProfile, make_lattice


def _split_invariants(split):
    beta = lift_beta(split.dim)
    assert np.array_equal(split.h_full, split.mass_term + split.even_part + split.odd_part)
    assert np.abs(commutator(beta, split.even_part)).max() == 0
    assert np.abs(beta @ split.odd_part + split.odd_part @ beta).max() == 0
    for part in (split.h_full, split.even_part, split.odd_part):
        np.testing.assert_allclose(part, part.conj().T, atol=1e-12)


def test_free_rest_mode():
    split = build_free(free_mode(1.0))
    np.testing.assert_array_equal(split.h_full, oracles.BETA)
    np.testing.assert_allclose(np.linalg.eigvalsh(split.h_full), [-1, -1, 1, 1])


def test_free_mode_closed_form_energy():
    split = build_free(free_mode(1.0, (0, 0, 0.75)))
    np.testing.assert_allclose(np.linalg.eigvalsh(split.h_full), [-1.25, -1.25, 1.25, 1.25], atol=1e-14)
    np.testing.assert_allclose(split.h_full, oracles.free_h(1.0, (0, 0, 0.75)))
    _split_invariants(split)


def test_free_lattice_spectrum():
    split = build_free(free_lattice(n_points=16, length=6.0))
    e = np.sqrt(1 + oracles.lattice_momenta(16, 6.0) ** 2)
    np.testing.assert_allclose(np.linalg.eigvalsh(split.h_full), np.sort(np.concatenate([e, e, -e, -e])),
                               atol=1e-12)
    _split_invariants(split)


def test_electrostatic_zero_coupling_is_free():
    spec = electrostatic(coupling=0.0, n_points=16)
    free = build_free(free_lattice(n_points=16))
    np.testing.assert_allclose(build_electrostatic(spec).h_full, free.h_full)


def test_electrostatic_constant_potential_shifts_spectrum():
    lat = make_lattice(16, 16.0)
    spec = ScenarioSpec("electrostatic", coupling=0.3, profiles={"A0": FieldProfile("constant", 2.0)},
                        backend="lattice", lattice=lat)
    free = build_free(free_lattice(n_points=16))
    np.testing.assert_allclose(np.linalg.eigvalsh(build_electrostatic(spec).h_full),
                               np.linalg.eigvalsh(free.h_full) + 0.6, atol=1e-12)


def test_electrostatic_cosine_does_not_commute():
    split = build_electrostatic(electrostatic(n_points=16))
    _split_invariants(split)
    assert np.linalg.norm(commutator(split.even_part, split.odd_part), 2) > 1e-3


def test_electrostatic_missing_profile():
    spec = ScenarioSpec("electrostatic", backend="lattice", lattice=make_lattice(8, 4.0))
    with pytest.raises(ConfigurationError, match="A0"):
        build_electrostatic(spec)


def test_susy_all_zero_fields_is_free():
    lat = make_lattice(16, 16.0)
    split, triple = build_susy(ScenarioSpec("susy-fields", backend="lattice", lattice=lat))
    np.testing.assert_allclose(split.h_full, build_free(free_lattice(n_points=16)).h_full, atol=1e-14)
    assert isinstance(triple, SusyTriple)


def test_susy_triple_structure():
    lat = make_lattice(16, 8.0)
    profiles = {"Ax": FieldProfile("cosine", 0.3), "eps_x": FieldProfile("cosine", 0.2, mode=2),
                "A5": FieldProfile("gaussian-periodic", 0.1), "eps5": FieldProfile("cosine", 0.05)}
    split, t = build_susy(ScenarioSpec("susy-fields", profiles=profiles, backend="lattice", lattice=lat))
    n2 = 2 * lat.n_points
    assert np.all(t.q[:n2, :] == 0) and np.all(t.q[:, n2:] == 0)
    assert np.all(t.q @ t.q == 0)
    m = t.m_block
    k = t.anticommutator
    np.testing.assert_allclose(k[:n2, :n2], m.conj().T @ m, atol=1e-12)
    np.testing.assert_allclose(k[n2:, n2:], m @ m.conj().T, atol=1e-12)
    np.testing.assert_allclose(t.q + t.q_dag, split.odd_part)
    _split_invariants(split)


def test_dirac_oscillator_square():
    split, t = build_susy(dirac_oscillator(n_points=32))
    h = split.h_full
    np.testing.assert_allclose(h @ h, t.anticommutator + np.eye(h.shape[0]), atol=1e-10)
    w = np.linalg.eigvalsh(h)
    np.testing.assert_allclose(w, -w[::-1], atol=1e-10)


def test_susy_violation_detected(monkeypatch):
    import fwlab.hamiltonians as hmod

    spec = ScenarioSpec("susy-fields", profiles={"eps_x": FieldProfile("cosine", 0.1)}, backend="lattice",
                        lattice=make_lattice(8, 4.0))
    # a Lambda that is not beta m breaks {Q, Lambda} = 0
    monkeypatch.setattr(hmod, "_lattice_mass_term", lambda s: np.eye(4 * s.lattice.n_points))
    with pytest.raises(SusyViolationError):
        build_susy(spec)


def test_gravity_flat_is_free():
    lat = make_lattice(16, 16.0)
    flat = FieldProfile("constant", 1.0)
    spec = ScenarioSpec("gravity", profiles={"V": flat, "F": flat}, backend="lattice", lattice=lat)
    np.testing.assert_allclose(build_gravity(spec).h_full, build_free(free_lattice(n_points=16)).h_full,
                               atol=1e-13)


def test_gravity_hermitian_and_split():
    split = build_gravity(gravity(v_amplitude=0.2, f_amplitude=0.1, n_points=32))
    assert np.abs(split.h_full - split.h_full.conj().T).max() < 1e-12
    _split_invariants(split)


def test_gravity_weak_field_spectrum_close_to_free():
    free = np.linalg.eigvalsh(build_free(free_lattice(n_points=32)).h_full)
    weak = np.linalg.eigvalsh(build_gravity(gravity(n_points=32)).h_full)
    assert np.max(np.abs(weak - free)) < 10 * 1e-3 * np.max(np.abs(free))


def test_gravity_domain_error():
    spec = gravity(v_amplitude=1.5, n_points=16)
    with pytest.raises(DomainError):
        build_gravity(spec)


@pytest.mark.parametrize("kwargs", [
    dict(scenario="nope"),
    dict(backend="grid"),
    dict(mass=0.0),
    dict(momentum=(1.0, 2.0)),
    dict(scenario="electrostatic"),
    dict(backend="lattice"),
    dict(profiles={"A0": FieldProfile("constant", 1.0)}),
])
def test_spec_validation(kwargs):
    with pytest.raises(ConfigurationError):
        ScenarioSpec(**kwargs)


def test_spec_roundtrip():
    spec = gravity(v_amplitude=0.01, f_amplitude=0.02, n_points=16)
    assert ScenarioSpec.from_dict(spec.to_dict()) == spec
    assert spec.dim == 64
    assert free_mode().dim == 4


def test_build_hamiltonian_dispatch():
    for spec in (free_mode(), electrostatic(n_points=8), dirac_oscillator(n_points=8), gravity(n_points=8)):
        split = build_hamiltonian(spec)
        assert split.scenario == spec.scenario
        _split_invariants(split)


def test_split_hamiltonian_of_raw_matrix():
    split = split_hamiltonian(oracles.free_h(2.0, (0.1, 0.2, 0.3)), 2.0)
    np.testing.assert_allclose(split.even_part, 0, atol=1e-15)
    np.testing.assert_allclose(split.odd_part, oracles.free_h(0.0, (0.1, 0.2, 0.3)))
    with pytest.raises(ConfigurationError):
        split_hamiltonian(np.eye(4), 0.0)
