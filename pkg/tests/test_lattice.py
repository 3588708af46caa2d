import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fwlab.exceptions import ConfigurationError
from fwlab.lattice import (
    FieldProfile,
    kron_spinor,
    make_lattice,
    momentum_function,
    momentum_operator,
    position_multiplier,
    profile_values,
)


def test_make_lattice_validates():
    for n in (7, 6, 9, 0):
        with pytest.raises(ConfigurationError):
            make_lattice(n, 10.0)
    with pytest.raises(ConfigurationError):
        make_lattice(16, 0.0)
    lat = make_lattice(16, 8.0)
    assert lat.spacing == 0.5
    np.testing.assert_allclose(lat.momenta, oracles.lattice_momenta(16, 8.0))


@pytest.mark.parametrize("n,length", [(8, 1.0), (16, 10.0), (64, 16.0)])
def test_momentum_operator_hermitian_with_listed_spectrum(n, length):
    lat = make_lattice(n, length)
    p = momentum_operator(lat)
    np.testing.assert_allclose(p, p.conj().T, atol=1e-13)
    np.testing.assert_allclose(np.linalg.eigvalsh(p), oracles.lattice_momenta(n, length), atol=1e-12)


def test_plane_waves_are_eigenvectors():
    lat = make_lattice(32, 5.0)
    p = momentum_operator(lat)
    x = lat.positions
    for k in (-16, -3, 0, 1, 15):
        kk = 2 * np.pi * k / lat.length
        psi = np.exp(1j * kk * x)
        np.testing.assert_allclose(p @ psi, kk * psi, atol=1e-11)


def test_spectral_derivative_of_smooth_profile():
    lat = make_lattice(64, 16.0)
    prof = FieldProfile("cosine", amplitude=0.7, mode=3)
    f = profile_values(lat, prof)
    # p = -i d/dx, so i p f = f'
    np.testing.assert_allclose(1j * momentum_operator(lat) @ f, profile_values(lat, prof, 1), atol=1e-12)


def test_momentum_function_square():
    lat = make_lattice(16, 3.0)
    p = momentum_operator(lat)
    np.testing.assert_allclose(momentum_function(lat, lambda k: k**2), p @ p, atol=1e-11)


def test_cosine_profile_values():
    prof = FieldProfile("cosine", amplitude=2.0, mode=1, offset=1.0)
    np.testing.assert_allclose(prof.evaluate(np.array([0.0, 2.5, 5.0]), 10.0), [3.0, 1.0, -1.0], atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(kind=st.sampled_from(["cosine", "gaussian-periodic", "sawtooth-smooth"]),
       mode=st.integers(1, 4), width=st.floats(0.3, 2.0), shift=st.floats(0.0, 1.0))
def test_profiles_periodic_with_consistent_derivatives(kind, mode, width, shift):
    length = 10.0
    prof = FieldProfile(kind, amplitude=1.3, mode=mode, width=width)
    x = np.linspace(0, length, 7) + shift
    for order in (0, 1, 2):
        np.testing.assert_allclose(prof.evaluate(x + length, length, order), prof.evaluate(x, length, order),
                                   atol=1e-9)
    h = 1e-5
    for order in (0, 1):
        fd = (prof.evaluate(x + h, length, order) - prof.evaluate(x - h, length, order)) / (2 * h)
        np.testing.assert_allclose(fd, prof.evaluate(x, length, order + 1), atol=1e-5)


def test_sawtooth_is_odd_about_center():
    prof = FieldProfile("sawtooth-smooth", amplitude=1.0, mode=4)
    u = np.array([0.3, 1.1, 2.7])
    np.testing.assert_allclose(prof.evaluate(8 + u, 16.0), -prof.evaluate(8 - u, 16.0), atol=1e-13)


def test_profile_validation():
    with pytest.raises(ConfigurationError):
        FieldProfile("triangle", 1.0)
    with pytest.raises(ConfigurationError):
        FieldProfile("gaussian-periodic", 1.0, width=0.0)
    with pytest.raises(ConfigurationError):
        FieldProfile("cosine", 1.0, mode=0)


def test_profile_roundtrip():
    prof = FieldProfile("gaussian-periodic", 0.5, width=1.5, center=2.0)
    assert FieldProfile.from_dict(prof.to_dict()) == prof


def test_position_multiplier_is_diagonal():
    lat = make_lattice(8, 4.0)
    m = position_multiplier(lat, FieldProfile("constant", 2.5))
    np.testing.assert_array_equal(m, 2.5 * np.eye(8))


def test_kron_spinor_layout_and_validation():
    out = kron_spinor(oracles.BETA, np.eye(3))
    np.testing.assert_array_equal(np.diag(out), [1] * 6 + [-1] * 6)
    with pytest.raises(ValueError):
        kron_spinor(np.eye(2), np.eye(3))
