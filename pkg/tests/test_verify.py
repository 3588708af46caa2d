import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fwlab.exceptions import SpectralGapError, UnitarityError
from fwlab.hamiltonians import build_free, free_lattice
from fwlab.transforms import ek, eriksen, melosh, u0_free
from fwlab.verify import (
    SpinorField,
    bch_residual,
    check_block_diagonal,
    check_reduction,
    check_spectrum_preserved,
    check_unitary,
    off_block_norm,
    order_scaling_fit,
    split_eigensystem,
    subspace_distance,
)

P3 = (0.3, -0.5, 0.7)


def test_split_eigensystem_free_mode():
    eig = split_eigensystem(oracles.free_h(1.0, P3))
    assert len(eig.positive) == 2 and len(eig.negative) == 2
    assert [len(g) for g in eig.groups] == [2, 2]
    for e, psi in eig.positive:
        assert abs(e - oracles.ENERGY_M1_P3) < 1e-12
        assert abs(psi.norm - 1) < 1e-12


def test_split_eigensystem_lattice_groups():
    eig = split_eigensystem(build_free(free_lattice(n_points=8)).h_full)
    # +-p pairs with spin give fourfold groups except p = 0 and the Nyquist mode
    assert sorted(len(g) for g in eig.groups) == [2, 2, 2, 2, 4, 4, 4, 4, 4, 4]


def test_split_eigensystem_gap():
    with pytest.raises(SpectralGapError):
        split_eigensystem(np.diag([1.0, 1e-10, -1.0, -1.0]))


def test_check_unitary_norms():
    assert check_unitary(np.eye(8)) == 0
    assert check_unitary(2 * np.eye(4)) == pytest.approx(3)
    assert check_unitary(2 * np.eye(4), "fro") == pytest.approx(6)
    with pytest.raises(ValueError):
        check_unitary(np.eye(4), "max")


def test_block_diagonal_measures():
    assert check_block_diagonal(oracles.BETA) == 0
    assert check_block_diagonal(np.zeros((4, 4))) == 0
    # ||[beta, alpha_x]|| = ||2 beta alpha_x|| = 2
    assert check_block_diagonal(oracles.ALPHA_X) == pytest.approx(2)
    assert off_block_norm(oracles.free_h(1.0, (0, 0, 0.5))) == pytest.approx(0.5)


def test_subspace_distance():
    e = np.eye(4)
    assert subspace_distance(e[:, :2], e[:, [1, 0]]) < 1e-15
    assert subspace_distance(e[:, :2], e[:, 2:]) == pytest.approx(1)
    t = 1e-9
    rot = np.array([np.cos(t), 0, np.sin(t), 0])
    assert subspace_distance(e[:, :1], rot[:, None]) == pytest.approx(np.sin(t), rel=1e-6)


def test_reduction_passes_for_exact_operators():
    h = oracles.free_h(1.0, P3)
    for u in (u0_free(1.0, P3).u, eriksen(h).u):
        v = check_reduction(u, h)
        assert v.passed
        assert v.max_oracle_mismatch < 1e-13
        assert len(v.per_state) == 4 and len(v.per_group) == 2


def test_reduction_ek_frozen_mismatch():
    h = oracles.free_h(1.0, (1, 0, 0))
    v = check_reduction(ek(h).u, h)
    # block-diagonal output, so nullity holds, but the spin factor is rotated
    assert max(v.max_lower_residual, v.max_upper_residual) < 1e-14
    assert v.max_oracle_mismatch == pytest.approx(oracles.EK_MISMATCH_M1_P100, abs=1e-12)
    assert not v.passed
    # the span comparison cannot see the spin rotation
    assert v.max_subspace_distance < 1e-12


def test_reduction_melosh_frozen_mismatch():
    h = oracles.free_h(1.0, P3)
    v = check_reduction(melosh(1.0, P3).u, h)
    assert v.max_oracle_mismatch == pytest.approx(oracles.MELOSH_MISMATCH_M1_P3, abs=1e-12)
    assert not v.passed
    assert set(v.summary()) >= {"passed", "max_oracle_mismatch"}


def test_reduction_identity_fails_nullity():
    h = oracles.free_h(1.0, P3)
    v = check_reduction(np.eye(4), h)
    assert not v.passed and v.max_lower_residual > 0.1


def test_reduction_rejects_non_unitary():
    with pytest.raises(UnitarityError):
        check_reduction(1.01 * np.eye(4), oracles.BETA)
    with pytest.raises(ValueError):
        check_reduction(np.eye(8), oracles.BETA)


def test_spectrum_preserved():
    h = oracles.free_h(1.0, P3)
    assert check_spectrum_preserved(h, oracles.ENERGY_M1_P3 * oracles.BETA) < 1e-12
    assert check_spectrum_preserved(h, 2 * h) == pytest.approx(oracles.ENERGY_M1_P3)
    assert check_spectrum_preserved(h, 2 * h, relative=True) == pytest.approx(1)
    with pytest.raises(ValueError):
        check_spectrum_preserved(h, np.eye(8))


def test_bch_commuting_generators():
    raw, lead = bch_residual(oracles.BETA, 0.3 * oracles.BETA)
    assert raw < 1e-14 and lead == 0


def test_bch_leading_term_dominates_small_generators():
    sx = np.kron(oracles.SX, np.eye(2))
    sy = np.kron(oracles.SY, np.eye(2))
    raw, lead = bch_residual(1e-3 * sx, 1e-3 * sy)
    assert lead == pytest.approx(1e-6)
    assert raw / lead == pytest.approx(1, abs=1e-2)


@settings(max_examples=30, deadline=None)
@given(k=st.floats(0.5, 5.0), c=st.floats(1e-3, 1e3))
def test_order_scaling_fit_recovers_power(k, c):
    xs = [0.2, 0.1, 0.05, 0.025]
    assert order_scaling_fit([(x, c * x**k) for x in xs]) == pytest.approx(k, abs=1e-9)


def test_order_scaling_fit_validation():
    with pytest.raises(ValueError):
        order_scaling_fit([(1, 1), (2, 2)])
    with pytest.raises(ValueError):
        order_scaling_fit([(1, 1), (2, 0), (3, 3)])
    with pytest.raises(ValueError):
        order_scaling_fit([1, 2, 3])


def test_spinor_field_views():
    psi = SpinorField(np.arange(8.0))
    assert psi.dim == 8
    np.testing.assert_array_equal(psi.upper, [0, 1, 2, 3])
    np.testing.assert_array_equal(psi.lower, [4, 5, 6, 7])
    assert psi.norm == pytest.approx(np.sqrt(140))
    for bad in (np.zeros(6), np.zeros((4, 4)), np.array([np.nan, 0, 0, 0])):
        with pytest.raises(ValueError):
            SpinorField(bad)
