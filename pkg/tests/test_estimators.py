import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import oracles
from fwlab import FWTransformer
from fwlab.exceptions import ConfigurationError
from fwlab.hamiltonians import build_susy, dirac_oscillator, free_mode

P3 = (0.3, -0.5, 0.7)


def test_fit_on_spec_matches_closed_form():
    est = FWTransformer().fit(free_mode(1.0, P3))
    np.testing.assert_allclose(est.u_, oracles.u0_closed(1.0, P3), atol=1e-11)
    assert est.n_features_in_ == 4


def test_transform_rows_are_states():
    h = oracles.free_h(1.0, P3)
    w, v = np.linalg.eigh(h)
    est = FWTransformer(mass=1.0).fit(h)
    out = est.transform(v.T)
    assert np.abs(out[w > 0][:, 2:]).max() < 1e-12
    assert np.abs(out[w < 0][:, :2]).max() < 1e-12
    np.testing.assert_allclose(est.inverse_transform(out), v.T, atol=1e-12)
    single = est.transform(v[:, 3])
    assert single.shape == (4,)


def test_transform_operator_gives_even_hamiltonian():
    h = oracles.free_h(1.0, P3)
    est = FWTransformer(mass=1.0).fit(h)
    np.testing.assert_allclose(est.transform_operator(h), oracles.ENERGY_M1_P3 * oracles.BETA, atol=1e-12)


def test_params_and_clone():
    est = FWTransformer(method="su2-susy", sign="minus")
    assert est.get_params()["sign"] == "minus"
    c = clone(est)
    assert c.method == "su2-susy" and not hasattr(c, "u_")
    est.set_params(sign="plus")
    assert est.sign == "plus"


def test_not_fitted():
    with pytest.raises(NotFittedError):
        FWTransformer().transform(np.zeros(4))


def test_raw_matrix_needs_mass():
    with pytest.raises(ConfigurationError):
        FWTransformer().fit(oracles.BETA)


def test_wrong_state_width():
    est = FWTransformer().fit(free_mode())
    with pytest.raises(ValueError):
        est.transform(np.zeros((2, 8)))


def test_fit_split_and_verify():
    split, _ = build_susy(dirac_oscillator(n_points=16))
    est = FWTransformer(method="fw-commuting").fit(split)
    rec = est.verify()
    assert rec["status"] == "ok"
    assert rec["observed"] == "pass"
    assert rec["unitarity_residual"] < 1e-10


def test_verify_reports_melosh_failure():
    rec = FWTransformer(method="melosh").fit(free_mode(1.0, P3)).verify()
    assert rec["observed"] == "fail" and rec["conformant"]
