"""scikit-learn style wrappers around the transforms.

``fit`` takes a Hamiltonian (a :class:`ScenarioSpec`, a :class:`SplitHamiltonian`
or a raw Hermitian matrix) and learns the operator ``u_``; ``transform`` maps
state vectors, one per row, ``psi -> U psi``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigurationError
from .hamiltonians import ScenarioSpec, SplitHamiltonian, split_hamiltonian
from .pipeline import PreparedScenario, Tolerances, evaluate, parse_request, run_transform
from .validation import GAP_MIN, check_is_fitted


def _complex_array(X, ndims=(2,)):
    # sklearn's check_array refuses complex input
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim not in ndims:
        raise ValueError(f"expected an array with ndim in {ndims}, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains NaN or infinity")
    return X


class FWTransformer(TransformerMixin, BaseEstimator):
    """Representation change by one of the named transforms.

    Parameters
    ----------
    method : str
        Transform name, e.g. ``"eriksen"``, ``"ek"``, ``"su2-susy"``.
    sign : {"plus", "minus"}
        Only used by ``su2-susy``.
    schedule_depth : int
        Only used by ``stepwise``.
    mass : float or None
        Needed when fitting on a raw matrix, to split off ``beta m``.
    gap_min : float
        Smallest allowed ``|E|``.
    """

    def __init__(self, method="eriksen", sign="plus", schedule_depth=3, mass=None, gap_min=GAP_MIN):
        self.method = method
        self.sign = sign
        self.schedule_depth = schedule_depth
        self.mass = mass
        self.gap_min = gap_min

    def _request(self):
        options = {"su2-susy": {"sign": self.sign}, "stepwise": {"schedule_depth": self.schedule_depth}}
        return parse_request({"method": self.method, **options.get(self.method, {})})

    def _prepare(self, X):
        if isinstance(X, ScenarioSpec):
            return PreparedScenario.build(X)
        if isinstance(X, SplitHamiltonian):
            return PreparedScenario(None, X)
        h = _complex_array(X)
        if self.mass is None:
            raise ConfigurationError("fitting on a raw matrix needs the mass parameter")
        return PreparedScenario(None, split_hamiltonian(h, self.mass))

    def fit(self, X, y=None):
        request = self._request()
        prepared = self._prepare(X)
        result = run_transform(request, prepared, Tolerances(gap_min=self.gap_min))
        self.request_ = request
        self.prepared_ = prepared
        self.result_ = result
        self.u_ = result.u
        self.h_transformed_ = result.h_transformed
        self.n_features_in_ = result.u.shape[0]
        return self

    def _states(self, X):
        check_is_fitted(self)
        X = _complex_array(X, (1, 2))
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} components, expected {self.n_features_in_}")
        return X, single

    def transform(self, X):
        """Map each row ``psi`` to ``U psi``."""
        X, single = self._states(X)
        out = X @ self.u_.T
        return out[0] if single else out

    def inverse_transform(self, X):
        X, single = self._states(X)
        out = X @ self.u_.conj()
        return out[0] if single else out

    def transform_operator(self, A):
        """``U A U^dag``."""
        check_is_fitted(self)
        A = _complex_array(A)
        return self.u_ @ A @ self.u_.conj().T

    def verify(self, tolerances=None):
        """Run the verification battery on the fitted operator; returns the record dict."""
        check_is_fitted(self)
        return evaluate(self.result_, self.prepared_, self.request_, tolerances)
