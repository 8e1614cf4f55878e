"""Scikit-learn style wrappers around the coupled estimator.

These expose the usual fit/predict/get_params surface so the model composes
with sklearn tooling (cloning, grid search over p or alpha, pipelines). The
numerical work lives in the functional modules; the wrappers only validate
inputs and hold fitted state.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from .errors import ConfigError
from .granger import Correction, assemble_network
from .panel import Panel, quarter_label
from .varx import Criterion, fit_coupled, select_lag


def _as_panel(X, Y, labels=None) -> Panel:
    X = check_array(X, dtype=np.float64, ensure_min_samples=2)
    Y = check_array(Y, dtype=np.float64, ensure_min_samples=2)
    if X.shape != Y.shape:
        raise ValueError(f"X and Y must have equal shape; got {X.shape} and {Y.shape}")
    n = X.shape[1]
    labels = tuple(labels) if labels is not None else tuple(f"C{i:02d}" for i in range(n))
    quarters = tuple(quarter_label(8000 + t) for t in range(X.shape[0]))
    return Panel(labels=labels, quarters=quarters, x=X, y=Y)


class CoupledVarx(BaseEstimator):
    """Coupled VARX(p) estimator over a (GDP-like, CPI-like) matrix pair.

    Parameters
    ----------
    p : int or None
        Fixed lag order. Exactly one of `p` and `p_max` must be set.
    p_max : int or None
        If set, the lag order is chosen by `criterion` over 1..p_max.
    criterion : {"aic", "bic"}
        Information criterion used when `p_max` is given.
    """

    def __init__(self, p=1, p_max=None, criterion="bic"):
        self.p = p
        self.p_max = p_max
        self.criterion = criterion

    def fit(self, X, Y, labels=None):
        if (self.p is None) == (self.p_max is None):
            raise ConfigError("exactly one of p and p_max must be set")
        panel = _as_panel(X, Y, labels)
        if self.p_max is not None:
            selection = select_lag(panel, self.p_max, Criterion(self.criterion))
            self.lag_selection_ = selection
            self.p_ = selection.chosen_p
        else:
            self.lag_selection_ = None
            self.p_ = self.p
        self.coupled_fit_ = fit_coupled(panel, self.p_)
        self.panel_ = panel
        self.n_features_in_ = panel.n
        return self

    def _check_fitted(self):
        if not hasattr(self, "coupled_fit_"):
            raise NotFittedError("call fit before using this estimator")

    def predict(self, X_hist, Y_hist):
        """One-step-ahead forecast of both variables from trailing history.

        `X_hist` and `Y_hist` must contain at least p rows; only the last p
        are used.
        """
        self._check_fitted()
        X_hist = check_array(X_hist, dtype=np.float64)
        Y_hist = check_array(Y_hist, dtype=np.float64)
        p = self.p_
        if X_hist.shape[0] < p or Y_hist.shape[0] < p:
            raise ValueError(f"need at least p={p} history rows")
        g, c = self.coupled_fit_.gdp_fit, self.coupled_fit_.cpi_fit
        x_next = g.intercept.copy()
        y_next = c.intercept.copy()
        for s in range(1, p + 1):
            x_next += g.endog_coefs[s - 1] @ X_hist[-s] + g.exog_coefs[s - 1] @ Y_hist[-s]
            y_next += c.endog_coefs[s - 1] @ Y_hist[-s] + c.exog_coefs[s - 1] @ X_hist[-s]
        return x_next, y_next


class GrangerNetwork(BaseEstimator):
    """Fits the coupled system and extracts the four causality matrices.

    Attributes after fit: `network_` (the full network object) and
    `adjacency_` (dict role name -> n x n weight matrix).
    """

    def __init__(self, p=1, p_max=None, criterion="bic", alpha=0.05, correction="none"):
        self.p = p
        self.p_max = p_max
        self.criterion = criterion
        self.alpha = alpha
        self.correction = correction

    def fit(self, X, Y, labels=None):
        base = CoupledVarx(p=self.p, p_max=self.p_max, criterion=self.criterion)
        base.fit(X, Y, labels=labels)
        self.estimator_ = base
        self.p_ = base.p_
        self.network_ = assemble_network(
            base.panel_, base.coupled_fit_, self.alpha, Correction(self.correction)
        )
        self.adjacency_ = {
            "phi": self.network_.phi.matrix,
            "pi": self.network_.pi.matrix,
            "psi": self.network_.psi.matrix,
            "gamma": self.network_.gamma.matrix,
        }
        self.n_features_in_ = base.n_features_in_
        return self
