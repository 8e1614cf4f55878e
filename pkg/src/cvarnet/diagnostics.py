"""Structural-stability diagnostics for a fitted VARX line.

Two checks: dynamic stability via the companion matrix of the endogenous lag
stack (all eigenvalue moduli < 1), and parameter stability via the OLS-CUSUM
test with Brownian-bridge sup-norm critical values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateFitError
from .varx import VarxFit

# sup |Brownian bridge| critical values (Kolmogorov distribution quantiles)
CUSUM_CRITICAL_VALUES = {
    0.10: 1.224,
    0.05: 1.358,
    0.01: 1.628,
}


@dataclass(frozen=True)
class StabilityReport:
    role: object
    eigen_moduli: np.ndarray  # n*p moduli, sorted descending
    max_modulus: float
    stable: bool


@dataclass(frozen=True)
class CusumReport:
    role: object
    labels: tuple[str, ...] | None
    paths: np.ndarray        # (T - p) x n scaled cumulative residual sums
    sup_stats: np.ndarray    # (n,)
    critical_value: float
    alpha: float
    rejected: np.ndarray     # (n,) bool

    @property
    def any_rejected(self) -> bool:
        return bool(self.rejected.any())


def companion_matrix(endog_coefs: np.ndarray) -> np.ndarray:
    """Stack lag matrices (p, n, n) into the (n*p) x (n*p) companion form."""
    p, n, _ = endog_coefs.shape
    top = np.hstack([endog_coefs[s] for s in range(p)])
    comp = np.zeros((n * p, n * p))
    comp[:n, :] = top
    if p > 1:
        comp[n:, : n * (p - 1)] = np.eye(n * (p - 1))
    return comp


def companion_stability(fit: VarxFit) -> StabilityReport:
    """Eigenvalue moduli of the endogenous-block companion matrix; the fit is
    dynamically stable iff all lie inside the unit circle. Exogenous blocks
    are excluded (they are inputs, not dynamics)."""
    comp = companion_matrix(fit.endog_coefs)
    eigvals = np.linalg.eigvals(comp)
    moduli = np.sort(np.abs(eigvals))[::-1]
    max_mod = float(moduli[0])
    return StabilityReport(
        role=fit.role,
        eigen_moduli=moduli,
        max_modulus=max_mod,
        stable=max_mod < 1.0,
    )


def ols_cusum(fit: VarxFit, alpha: float = 0.05, labels=None) -> CusumReport:
    """Per-equation OLS-CUSUM paths and sup statistics.

    path_m = (sum of the first m residuals) / (sigma_hat * sqrt(T - p)) with
    sigma_hat using the residual degrees of freedom T - p - k. Rejection when
    the sup exceeds the Brownian-bridge critical value at `alpha`.
    """
    if alpha not in CUSUM_CRITICAL_VALUES:
        raise ConfigError(
            f"unsupported CUSUM alpha {alpha}; critical values are tabulated "
            f"for {sorted(CUSUM_CRITICAL_VALUES)}"
        )
    nobs, n = fit.residuals.shape
    dof = nobs - fit.regressor_count
    if dof <= 0:
        raise DegenerateFitError(
            f"no residual degrees of freedom ({nobs} obs, {fit.regressor_count} regressors)"
        )
    sigma = np.sqrt(fit.rss_per_equation / dof)
    if np.any(sigma <= 0.0):
        dead = [int(i) for i in np.nonzero(sigma <= 0.0)[0]]
        raise DegenerateFitError(f"zero residual variance in equations {dead}")
    paths = np.cumsum(fit.residuals, axis=0) / (sigma[None, :] * np.sqrt(nobs))
    sup_stats = np.max(np.abs(paths), axis=0)
    crit = CUSUM_CRITICAL_VALUES[alpha]
    return CusumReport(
        role=fit.role,
        labels=tuple(labels) if labels is not None else None,
        paths=paths,
        sup_stats=sup_stats,
        critical_value=crit,
        alpha=alpha,
        rejected=sup_stats > crit,
    )
