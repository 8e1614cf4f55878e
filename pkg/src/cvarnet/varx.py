"""Per-equation least-squares estimation of the coupled VARX(p) system.

Each line of the coupled system is a VARX(p): the line's own variable enters
as endogenous lags and the other line's variable as exogenous lags. Both
lines share one lag order p; every equation regresses on the same design
``[1, endog lags 1..p, exog lags 1..p]`` so the whole line is a multi-RHS
least-squares solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DefinitenessError, DimensionError, SingularDesignError
from .panel import Panel

# design declared singular when min/max |diag(R)| of the QR factor drops below this
RANK_TOL = 1e-10


class EquationRole(Enum):
    GDP_EQUATION = "gdp"
    CPI_EQUATION = "cpi"


class Criterion(Enum):
    AIC = "aic"
    BIC = "bic"


@dataclass(frozen=True)
class VarxFit:
    """One estimated VARX(p) line: coefficients, residuals, covariance."""

    role: EquationRole
    p: int
    intercept: np.ndarray              # (n,)
    endog_coefs: np.ndarray            # (p, n, n); [s-1, i, j] = lag-s effect of endog j on i
    exog_coefs: np.ndarray             # (p, n, n)
    residuals: np.ndarray              # (T - p, n)
    resid_cov: np.ndarray              # (n, n), normalized by T - p
    rss_per_equation: np.ndarray       # (n,)
    regressor_count: int               # 1 + 2*n*p

    @property
    def n(self) -> int:
        return self.intercept.shape[0]

    @property
    def nobs(self) -> int:
        """Effective observations T - p."""
        return self.residuals.shape[0]


@dataclass(frozen=True)
class CoupledFit:
    """Full parameter set of the coupled system: both lines plus shared p."""

    gdp_fit: VarxFit
    cpi_fit: VarxFit
    labels: tuple[str, ...]
    T: int

    def __post_init__(self):
        if self.gdp_fit.p != self.cpi_fit.p:
            raise DimensionError("coupled fits must share the lag order")
        if self.gdp_fit.n != self.cpi_fit.n:
            raise DimensionError("coupled fits must share the country count")

    @property
    def p(self) -> int:
        return self.gdp_fit.p

    @property
    def n(self) -> int:
        return self.gdp_fit.n


@dataclass(frozen=True)
class LagSelection:
    criterion: Criterion
    scores: dict[int, tuple[float, float]]  # lag -> (gdp system score, cpi system score)
    chosen_p: int


def build_design(endog: np.ndarray, exog: np.ndarray, p: int, trim: int | None = None):
    """Design matrix [1, endog lags 1..p, exog lags 1..p] and matching targets.

    `trim` discards the first `trim` rows (default p); trim > p is used by lag
    selection so candidate orders share one effective sample.
    """
    endog = np.asarray(endog, dtype=float)
    exog = np.asarray(exog, dtype=float)
    if endog.shape != exog.shape or endog.ndim != 2:
        raise DimensionError(
            f"endog and exog must be equal-shape T x n matrices; got "
            f"{endog.shape} and {exog.shape}"
        )
    T, n = endog.shape
    m = p if trim is None else trim
    if m < p:
        raise DimensionError(f"trim {m} smaller than lag order {p}")
    k = 1 + 2 * n * p
    if T - m <= k:
        raise DimensionError(
            f"need T - {m} > {k} effective observations for n={n}, p={p}; "
            f"minimum T is {m + k + 1}, got T={T}"
        )
    rows = T - m
    Z = np.empty((rows, k))
    Z[:, 0] = 1.0
    for s in range(1, p + 1):
        Z[:, 1 + (s - 1) * n : 1 + s * n] = endog[m - s : T - s, :]
        Z[:, 1 + (p + s - 1) * n : 1 + (p + s) * n] = exog[m - s : T - s, :]
    return Z, endog[m:, :]


def _qr_solve(Z: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Least squares via reduced QR with an explicit rank cutoff.

    Columns are equilibrated to unit norm first so the diagonal-ratio test
    measures collinearity, not the (arbitrary) units of the regressors.
    """
    norms = np.linalg.norm(Z, axis=0)
    dead = [int(j) for j in np.nonzero(norms == 0.0)[0]]
    if dead:
        raise SingularDesignError(
            f"design matrix has identically zero columns {dead}", columns=dead
        )
    Q, R = np.linalg.qr(Z / norms[None, :])
    diag = np.abs(np.diag(R))
    dmax = diag.max()
    if dmax == 0.0 or diag.min() / dmax < RANK_TOL:
        bad = [int(j) for j in np.nonzero(diag < RANK_TOL * max(dmax, 1.0))[0]]
        raise SingularDesignError(
            f"design matrix is rank deficient (collinear columns {bad})",
            columns=bad,
        )
    beta = solve_triangular(R, Q.T @ Y)
    return beta / (norms if beta.ndim == 1 else norms[:, None])


def fit_varx(
    endog: np.ndarray,
    exog: np.ndarray,
    p: int,
    role: EquationRole,
    trim: int | None = None,
) -> VarxFit:
    """Estimate one VARX(p) line by per-equation least squares.

    Coefficients for equation i regress endog[:, i] on the intercept, all p
    endogenous lags, and all p exogenous lags. Residual covariance uses the
    maximum-likelihood normalization (effective sample size).
    """
    if p < 1:
        raise DimensionError(f"lag order must be >= 1, got {p}")
    Z, Y = build_design(endog, exog, p, trim=trim)
    n = Y.shape[1]
    B = _qr_solve(Z, Y)  # k x n; column i = coefficients of equation i
    E = Y - Z @ B
    nobs = Y.shape[0]
    endog_coefs = np.empty((p, n, n))
    exog_coefs = np.empty((p, n, n))
    for s in range(p):
        endog_coefs[s] = B[1 + s * n : 1 + (s + 1) * n, :].T
        exog_coefs[s] = B[1 + (p + s) * n : 1 + (p + s + 1) * n, :].T
    return VarxFit(
        role=role,
        p=p,
        intercept=B[0, :].copy(),
        endog_coefs=endog_coefs,
        exog_coefs=exog_coefs,
        residuals=E,
        resid_cov=(E.T @ E) / nobs,
        rss_per_equation=np.sum(E * E, axis=0),
        regressor_count=Z.shape[1],
    )


def fit_coupled(panel: Panel, p: int, trim: int | None = None) -> CoupledFit:
    """Fit both lines of the coupled system on a panel."""
    try:
        gdp_fit = fit_varx(panel.x, panel.y, p, EquationRole.GDP_EQUATION, trim=trim)
    except (SingularDesignError, DimensionError) as exc:
        raise type(exc)(f"GDP line: {exc}") from exc
    try:
        cpi_fit = fit_varx(panel.y, panel.x, p, EquationRole.CPI_EQUATION, trim=trim)
    except (SingularDesignError, DimensionError) as exc:
        raise type(exc)(f"CPI line: {exc}") from exc
    return CoupledFit(gdp_fit=gdp_fit, cpi_fit=cpi_fit, labels=panel.labels, T=panel.T)


def log_likelihood(fit: VarxFit) -> float:
    """Gaussian conditional log-likelihood at the least-squares optimum."""
    sign, logdet = np.linalg.slogdet(fit.resid_cov)
    if sign <= 0 or not np.isfinite(logdet):
        raise DefinitenessError("residual covariance is not positive definite")
    n, nobs = fit.n, fit.nobs
    return -(nobs / 2.0) * (n * math.log(2.0 * math.pi) + logdet + n)


def _system_score(fit: VarxFit, penalty: float, nobs_common: int) -> float:
    sign, logdet = np.linalg.slogdet(fit.resid_cov)
    if sign <= 0 or not np.isfinite(logdet):
        raise DefinitenessError("residual covariance is not positive definite")
    n_params = fit.n * fit.regressor_count
    return logdet + penalty * n_params / nobs_common


def select_lag(panel: Panel, p_max: int, criterion: Criterion) -> LagSelection:
    """Score candidate lags 1..p_max and pick the minimizer of the summed
    (GDP + CPI) system criterion, ties toward smaller p.

    All candidates are fit on the sample trimmed at p_max so scores compare
    like with like.
    """
    if p_max < 1:
        raise DimensionError(f"p_max must be >= 1, got {p_max}")
    nobs_common = panel.T - p_max
    penalty = 2.0 if criterion is Criterion.AIC else math.log(nobs_common)
    scores: dict[int, tuple[float, float]] = {}
    best_p, best_total = None, math.inf
    for p in range(1, p_max + 1):
        fit = fit_coupled(panel, p, trim=p_max)
        sg = _system_score(fit.gdp_fit, penalty, nobs_common)
        sc = _system_score(fit.cpi_fit, penalty, nobs_common)
        scores[p] = (sg, sc)
        total = sg + sc
        if total < best_total:
            best_p, best_total = p, total
    return LagSelection(criterion=criterion, scores=scores, chosen_p=best_p)
