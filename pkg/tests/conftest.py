"""Shared oracles and fixtures.

The oracles here are deliberately independent of the library's numerical
paths: plain normal-equations OLS instead of the QR route, lgamma-based
quadrature of the F density instead of the incomplete-beta CDF, and a
sympy characteristic polynomial instead of companion eigenvalues.
"""

import math
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "cvarnet" / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


def ols_normal_equations(Z, y):
    """Reference least squares via the normal equations."""
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.linalg.solve(Z.T @ Z, Z.T @ y)


def ols_rss(Z, y):
    beta = ols_normal_equations(Z, y)
    resid = y - Z @ beta
    return float(resid @ resid)


def brute_force_f(Z_full, y, drop_cols, q):
    """Nested-model F statistic from two independent regressions.

    q restrictions (the dropped columns), denominator df = rows - full params.
    """
    keep = [c for c in range(Z_full.shape[1]) if c not in set(drop_cols)]
    rss_u = ols_rss(Z_full, y)
    rss_r = ols_rss(Z_full[:, keep], y)
    df_den = Z_full.shape[0] - Z_full.shape[1]
    return ((rss_r - rss_u) / q) / (rss_u / df_den), df_den


def f_density(x, d1, d2):
    if x <= 0:
        return 0.0
    log_b = (
        math.lgamma(d1 / 2) + math.lgamma(d2 / 2) - math.lgamma((d1 + d2) / 2)
    )
    log_num = (d1 / 2) * math.log(d1 / d2) + (d1 / 2 - 1) * math.log(x)
    log_den = ((d1 + d2) / 2) * math.log1p(d1 * x / d2)
    return math.exp(log_num - log_den - log_b)


def f_cdf_quadrature(x, d1, d2):
    """F CDF by adaptive quadrature of the density."""
    if x <= 0:
        return 0.0
    val, _ = quad(f_density, 0.0, x, args=(d1, d2), limit=200)
    return val
