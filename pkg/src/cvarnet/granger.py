"""Conditional Granger-causality block F-tests and weighted adjacency matrices.

A directed edge source j -> target i exists when deleting source j's p lag
columns from target i's equation significantly worsens the fit (nested-model
F-test). The edge weight is the sum of the unrestricted lag coefficients of
that block. Four matrices cover the four blocks of the coupled system:

    PHI   GDP -> GDP (endogenous block of the GDP line)
    PI    CPI -> GDP (exogenous block of the GDP line)
    PSI   CPI -> CPI (endogenous block of the CPI line)
    GAMMA GDP -> CPI (exogenous block of the CPI line)

Convention throughout: matrix row = target i, column = source j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import betainc

from .errors import DimensionError, SingularDesignError
from .panel import Panel, VariableKind
from .varx import CoupledFit, VarxFit, build_design, _qr_solve


class AdjacencyRole(Enum):
    PHI = "phi"      # GDP -> GDP
    PI = "pi"        # CPI -> GDP
    PSI = "psi"      # CPI -> CPI
    GAMMA = "gamma"  # GDP -> CPI


class Correction(Enum):
    NONE = "none"
    BONFERRONI = "bonferroni"
    BH = "bh"


_ROLE_KINDS = {
    AdjacencyRole.PHI: (VariableKind.GDP, VariableKind.GDP),
    AdjacencyRole.PI: (VariableKind.GDP, VariableKind.CPI),
    AdjacencyRole.PSI: (VariableKind.CPI, VariableKind.CPI),
    AdjacencyRole.GAMMA: (VariableKind.CPI, VariableKind.GDP),
}


@dataclass(frozen=True)
class GrangerTest:
    """One block F-test: does source j's lag block matter for target i?"""

    target: tuple[VariableKind, int]
    source: tuple[VariableKind, int]
    f_stat: float
    df_num: int
    df_den: int
    p_value: float
    significant: bool
    weight_if_significant: float


@dataclass(frozen=True)
class WeightedAdjacency:
    """Signed weighted adjacency matrix for one block role."""

    role: AdjacencyRole
    labels: tuple[str, ...]
    matrix: np.ndarray  # n x n; (i, j) = summed significant lag coefficients j -> i
    alpha: float
    tests: tuple[GrangerTest, ...] = ()
    untestable: tuple[tuple[int, int], ...] = ()  # (i, j) pairs with singular restricted fit


@dataclass(frozen=True)
class CausalityNetwork:
    labels: tuple[str, ...]
    phi: WeightedAdjacency
    pi: WeightedAdjacency
    psi: WeightedAdjacency
    gamma: WeightedAdjacency

    alpha: float
    p: int
    T: int
    correction: Correction = Correction.NONE

    def adjacency(self, role: AdjacencyRole) -> WeightedAdjacency:
        return {
            AdjacencyRole.PHI: self.phi,
            AdjacencyRole.PI: self.pi,
            AdjacencyRole.PSI: self.psi,
            AdjacencyRole.GAMMA: self.gamma,
        }[role]


def f_cdf(x: float, d1: int, d2: int) -> float:
    """CDF of the F(d1, d2) distribution via the regularized incomplete beta."""
    if x <= 0.0:
        return 0.0
    z = d1 * x / (d1 * x + d2)
    return float(betainc(d1 / 2.0, d2 / 2.0, z))


def _line_for_target(panel: Panel, fit: CoupledFit, kind: VariableKind):
    """(line fit, endog data, exog data) for the equation system of `kind`."""
    if kind is VariableKind.GDP:
        return fit.gdp_fit, panel.x, panel.y
    return fit.cpi_fit, panel.y, panel.x


def _source_block(line: VarxFit, target_kind: VariableKind, source_kind: VariableKind):
    """Coefficient stack and design column offset of the source's lag block."""
    n, p = line.n, line.p
    if source_kind is target_kind:
        return line.endog_coefs, 1  # endogenous block starts after the intercept
    return line.exog_coefs, 1 + p * n


def block_f_test(
    panel: Panel,
    fit: CoupledFit,
    target: tuple[VariableKind, int],
    source: tuple[VariableKind, int],
    alpha: float = 0.05,
) -> GrangerTest:
    """Nested-model F-test of H0: all p lag coefficients of source j in target
    i's equation are zero.

    The restricted model is re-estimated by full least squares with the p
    source columns deleted from the design.
    """
    target_kind, i = target
    source_kind, j = source
    line, endog, exog = _line_for_target(panel, fit, target_kind)
    n, p = line.n, line.p
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionError(f"country indices out of range for n={n}: i={i}, j={j}")

    coefs, offset = _source_block(line, target_kind, source_kind)
    Z, Y = build_design(endog, exog, p)
    drop = [offset + s * n + j for s in range(p)]
    keep = [c for c in range(Z.shape[1]) if c not in drop]

    rss_u = float(line.rss_per_equation[i])
    df_den = line.nobs - line.regressor_count
    if df_den <= 0:
        raise DimensionError(
            f"no residual degrees of freedom: T-p={line.nobs}, k={line.regressor_count}"
        )

    beta_r = _qr_solve(Z[:, keep], Y[:, i])
    resid_r = Y[:, i] - Z[:, keep] @ beta_r
    rss_r = float(resid_r @ resid_r)

    f_stat = max(0.0, (rss_r - rss_u) / p / (rss_u / df_den))
    p_value = 1.0 - f_cdf(f_stat, p, df_den)
    weight = float(np.sum(coefs[:, i, j]))
    return GrangerTest(
        target=target,
        source=source,
        f_stat=f_stat,
        df_num=p,
        df_den=df_den,
        p_value=p_value,
        significant=p_value < alpha,
        weight_if_significant=weight,
    )


def _role_pairs(role: AdjacencyRole, n: int):
    """Ordered (i, j) test pairs. Self-lags are nuisance regressors for the
    within-variable blocks (PHI, PSI), so their diagonals are skipped; the
    cross-variable blocks (PI, GAMMA) test the diagonal too."""
    skip_diagonal = role in (AdjacencyRole.PHI, AdjacencyRole.PSI)
    return [
        (i, j)
        for i in range(n)
        for j in range(n)
        if not (skip_diagonal and i == j)
    ]


def build_adjacency(
    panel: Panel,
    fit: CoupledFit,
    role: AdjacencyRole,
    alpha: float,
    correction: Correction = Correction.NONE,
) -> WeightedAdjacency:
    """Run the full pair grid for one block role and assemble the matrix.

    A pair whose restricted design is singular is recorded as untestable and
    contributes a zero entry instead of aborting the run.
    """
    n = fit.n
    target_kind, source_kind = _ROLE_KINDS[role]
    pairs = _role_pairs(role, n)

    tests: dict[tuple[int, int], GrangerTest] = {}
    untestable: list[tuple[int, int]] = []
    for i, j in pairs:
        try:
            tests[(i, j)] = block_f_test(
                panel, fit, (target_kind, i), (source_kind, j), alpha=alpha
            )
        except SingularDesignError:
            untestable.append((i, j))

    significant = _apply_correction(
        {pair: t.p_value for pair, t in tests.items()}, alpha, correction
    )
    matrix = np.zeros((n, n))
    final = []
    for pair, t in tests.items():
        sig = significant[pair]
        if sig != t.significant:
            t = GrangerTest(
                target=t.target, source=t.source, f_stat=t.f_stat,
                df_num=t.df_num, df_den=t.df_den, p_value=t.p_value,
                significant=sig, weight_if_significant=t.weight_if_significant,
            )
        if sig:
            matrix[pair] = t.weight_if_significant
        final.append(t)
    return WeightedAdjacency(
        role=role,
        labels=fit.labels,
        matrix=matrix,
        alpha=alpha,
        tests=tuple(final),
        untestable=tuple(untestable),
    )


def _apply_correction(p_values: dict, alpha: float, correction: Correction) -> dict:
    m = len(p_values)
    if m == 0:
        return {}
    if correction is Correction.NONE:
        return {pair: pv < alpha for pair, pv in p_values.items()}
    if correction is Correction.BONFERRONI:
        return {pair: pv < alpha / m for pair, pv in p_values.items()}
    # Benjamini-Hochberg step-up
    ordered = sorted(p_values.items(), key=lambda kv: kv[1])
    cutoff = 0.0
    for rank, (_, pv) in enumerate(ordered, start=1):
        if pv <= alpha * rank / m:
            cutoff = pv
    return {pair: pv <= cutoff and cutoff > 0.0 for pair, pv in p_values.items()}


def assemble_network(
    panel: Panel,
    fit: CoupledFit,
    alpha: float,
    correction: Correction = Correction.NONE,
) -> CausalityNetwork:
    """All four adjacency matrices plus run metadata; deterministic for a
    given panel, lag order, and alpha."""
    parts = {
        role: build_adjacency(panel, fit, role, alpha, correction)
        for role in AdjacencyRole
    }
    return CausalityNetwork(
        labels=fit.labels,
        phi=parts[AdjacencyRole.PHI],
        pi=parts[AdjacencyRole.PI],
        psi=parts[AdjacencyRole.PSI],
        gamma=parts[AdjacencyRole.GAMMA],
        alpha=alpha,
        p=fit.p,
        T=fit.T,
        correction=correction,
    )
