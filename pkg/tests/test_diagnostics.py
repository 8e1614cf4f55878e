import numpy as np
import pytest

from cvarnet import companion_matrix, companion_stability, fit_coupled, ols_cusum
from cvarnet.diagnostics import CUSUM_CRITICAL_VALUES
from cvarnet.errors import ConfigError, DegenerateFitError
from cvarnet.simulate import random_stable_spec, simulate
from cvarnet.varx import EquationRole, VarxFit


def make_fit(endog_coefs, residuals=None, regressor_count=None):
    endog_coefs = np.asarray(endog_coefs, dtype=float)
    p, n, _ = endog_coefs.shape
    if residuals is None:
        residuals = np.random.default_rng(0).normal(size=(30, n))
    residuals = np.asarray(residuals, dtype=float)
    if regressor_count is None:
        regressor_count = 1 + 2 * n * p
    return VarxFit(
        role=EquationRole.GDP_EQUATION,
        p=p,
        intercept=np.zeros(n),
        endog_coefs=endog_coefs,
        exog_coefs=np.zeros((p, n, n)),
        residuals=residuals,
        resid_cov=(residuals.T @ residuals) / residuals.shape[0],
        rss_per_equation=np.sum(residuals * residuals, axis=0),
        regressor_count=regressor_count,
    )


def sympy_moduli(comp):
    import sympy

    M = sympy.Matrix([[sympy.Rational(repr(float(v))) for v in row] for row in comp])
    lam = sympy.symbols("lam")
    poly = sympy.Poly((lam * sympy.eye(M.shape[0]) - M).det(), lam)
    roots = poly.nroots(n=30)
    return np.sort(np.array([abs(complex(r)) for r in roots]))[::-1]


class TestCompanionStability:
    def test_scalar_stable_exact(self):
        report = companion_stability(make_fit([[[0.5]]]))
        assert report.max_modulus == 0.5
        assert report.stable

    def test_scalar_unstable_exact(self):
        report = companion_stability(make_fit([[[1.2]]]))
        assert report.max_modulus == pytest.approx(1.2, abs=1e-15)
        assert not report.stable

    def test_p1_companion_is_coefficient_matrix(self):
        A = np.array([[0.3, -0.1], [0.2, 0.4]])
        assert np.array_equal(companion_matrix(A[None]), A)

    def test_companion_block_layout_p2(self):
        A1 = np.arange(4.0).reshape(2, 2)
        A2 = np.arange(4.0, 8.0).reshape(2, 2)
        comp = companion_matrix(np.stack([A1, A2]))
        assert comp.shape == (4, 4)
        assert np.array_equal(comp[:2, :2], A1)
        assert np.array_equal(comp[:2, 2:], A2)
        assert np.array_equal(comp[2:, :2], np.eye(2))
        assert np.array_equal(comp[2:, 2:], np.zeros((2, 2)))

    def test_moduli_match_sympy_charpoly_oracle(self):
        rng = np.random.default_rng(11)
        coefs = rng.normal(size=(2, 2, 2)) * 0.4
        report = companion_stability(make_fit(coefs))
        oracle = sympy_moduli(companion_matrix(coefs))
        assert np.max(np.abs(report.eigen_moduli - oracle)) < 1e-6

    def test_moduli_permutation_invariant(self):
        rng = np.random.default_rng(12)
        coefs = rng.normal(size=(1, 3, 3)) * 0.4
        perm = [2, 0, 1]
        permuted = coefs[:, perm][:, :, perm]
        a = companion_stability(make_fit(coefs)).eigen_moduli
        b = companion_stability(make_fit(permuted)).eigen_moduli
        assert np.max(np.abs(a - b)) < 1e-10

    def test_fitted_stable_system_is_flagged_stable(self):
        spec = random_stable_spec(n=2, p=1, seed=3, target_radius=0.4)
        panel = simulate(spec, T=400)
        fit = fit_coupled(panel, 1)
        assert companion_stability(fit.gdp_fit).stable
        assert companion_stability(fit.cpi_fit).stable


class TestOlsCusum:
    def test_alternating_residuals_not_rejected(self):
        resid = np.tile([1.0, -1.0], 20)[:, None]
        fit = make_fit([[[0.0]]], residuals=resid, regressor_count=3)
        report = ols_cusum(fit, alpha=0.05)
        # path oscillates between ~0.16 and 0: far below the 1.358 cutoff
        assert report.sup_stats[0] < 0.3
        assert not report.any_rejected

    def test_constant_positive_residuals_rejected(self):
        resid = np.ones((40, 1))
        fit = make_fit([[[0.0]]], residuals=resid, regressor_count=3)
        report = ols_cusum(fit, alpha=0.05)
        # path climbs linearly to sqrt(T-p) ~ 6.2 standard deviations
        assert report.sup_stats[0] > CUSUM_CRITICAL_VALUES[0.05]
        assert report.any_rejected

    def test_final_path_value_near_zero_for_real_fit(self):
        # intercept in the design forces residuals to sum to zero
        spec = random_stable_spec(n=2, p=1, seed=4, target_radius=0.5)
        panel = simulate(spec, T=120)
        fit = fit_coupled(panel, 1)
        report = ols_cusum(fit.gdp_fit)
        assert np.max(np.abs(report.paths[-1])) < 1e-10

    def test_scale_invariance(self):
        rng = np.random.default_rng(5)
        resid = rng.normal(size=(50, 2))
        a = ols_cusum(make_fit(np.zeros((1, 2, 2)), residuals=resid, regressor_count=3))
        b = ols_cusum(
            make_fit(np.zeros((1, 2, 2)), residuals=resid * 1e6, regressor_count=3)
        )
        assert np.max(np.abs(a.paths - b.paths)) < 1e-10
        assert np.max(np.abs(a.sup_stats - b.sup_stats)) < 1e-10

    def test_unsupported_alpha_rejected(self):
        fit = make_fit([[[0.0]]], regressor_count=3)
        with pytest.raises(ConfigError, match="alpha"):
            ols_cusum(fit, alpha=0.03)

    def test_supported_alphas_and_critical_values(self):
        fit = make_fit([[[0.0]]], regressor_count=3)
        assert ols_cusum(fit, alpha=0.10).critical_value == 1.224
        assert ols_cusum(fit, alpha=0.05).critical_value == 1.358
        assert ols_cusum(fit, alpha=0.01).critical_value == 1.628

    def test_zero_variance_equation(self):
        resid = np.zeros((30, 1))
        fit = make_fit([[[0.0]]], residuals=resid, regressor_count=3)
        with pytest.raises(DegenerateFitError, match="variance"):
            ols_cusum(fit)

    def test_no_residual_dof(self):
        fit = make_fit([[[0.0]]], residuals=np.ones((3, 1)), regressor_count=3)
        with pytest.raises(DegenerateFitError):
            ols_cusum(fit)

    def test_labels_carried(self):
        fit = make_fit(np.zeros((1, 2, 2)), regressor_count=3)
        report = ols_cusum(fit, labels=("AAA", "BBB"))
        assert report.labels == ("AAA", "BBB")
