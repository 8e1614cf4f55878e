"""Seeded simulation of the coupled system with known parameters.

The noise pipeline is pinned for cross-platform bitwise reproducibility:
Philox4x64 counter-based bit generator, uniforms built from 53-bit integers,
normals via the inverse CDF (no ziggurat). Identical (spec, seed, T) yields
byte-identical panels everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import DefinitenessError, DimensionError, StationarityError
from .panel import Panel, quarter_label

RNG_ALGORITHM = "philox4x64"
NORMAL_TRANSFORM = "inverse-cdf"

DEFAULT_BURN_IN = 200


@dataclass(frozen=True)
class GeneratorSpec:
    """Fully specified coupled system used as ground truth in simulations."""

    n: int
    p: int
    intercept_x: np.ndarray   # (n,)
    intercept_y: np.ndarray   # (n,)
    phi: np.ndarray           # (p, n, n)  GDP <- GDP lags
    pi: np.ndarray            # (p, n, n)  GDP <- CPI lags
    psi: np.ndarray           # (p, n, n)  CPI <- CPI lags
    gamma: np.ndarray         # (p, n, n)  CPI <- GDP lags
    cov_x: np.ndarray         # (n, n) noise covariance of the GDP line
    cov_y: np.ndarray         # (n, n) noise covariance of the CPI line
    seed: int = 0
    burn_in: int = DEFAULT_BURN_IN
    noise_free: bool = False  # degenerate test mode: skip noise and PD checks

    def __post_init__(self):
        n, p = self.n, self.p
        for name in ("intercept_x", "intercept_y"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(n)
            object.__setattr__(self, name, arr)
        for name in ("phi", "pi", "psi", "gamma"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(p, n, n)
            object.__setattr__(self, name, arr)
        for name in ("cov_x", "cov_y"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(n, n)
            object.__setattr__(self, name, arr)


def joint_companion(spec: GeneratorSpec) -> np.ndarray:
    """Companion matrix of the stacked 2n-dimensional system with lag blocks
    [[phi, pi], [gamma, psi]]."""
    n, p = spec.n, spec.p
    m = 2 * n
    comp = np.zeros((m * p, m * p))
    for s in range(p):
        block = np.block([[spec.phi[s], spec.pi[s]], [spec.gamma[s], spec.psi[s]]])
        comp[:m, s * m : (s + 1) * m] = block
    if p > 1:
        comp[m:, : m * (p - 1)] = np.eye(m * (p - 1))
    return comp


def spectral_radius(spec: GeneratorSpec) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(joint_companion(spec)))))


def _noise_factor(cov: np.ndarray, name: str) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise DefinitenessError(f"{name} covariance is not positive definite") from None


def _standard_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    # 53-bit uniforms shifted into (0, 1), then the normal inverse CDF
    u = (rng.integers(0, 1 << 53, size=size).astype(float) + 0.5) / float(1 << 53)
    return ndtri(u)


def simulate(spec: GeneratorSpec, T: int, start_quarter: str = "2012Q4") -> Panel:
    """Iterate the coupled recursion from zero initial conditions, discard the
    burn-in, and return T retained steps as a panel."""
    n, p = spec.n, spec.p
    if T < p + 2:
        raise DimensionError(f"need T >= p + 2 = {p + 2}, got {T}")
    radius = spectral_radius(spec)
    if radius >= 1.0:
        raise StationarityError(
            f"generator is not stationary: companion spectral radius {radius:.6f} >= 1"
        )
    if spec.noise_free:
        lx = ly = None
    else:
        lx = _noise_factor(spec.cov_x, "GDP-line")
        ly = _noise_factor(spec.cov_y, "CPI-line")
    rng = np.random.Generator(np.random.Philox(spec.seed))

    steps = spec.burn_in + T
    x = np.zeros((steps + p, n))
    y = np.zeros((steps + p, n))
    for t in range(p, steps + p):
        xt = spec.intercept_x.copy()
        yt = spec.intercept_y.copy()
        for s in range(1, p + 1):
            xt += spec.phi[s - 1] @ x[t - s] + spec.pi[s - 1] @ y[t - s]
            yt += spec.psi[s - 1] @ y[t - s] + spec.gamma[s - 1] @ x[t - s]
        if not spec.noise_free:
            z = _standard_normals(rng, 2 * n)
            xt += lx @ z[:n]
            yt += ly @ z[n:]
        x[t] = xt
        y[t] = yt

    first = p + spec.burn_in
    labels = tuple(f"C{i:02d}" for i in range(n))
    q0 = _parse_start(start_quarter)
    return Panel(
        labels=labels,
        quarters=tuple(quarter_label(q0 + t) for t in range(T)),
        x=x[first : first + T],
        y=y[first : first + T],
    )


def _parse_start(start_quarter: str) -> int:
    from .panel import quarter_index

    return quarter_index(start_quarter)


def random_stable_spec(
    n: int,
    p: int,
    seed: int,
    target_radius: float = 0.5,
    noise_scale: float = 0.1,
) -> GeneratorSpec:
    """Draw a random coupled system and rescale its lag stacks so the joint
    companion spectral radius hits `target_radius`.

    Scaling every lag-s matrix by c**s scales all companion eigenvalues by c,
    so the radius lands on target up to eigensolver precision.
    """
    if not 0.0 < target_radius < 1.0:
        raise StationarityError(f"target radius must be in (0, 1), got {target_radius}")
    rng = np.random.Generator(np.random.Philox(seed))
    stacks = {
        name: _standard_normals(rng, p * n * n).reshape(p, n, n) * 0.3
        for name in ("phi", "pi", "psi", "gamma")
    }
    bx = _standard_normals(rng, n) * 0.1
    by = _standard_normals(rng, n) * 0.1
    spec = GeneratorSpec(
        n=n, p=p,
        intercept_x=bx, intercept_y=by,
        cov_x=np.eye(n) * noise_scale**2,
        cov_y=np.eye(n) * noise_scale**2,
        seed=seed,
        **stacks,
    )
    radius = spectral_radius(spec)
    if radius == 0.0:
        raise StationarityError("drawn system has zero spectral radius; cannot rescale")
    c = target_radius / radius
    scaled = {
        name: np.stack([stacks[name][s] * c ** (s + 1) for s in range(p)])
        for name in stacks
    }
    return GeneratorSpec(
        n=n, p=p,
        intercept_x=bx, intercept_y=by,
        cov_x=np.eye(n) * noise_scale**2,
        cov_y=np.eye(n) * noise_scale**2,
        seed=seed,
        **scaled,
    )
