"""Sampling-based oracle layer: exact-density models and a Monte Carlo KL estimator.

Two model families, both zero-mean and both with exactly evaluable log
densities:

* Gaussian with a factored covariance.
* Two-component Gaussian mixture whose components are scaled copies of a
  target covariance, engineered so the overall covariance equals the target
  exactly (zero-mean components make covariances additive).  For any positive
  spread the mixture is genuinely non-Gaussian, which makes it a tractable
  witness family for divergence inequalities that range over all
  distributions with a prescribed covariance.

The estimator evaluates the divergence definition directly: a sample average
of ``log p_y - log p_x`` under draws from ``p_y``.  It shares no code path
with the closed forms in :mod:`gausskl.divergence`, so each side can serve as
the other's oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.linalg import solve_triangular

from .divergence import LN_2PI, Nats
from .errors import BuildError, DimensionMismatch, SpreadTooLarge
from .linalg import CholFactor, SpdMatrix, cholesky, validate_spd

# Build-time normalization self-check (scalar models only): quadrature of the
# density over [-40*sigma, 40*sigma] must integrate to 1 within this.
_NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class GaussianModel:
    """Zero-mean Gaussian with factored covariance."""

    dim: int
    factor: CholFactor

    kind = "gaussian"

    def log_density_batch(self, points: np.ndarray) -> np.ndarray:
        return _gaussian_log_density(self.factor, points)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """n draws as L @ z for standard-normal z (numpy PCG64 generator)."""
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((n, self.dim))
        return z @ self.factor.lower.T


@dataclass(frozen=True)
class MixtureModel:
    """Zero-mean two-component Gaussian mixture with prescribed covariance.

    ``covariance`` is the exact overall covariance
    ``weight * S1 + (1 - weight) * S2``.
    """

    dim: int
    weight: float
    factor_one: CholFactor
    factor_two: CholFactor
    covariance: SpdMatrix

    kind = "two-component-mixture"

    def log_density_batch(self, points: np.ndarray) -> np.ndarray:
        # Max-shifted log-sum of the two weighted component densities, so a
        # far-tail point where one component underflows stays finite.
        a = math.log(self.weight) + _gaussian_log_density(self.factor_one, points)
        b = math.log1p(-self.weight) + _gaussian_log_density(self.factor_two, points)
        return np.logaddexp(a, b)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Per draw: one uniform picks the component, then L_c @ z.

        The generator emits the n component-selection uniforms first, then a
        single (n, dim) standard-normal block shared by both transforms.
        """
        rng = np.random.default_rng(seed)
        pick_one = rng.random(n) < self.weight
        z = rng.standard_normal((n, self.dim))
        x1 = z @ self.factor_one.lower.T
        x2 = z @ self.factor_two.lower.T
        return np.where(pick_one[:, None], x1, x2)


DensityModel = Union[GaussianModel, MixtureModel]


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its standard error and provenance.

    ``std_error`` is the sample standard deviation of the per-point log-ratio
    divided by sqrt(n_samples).  Identical (models, n, seed) inputs give a
    bit-identical estimate.
    """

    value: Nats
    std_error: float
    n_samples: int
    seed: int


def _gaussian_log_density(factor: CholFactor, points: np.ndarray) -> np.ndarray:
    u = solve_triangular(factor.lower, points.T, lower=True, check_finite=False)
    quad_form = np.sum(u * u, axis=0)
    return -0.5 * (factor.dim * LN_2PI + factor.log_det + quad_form)


def _check_scalar_normalization(model: DensityModel) -> None:
    if model.kind == "gaussian":
        sigma = float(model.factor.lower[0, 0])
    else:
        sigma = max(float(model.factor_one.lower[0, 0]), float(model.factor_two.lower[0, 0]))

    def density(u: float) -> float:
        return math.exp(log_density(model, np.array([u])))

    total, _ = quad(density, -40.0 * sigma, 40.0 * sigma,
                    points=[-4.0 * sigma, 0.0, 4.0 * sigma], limit=200)
    if abs(total - 1.0) > _NORMALIZATION_TOL:
        raise BuildError(
            f"scalar density integrates to {total!r}, expected 1 within {_NORMALIZATION_TOL}"
        )


def build_gaussian(cov: SpdMatrix) -> GaussianModel:
    """Gaussian model from a certified covariance."""
    model = GaussianModel(dim=cov.dim, factor=cholesky(cov))
    if cov.dim == 1:
        _check_scalar_normalization(model)
    return model


def build_matched_mixture(target: SpdMatrix, w: float, spread: float, seed: int = 0) -> MixtureModel:
    """Two-component mixture whose overall covariance equals ``target`` exactly.

    Components are scaled copies of the target:

        S1 = (1 - spread) * target
        S2 = (1 + spread * w / (1 - w)) * target

    so that w*S1 + (1-w)*S2 = target identically.  Any spread in (0, 1) keeps
    both components SPD and makes the mixture non-Gaussian.  The construction
    is deterministic in (target, w, spread); ``seed`` is accepted for
    signature symmetry with the samplers and does not affect the model.
    """
    if not (0.0 < w < 1.0):
        raise BuildError(f"mixture weight must lie strictly in (0, 1), got {w!r}")
    if not (spread > 0.0 and math.isfinite(spread)):
        raise BuildError(f"spread must lie strictly in (0, 1), got {spread!r}")
    scale_one = 1.0 - spread
    scale_two = 1.0 + spread * w / (1.0 - w)
    if scale_one <= 0.0 or scale_two <= 0.0:
        raise SpreadTooLarge(
            f"spread {spread!r} drives a component scale to {min(scale_one, scale_two)!r}"
        )
    f1 = cholesky(validate_spd(scale_one * target.entries))
    f2 = cholesky(validate_spd(scale_two * target.entries))
    model = MixtureModel(dim=target.dim, weight=w, factor_one=f1, factor_two=f2,
                         covariance=target)
    if target.dim == 1:
        _check_scalar_normalization(model)
    return model


def sample(model: DensityModel, n: int, seed: int) -> np.ndarray:
    """n independent zero-mean draws from the model, deterministic in seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return model.sample(n, seed)


def log_density(model: DensityModel, point: np.ndarray) -> float:
    """Exact log-density of the model at a single point."""
    p = np.asarray(point, dtype=float)
    if p.ndim != 1 or p.size != model.dim:
        raise DimensionMismatch(f"point shape {p.shape} does not match dim {model.dim}")
    return float(model.log_density_batch(p[None, :])[0])


def mc_kl(py: DensityModel, px: DensityModel, n: int, seed: int) -> McEstimate:
    """Monte Carlo divergence estimate: mean of log p_y - log p_x under p_y."""
    if py.dim != px.dim:
        raise DimensionMismatch(f"model dims differ: {py.dim} != {px.dim}")
    if n < 100:
        raise ValueError(f"n must be >= 100 for a usable standard error, got {n}")
    draws = sample(py, n, seed)
    log_ratio = py.log_density_batch(draws) - px.log_density_batch(draws)
    value = float(np.mean(log_ratio))
    std_error = float(np.std(log_ratio, ddof=1) / math.sqrt(n))
    return McEstimate(value=value, std_error=std_error, n_samples=n, seed=seed)
