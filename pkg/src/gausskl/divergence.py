"""Closed-form divergence and entropy kernels for zero-mean Gaussians.

All results are in nats.  Zero mean is a global modeling assumption of this
package; means never appear in any signature.

The central quantity is the Gaussian-vs-Gaussian divergence

    KL(y || x) = 0.5 * [ tr(Sy Sx^-1) - ln det(Sy Sx^-1) - m ]

together with its scalar reduction and the diagonal comparison bound: when the
reference covariance Sx is diagonal, the divergence is bounded below by the
sum of per-coordinate scalar terms built from the diagonal of Sy, with
equality when Sy is itself diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DimensionMismatch, NonPositiveVariance
from .linalg import CholFactor, DiagSpectrum, SpdMatrix, cholesky, trace_ratio

# Divergences are measured in nats (natural log) throughout; callers convert.
Nats = float

LN_2PI = math.log(2.0 * math.pi)

# Gaps in [-GAP_CLAMP_TOL, 0) are floating-point artifacts of a mathematically
# nonnegative quantity: clamped in reports, flagged so callers can count them.
GAP_CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class GapReport:
    """Exact divergence, its diagonal lower bound, and their gap.

    ``gap`` is clamped to 0 when the raw difference lies in
    ``[-GAP_CLAMP_TOL, 0)``; ``clamped`` records that this happened.  The raw
    difference is always recoverable as ``kl_exact - bound``.
    """

    kl_exact: Nats
    bound: Nats
    gap: float
    clamped: bool


def kl_scalar(var_x: float, var_y: float) -> Nats:
    """Divergence between zero-mean scalar Gaussians with the given variances.

    Returns 0.5 * [r - ln(r) - 1] with r = var_y / var_x.
    """
    if not (var_x > 0.0 and math.isfinite(var_x)):
        raise NonPositiveVariance(f"var_x must be finite and > 0, got {var_x!r}")
    if not (var_y > 0.0 and math.isfinite(var_y)):
        raise NonPositiveVariance(f"var_y must be finite and > 0, got {var_y!r}")
    r = var_y / var_x
    return 0.5 * (r - math.log(r) - 1.0)


def kl_diagonal(lx: DiagSpectrum, ly: DiagSpectrum) -> Nats:
    """Divergence between zero-mean Gaussians with diagonal covariances.

    Accumulated as the left-to-right sum of per-coordinate scalar terms, so it
    equals ``sum(kl_scalar(vx, vy) for ...)`` bit for bit.
    """
    if lx.dim != ly.dim:
        raise DimensionMismatch(f"spectrum dims differ: {lx.dim} != {ly.dim}")
    total = 0.0
    for vx, vy in zip(lx.variances, ly.variances):
        total += kl_scalar(float(vx), float(vy))
    return total


def kl_gaussian(sx: SpdMatrix, sy: SpdMatrix) -> Nats:
    """Divergence between zero-mean Gaussians with covariances sx and sy.

    ln det(Sy Sx^-1) is computed as the difference of the two Cholesky
    log-determinants; the (nonsymmetric) product matrix is never formed.
    """
    if sx.dim != sy.dim:
        raise DimensionMismatch(f"covariance dims differ: {sx.dim} != {sy.dim}")
    fx = cholesky(sx)
    fy = cholesky(sy)
    tr = trace_ratio(sy, fx)
    log_det_ratio = fy.log_det - fx.log_det
    return 0.5 * (tr - log_det_ratio - sx.dim)


def diagonal_lower_bound(lx: DiagSpectrum, sy: SpdMatrix) -> Nats:
    """Lower bound on KL(y || x) for Gaussian x with diagonal covariance lx.

    Only the diagonal of sy enters: the bound is the per-coordinate scalar
    divergence sum built from sy's diagonal terms.  It holds for every
    distribution y with covariance sy, not just Gaussian y.
    """
    if lx.dim != sy.dim:
        raise DimensionMismatch(f"spectrum dim {lx.dim} != matrix dim {sy.dim}")
    return kl_diagonal(lx, sy.diagonal())


def kl_gap_diagonal(lx: DiagSpectrum, sy: SpdMatrix) -> GapReport:
    """Gaussian divergence against a diagonal reference, and its bound gap.

    The gap kl_exact - bound is nonnegative up to roundoff for every SPD sy,
    and zero when sy is diagonal.
    """
    kl_exact = kl_gaussian(lx.as_matrix(), sy)
    bound = diagonal_lower_bound(lx, sy)
    raw = kl_exact - bound
    if -GAP_CLAMP_TOL <= raw < 0.0:
        return GapReport(kl_exact=kl_exact, bound=bound, gap=0.0, clamped=True)
    return GapReport(kl_exact=kl_exact, bound=bound, gap=raw, clamped=False)


def gaussian_entropy(f: CholFactor) -> Nats:
    """Differential entropy of a zero-mean Gaussian with the factored covariance.

    Returns 0.5 * m * ln(2*pi*e) + 0.5 * log_det.
    """
    return 0.5 * f.dim * (LN_2PI + 1.0) + 0.5 * f.log_det
