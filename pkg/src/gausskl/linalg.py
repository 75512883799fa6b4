"""Dense symmetric positive-definite matrix kernels.

Covariance matrices enter as raw arrays, get certified by :func:`validate_spd`,
and are consumed through their Cholesky factors.  Explicit matrix inversion is
never used; every application of an inverse goes through triangular solves
against the factor, which is the numerically robust route for ill-conditioned
input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    AsymmetryExceedsTolerance,
    DimensionMismatch,
    MatrixParseError,
    NonPositiveVariance,
    NotPositiveDefinite,
    NotSquare,
)

# Relative asymmetry treated as roundoff noise and averaged away; anything
# larger is rejected as a user error rather than silently repaired.
ASYMMETRY_TOL = 1e-8

# Dense O(m^3) kernels; desk-scale verification does not need more.
MAX_DIM = 512


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpdMatrix:
    """A certified symmetric positive-definite covariance matrix.

    Construct via :func:`validate_spd`; the entries array is read-only.
    """

    dim: int
    entries: np.ndarray

    def diagonal(self) -> "DiagSpectrum":
        """The diagonal variances as a spectrum (always positive for SPD)."""
        return DiagSpectrum.from_variances(np.diag(self.entries))


@dataclass(frozen=True)
class CholFactor:
    """Lower-triangular Cholesky factor of an SpdMatrix.

    ``lower @ lower.T`` reconstructs the source matrix; ``log_det`` is the
    log-determinant of the source, equal to ``2 * sum(log(diag(lower)))``.
    """

    dim: int
    lower: np.ndarray
    log_det: float


@dataclass(frozen=True)
class DiagSpectrum:
    """A vector of strictly positive variances (a diagonal covariance)."""

    dim: int
    variances: np.ndarray

    @classmethod
    def from_variances(cls, variances) -> "DiagSpectrum":
        v = np.atleast_1d(np.asarray(variances, dtype=float))
        if v.ndim != 1 or v.size == 0:
            raise NonPositiveVariance("variance spectrum must be a non-empty 1-D vector")
        if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
            raise NonPositiveVariance(
                f"all variances must be finite and > 0, got min {v.min()!r}"
            )
        return cls(dim=v.size, variances=_readonly(v))

    def as_matrix(self) -> SpdMatrix:
        """Embed the spectrum as a dense diagonal SpdMatrix."""
        return validate_spd(np.diag(self.variances))


def validate_spd(raw) -> SpdMatrix:
    """Certify a raw square array as symmetric positive definite.

    Asymmetry within ``ASYMMETRY_TOL`` (relative, with an absolute floor of 1)
    is averaged away as ``(raw + raw.T) / 2``; larger asymmetry is an error.
    Positive definiteness is decided by attempting a Cholesky factorization,
    which is the operation actually consumed downstream.

    Raises
    ------
    NotSquare
        If ``raw`` is not a 2-D square array.
    AsymmetryExceedsTolerance
        If relative asymmetry is above ``ASYMMETRY_TOL``.
    NotPositiveDefinite
        If factorization fails (non-finite entries included).
    """
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotSquare(f"expected a square matrix, got shape {arr.shape}")
    dim = arr.shape[0]
    if dim > MAX_DIM:
        raise ValueError(f"dimension {dim} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise NotPositiveDefinite("matrix has non-finite entries")

    scale = np.maximum(1.0, np.abs(arr))
    rel_asym = np.abs(arr - arr.T) / scale
    worst = float(rel_asym.max())
    if worst > ASYMMETRY_TOL:
        raise AsymmetryExceedsTolerance(
            f"relative asymmetry {worst:.3e} exceeds tolerance {ASYMMETRY_TOL:.1e}"
        )

    sym = 0.5 * (arr + arr.T)
    try:
        np.linalg.cholesky(sym)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"matrix is not positive definite: {exc}") from exc
    return SpdMatrix(dim=dim, entries=_readonly(sym))


def cholesky(a: SpdMatrix) -> CholFactor:
    """Lower-triangular factorization with cached log-determinant.

    Raises NotPositiveDefinite if a pivot underflows despite validation
    (near-singular input).
    """
    try:
        lower = np.linalg.cholesky(a.entries)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"factorization failed: {exc}") from exc
    diag = np.diag(lower)
    if np.any(diag <= 0.0):
        raise NotPositiveDefinite("factorization produced a non-positive pivot")
    log_det = 2.0 * float(np.sum(np.log(diag)))
    return CholFactor(dim=a.dim, lower=_readonly(lower), log_det=log_det)


def trace_ratio(sy: SpdMatrix, fx: CholFactor) -> float:
    """tr(sy @ inv(sx)) where ``fx`` factors sx, via triangular solves.

    With sx = L L^T, tr(sy sx^-1) = tr(L^-1 sy L^-T); both inverse
    applications are forward substitutions against L.
    """
    if sy.dim != fx.dim:
        raise DimensionMismatch(f"matrix dim {sy.dim} != factor dim {fx.dim}")
    w = solve_triangular(fx.lower, sy.entries, lower=True)
    v = solve_triangular(fx.lower, w.T, lower=True)
    return float(np.trace(v))


def random_spd(dim: int, seed: int, condition_target: float) -> SpdMatrix:
    """Reproducible random SPD matrix with a prescribed conditioning target.

    Eigenvalues are drawn log-uniformly from
    ``[1/sqrt(condition_target), sqrt(condition_target)]`` and conjugated by a
    Haar-random orthogonal matrix, so ill-conditioning is exercised evenly in
    log space.  Deterministic in ``(dim, seed, condition_target)``.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if dim > MAX_DIM:
        raise ValueError(f"dim {dim} exceeds supported maximum {MAX_DIM}")
    if condition_target < 1.0:
        raise ValueError(f"condition_target must be >= 1, got {condition_target}")

    rng = np.random.default_rng(seed)
    half_log = 0.5 * math.log(condition_target)
    eigs = np.exp(rng.uniform(-half_log, half_log, size=dim))
    g = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # Sign-fix the columns so q is Haar-distributed rather than QR-biased.
    q = q * np.sign(np.diag(r))
    a = (q * eigs) @ q.T
    return validate_spd(0.5 * (a + a.T))


def read_matrix_csv(path) -> np.ndarray:
    """Parse a headerless CSV matrix file into a raw (unvalidated) array.

    One row per line, comma-separated decimal entries.  Blank lines are
    ignored.  Raises MatrixParseError on empty, ragged, or non-numeric input.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            cells = stripped.split(",")
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise MatrixParseError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise MatrixParseError(f"{path}: no numeric rows found")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise MatrixParseError(
                f"{path}: line {i} has {len(row)} entries, expected {width}"
            )
    return np.array(rows, dtype=float)


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    """Write a matrix as headerless CSV with 17 significant digits per entry.

    17 digits make the double-precision round-trip lossless.
    """
    arr = np.asarray(matrix, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.atleast_2d(arr):
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")
