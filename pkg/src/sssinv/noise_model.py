"""Correlated residual-noise synthesis, auxiliary-input perturbation,
residual statistics, and the regression-dilution diagnostic.

The smoothing stage leaves per-angle residual noise that is correlated
between neighbouring interpolation angles; training records are perturbed
with Gaussian noise matching that std/correlation structure (via a Cholesky
factor), plus independent Gaussian noise on the auxiliary SST (1 degC) and
wind (2 m/s) inputs.

The dilution diagnostic is the attenuation of a regression slope caused by
noise on the regressor:  a' = a / (1 + var_noise / var_signal).
"""

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._text import fmt
from .forward_model import SST_BOUNDS, WIND_BOUNDS

AUX_SST_SIGMA = 1.0   # degC
AUX_WIND_SIGMA = 2.0  # m/s


class FactorizationError(ValueError):
    """Correlation matrix is not positive definite."""

    def __init__(self, pivot, message=None):
        self.pivot = pivot
        super().__init__(message or
                         f"matrix not positive definite (pivot {pivot})")


def cholesky_lower(corr):
    """Lower-triangular L with L @ L.T == corr.

    Raises FactorizationError naming the failing pivot index when the matrix
    is not positive definite.
    """
    a = np.asarray(corr, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("corr must be a square matrix")
    n = a.shape[0]
    lower = np.zeros_like(a)
    for j in range(n):
        diag = a[j, j] - np.dot(lower[j, :j], lower[j, :j])
        if diag <= 0.0 or not np.isfinite(diag):
            raise FactorizationError(j)
        lower[j, j] = np.sqrt(diag)
        if j + 1 < n:
            lower[j + 1:, j] = (a[j + 1:, j]
                                - lower[j + 1:, :j] @ lower[j, :j]) / lower[j, j]
    return lower


@dataclass(frozen=True)
class CorrelatedNoiseSpec:
    """Per-angle noise stds (K) plus the correlation matrix driving the
    correlated draws.  Validated on construction (symmetric, unit diagonal,
    positive definite, stds > 0)."""

    sigmas: np.ndarray
    corr: np.ndarray

    def __post_init__(self):
        sigmas = np.asarray(self.sigmas, dtype=np.float64)
        corr = np.asarray(self.corr, dtype=np.float64)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "corr", corr)
        if sigmas.ndim != 1 or np.any(sigmas <= 0):
            raise ValueError("sigmas must be a 1-d vector of positive stds")
        if corr.shape != (sigmas.size, sigmas.size):
            raise ValueError("corr shape must match sigmas length")
        if not np.allclose(corr, corr.T, atol=1e-12):
            raise ValueError("corr must be symmetric")
        if not np.allclose(np.diag(corr), 1.0, atol=1e-12):
            raise ValueError("corr must have a unit diagonal")
        if np.any(np.abs(corr) > 1.0 + 1e-12):
            raise ValueError("corr entries must lie in [-1, 1]")
        object.__setattr__(self, "_chol", cholesky_lower(corr))

    @property
    def n_angles(self):
        return self.sigmas.size

    @property
    def cholesky(self):
        return self._chol


def draw_correlated(spec, rng_seed=0, n=None):
    """Zero-mean Gaussian draws with the spec's stds and correlations.

    ``n=None`` returns one vector of length n_angles; otherwise shape
    (n, n_angles).  Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(rng_seed)
    rows = 1 if n is None else int(n)
    z = rng.standard_normal((rows, spec.n_angles))
    draws = (z @ spec.cholesky.T) * spec.sigmas
    return draws[0] if n is None else draws


class AuxPerturbation(NamedTuple):
    noisy_sst: np.ndarray
    noisy_wind: np.ndarray
    clamp_rate: float


def perturb_aux(sst, wind, rng_seed=0, sst_sigma=AUX_SST_SIGMA,
                wind_sigma=AUX_WIND_SIGMA):
    """Additive Gaussian noise on the auxiliary inputs, clamped to physical
    bounds; the fraction of clamped values is reported."""
    rng = np.random.default_rng(rng_seed)
    sst = np.asarray(sst, dtype=np.float64)
    wind = np.asarray(wind, dtype=np.float64)
    noisy_sst = sst + sst_sigma * rng.standard_normal(sst.shape)
    noisy_wind = wind + wind_sigma * rng.standard_normal(wind.shape)
    clipped_sst = np.clip(noisy_sst, *SST_BOUNDS)
    clipped_wind = np.clip(noisy_wind, *WIND_BOUNDS)
    n_clamped = int(np.count_nonzero(clipped_sst != noisy_sst)
                    + np.count_nonzero(clipped_wind != noisy_wind))
    rate = n_clamped / max(sst.size + wind.size, 1)
    if sst.ndim == 0:
        return AuxPerturbation(float(clipped_sst), float(clipped_wind), rate)
    return AuxPerturbation(clipped_sst, clipped_wind, rate)


@dataclass(frozen=True)
class ResidualStats:
    """Per-angle mean/std of smoothing residuals plus their sample
    correlation matrix."""

    bias: np.ndarray
    std: np.ndarray
    corr: np.ndarray
    n: int


def estimate_residual_stats(interpolated, truth):
    """Residual statistics of (interpolated - truth) over pixels.

    Both inputs are (n_pixels, n_angles).  The sample correlation matrix is
    symmetrized and its diagonal forced to exactly 1.
    """
    interp = np.asarray(interpolated, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if interp.shape != truth.shape:
        raise ValueError(f"shape mismatch {interp.shape} vs {truth.shape}")
    if interp.ndim != 2:
        raise ValueError("inputs must be 2-d (pixels x angles)")
    n = interp.shape[0]
    if n < 2:
        raise ValueError("need at least 2 pixels")
    res = interp - truth
    bias = res.mean(axis=0)
    std = res.std(axis=0, ddof=1)
    centred = res - bias
    cov = centred.T @ centred / (n - 1)
    denom = np.sqrt(np.outer(np.diag(cov), np.diag(cov)))
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(denom > 0, cov / denom, 0.0)
    corr = 0.5 * (corr + corr.T)
    np.fill_diagonal(corr, 1.0)
    return ResidualStats(bias=bias, std=std, corr=corr, n=n)


def residual_stats_to_spec(stats):
    """Turn estimated residual statistics into a noise spec for injection."""
    return CorrelatedNoiseSpec(sigmas=stats.std.copy(), corr=stats.corr.copy())


def diluted_slope(a, var_noise, var_signal):
    """Attenuated regression slope under regressor noise:
    a / (1 + var_noise / var_signal)."""
    if var_signal <= 0:
        raise ValueError("var_signal must be > 0")
    if var_noise < 0:
        raise ValueError("var_noise must be >= 0")
    return a / (1.0 + var_noise / var_signal)


def write_noise_spec(path, spec):
    """Serialize as CSV: one sigmas row, then the correlation matrix rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([fmt(v) for v in spec.sigmas])
        for row in spec.corr:
            writer.writerow([fmt(v) for v in row])


def read_noise_spec(path):
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    return CorrelatedNoiseSpec(sigmas=np.array(rows[0]),
                               corr=np.array(rows[1:]))
