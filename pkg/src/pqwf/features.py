"""Statistical features of the level-3 wavelet detail band."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dwt import DecompositionResult, ShapeError
from .signal_gen import DisturbanceClass

FEATURE_NAMES = ("entropy", "std_dev", "mean", "skewness", "kurtosis")
FEATURE_LEVEL = 3
# band energy below this fraction of the signal energy counts as all-zero
ZERO_BAND_RTOL = 1e-24


class DegenerateInputError(ValueError):
    """Raised when a statistic has no meaningful value for the input."""


@dataclass(frozen=True)
class FeatureVector:
    entropy: float
    std_dev: float
    mean: float
    skewness: float
    kurtosis: float
    label: DisturbanceClass | None = None

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES])


def _as_coeffs(coeffs) -> np.ndarray:
    d = np.asarray(coeffs, dtype=float).ravel()
    if d.size == 0:
        raise ShapeError("statistic of an empty array")
    return d


def mean(coeffs) -> float:
    return float(np.mean(_as_coeffs(coeffs)))


def std_dev(coeffs) -> float:
    """Population (1/N) standard deviation."""
    d = _as_coeffs(coeffs)
    if d.min() == d.max():
        return 0.0  # the rounded mean of a constant need not equal it
    return float(np.sqrt(np.mean((d - np.mean(d)) ** 2)))


def _standardized_moment(d: np.ndarray, order: int) -> float:
    if d.min() == d.max():
        return 0.0
    centered = d - np.mean(d)
    sigma = np.sqrt(np.mean(centered**2))
    return float(np.mean((centered / sigma) ** order))


def skewness(coeffs) -> float:
    """Third standardized moment; 0 for constant input."""
    return _standardized_moment(_as_coeffs(coeffs), 3)


def kurtosis(coeffs) -> float:
    """Fourth standardized moment (not excess); 0 for constant input."""
    return _standardized_moment(_as_coeffs(coeffs), 4)


def entropy(coeffs) -> float:
    """Shannon entropy in bits of the energy distribution ``d_i^2 / sum d_j^2``."""
    d = _as_coeffs(coeffs)
    peak = np.max(np.abs(d))
    if peak == 0.0:
        raise DegenerateInputError("entropy of an all-zero coefficient array")
    energy = (d / peak) ** 2  # scaled first so squares neither overflow nor underflow en masse
    p = energy / energy.sum()
    p = p[p > 0]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def features_of(coeffs, label: DisturbanceClass | None = None) -> FeatureVector:
    d = _as_coeffs(coeffs)
    return FeatureVector(
        entropy=entropy(d),
        std_dev=std_dev(d),
        mean=mean(d),
        skewness=skewness(d),
        kurtosis=kurtosis(d),
        label=label,
    )


def extract_features(
    decomp: DecompositionResult, label: DisturbanceClass | None = None
) -> FeatureVector:
    """Five statistics of the level-3 detail coefficients of ``decomp``."""
    if decomp.levels < FEATURE_LEVEL:
        raise ShapeError(
            f"need a decomposition with >= {FEATURE_LEVEL} levels, got {decomp.levels}"
        )
    band = decomp.detail(FEATURE_LEVEL)
    total = float(np.sum(decomp.approx**2)) + sum(float(np.sum(d**2)) for d in decomp.details)
    # the db4 highpass annihilates constants only up to rounding
    if float(np.sum(band**2)) <= ZERO_BAND_RTOL * total:
        raise DegenerateInputError("level-3 detail band is numerically zero")
    return features_of(band, label)
