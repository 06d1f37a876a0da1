"""Daubechies-4 (8-tap) discrete wavelet transform with periodic boundaries."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np


class ShapeError(ValueError):
    """Raised when an array length is incompatible with the transform."""


PERIODIC = "periodic"
BOUNDARY_MODES = (PERIODIC,)


@dataclass(frozen=True)
class WaveletFilterPair:
    lowpass: np.ndarray
    highpass: np.ndarray

    @property
    def length(self) -> int:
        return len(self.lowpass)


@dataclass
class DecompositionResult:
    approx: np.ndarray
    details: list[np.ndarray]  # details[0] is level 1 (finest)
    levels: int
    boundary_mode: str = PERIODIC
    signal_length: int = field(default=0)

    def detail(self, level: int) -> np.ndarray:
        """Detail band at 1-based ``level``."""
        if not 1 <= level <= self.levels:
            raise ShapeError(f"level {level} outside 1..{self.levels}")
        return self.details[level - 1]


def daubechies_lowpass(vanishing_moments: int) -> np.ndarray:
    """Minimum-phase Daubechies scaling filter via spectral factorization.

    Returns ``2 * vanishing_moments`` taps normalized to sum to sqrt(2),
    ordered so that the largest taps come first.
    """
    n = vanishing_moments
    # P(y) = sum_k C(n-1+k, k) y^k, highest power first for np.roots
    poly_y = [math.comb(n - 1 + k, k) for k in range(n - 1, -1, -1)]
    zeros = []
    for y in np.roots(poly_y) if n > 1 else []:
        # y = (2 - z - 1/z)/4  <=>  z^2 - (2 - 4y) z + 1 = 0
        pair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        zeros.append(pair[np.argmin(np.abs(pair))])
    zeros.extend([-1.0] * n)
    taps = np.real(np.poly(zeros))
    taps = taps * (math.sqrt(2.0) / taps.sum())
    if abs(taps[0]) < abs(taps[-1]):
        taps = taps[::-1]
    return taps


@functools.lru_cache(maxsize=None)
def _db4_taps() -> tuple[tuple[float, ...], tuple[float, ...]]:
    lo = daubechies_lowpass(4)
    k = np.arange(len(lo))
    hi = (-1.0) ** k * lo[::-1]
    return tuple(lo.tolist()), tuple(hi.tolist())


def db4_filters() -> WaveletFilterPair:
    """The 8-tap, four-vanishing-moment Daubechies analysis pair."""
    lo, hi = _db4_taps()
    return WaveletFilterPair(lowpass=np.array(lo), highpass=np.array(hi))


def _check_mode(mode: str) -> None:
    if mode not in BOUNDARY_MODES:
        raise ValueError(f"unsupported boundary mode {mode!r}; expected one of {BOUNDARY_MODES}")


def _gather_index(n: int, taps: int) -> np.ndarray:
    return (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n


def dwt_level(
    signal: np.ndarray,
    filters: WaveletFilterPair | None = None,
    mode: str = PERIODIC,
) -> tuple[np.ndarray, np.ndarray]:
    """One analysis step: ``a[n] = sum_k lo[k] x[(2n+k) mod N]``, same for ``d``."""
    _check_mode(mode)
    filters = filters or db4_filters()
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ShapeError("dwt_level expects a 1-D signal")
    n = len(x)
    if n < 2 or n % 2:
        raise ShapeError(f"periodic DWT needs an even length >= 2, got {n}")
    frames = x[_gather_index(n, filters.length)]
    return frames @ filters.lowpass, frames @ filters.highpass


def idwt_level(
    approx: np.ndarray,
    detail: np.ndarray,
    filters: WaveletFilterPair | None = None,
    mode: str = PERIODIC,
) -> np.ndarray:
    """Adjoint (and, for an orthonormal pair, inverse) of :func:`dwt_level`."""
    _check_mode(mode)
    filters = filters or db4_filters()
    a = np.asarray(approx, dtype=float)
    d = np.asarray(detail, dtype=float)
    if a.shape != d.shape or a.ndim != 1:
        raise ShapeError(f"approx/detail length mismatch: {a.shape} vs {d.shape}")
    n = 2 * len(a)
    contrib = a[:, None] * filters.lowpass[None, :] + d[:, None] * filters.highpass[None, :]
    out = np.zeros(n)
    np.add.at(out, _gather_index(n, filters.length).ravel(), contrib.ravel())
    return out


def wavedec(
    signal: np.ndarray,
    levels: int = 3,
    filters: WaveletFilterPair | None = None,
    mode: str = PERIODIC,
) -> DecompositionResult:
    """Multi-level decomposition by iterating :func:`dwt_level` on the approximation."""
    _check_mode(mode)
    if levels < 1:
        raise ShapeError("levels must be >= 1")
    x = np.asarray(signal, dtype=float)
    n = len(x)
    if n == 0 or n % (2**levels):
        raise ShapeError(f"length {n} is not divisible by 2**{levels}")
    filters = filters or db4_filters()
    details = []
    approx = x
    for _ in range(levels):
        approx, d = dwt_level(approx, filters, mode)
        details.append(d)
    return DecompositionResult(
        approx=approx, details=details, levels=levels, boundary_mode=mode, signal_length=n
    )


def waverec(result: DecompositionResult, filters: WaveletFilterPair | None = None) -> np.ndarray:
    filters = filters or db4_filters()
    if len(result.details) != result.levels:
        raise ShapeError("details list does not match level count")
    x = np.asarray(result.approx, dtype=float)
    for d in reversed(result.details):
        if len(d) != len(x):
            raise ShapeError(f"coefficient length mismatch: {len(x)} vs {len(d)}")
        x = idwt_level(x, d, filters, result.boundary_mode)
    return x
