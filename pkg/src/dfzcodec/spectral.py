"""2D DFT of height grids and the ideal radial low-pass filter.

All filtering happens in unshifted coordinates: the distance of (u, v) from DC
is measured with wrap-around, which for a radial mask is the same as masking a
centered (fftshift-ed) spectrum.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from dfzcodec.errors import EmptyGrid, InvalidCutoff

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Spectrum:
    coeffs: np.ndarray  # complex128, shape (N, M)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape


def r_max(n: int, m: int) -> float:
    """Largest wrapped distance representable on an n x m frequency grid."""
    return math.sqrt((n // 2) ** 2 + (m // 2) ** 2)


@dataclass(frozen=True)
class CutoffSpec:
    cutoff_ratio: float
    width: int
    height: int

    def __post_init__(self):
        fc = self.cutoff_ratio
        if not (isinstance(fc, (int, float, np.floating)) and 0.0 <= fc <= 1.0):
            raise InvalidCutoff(fc)
        if self.width < 1 or self.height < 1:
            raise EmptyGrid(f"grid must be at least 1x1, got {self.width}x{self.height}")

    @cached_property
    def r_max(self) -> float:
        return r_max(self.width, self.height)

    @cached_property
    def radius(self) -> float:
        return (1.0 - self.cutoff_ratio) * self.r_max


def cutoff_from_radius(r: float, n: int, m: int) -> float:
    rm = r_max(n, m)
    return 0.0 if rm == 0 else 1.0 - r / rm


def _check_grid(grid: np.ndarray) -> None:
    if grid.ndim != 2 or grid.shape[0] < 1 or grid.shape[1] < 1:
        raise EmptyGrid(f"expected a non-empty 2D grid, got shape {grid.shape}")


def dft2(heights) -> Spectrum:
    grid = np.asarray(heights, dtype=np.float64)
    _check_grid(grid)
    if not np.isfinite(grid).all():
        raise ValueError("height grid contains NaN or Inf")
    return Spectrum(np.fft.fft2(grid))


def idft2(spectrum: Spectrum) -> np.ndarray:
    coeffs = spectrum.coeffs
    _check_grid(coeffs)
    n, m = coeffs.shape
    out = np.fft.ifft2(coeffs)
    residue = float(np.abs(out.imag).max())
    scale = float(np.abs(coeffs).max()) / (n * m)
    if residue > 1e-6 * scale:
        log.warning("discarding imaginary residue %.3g (spectrum not Hermitian?)", residue)
    return np.ascontiguousarray(out.real)


def wrapped_distance(u, v, n: int, m: int):
    du = np.minimum(u, n - u)
    dv = np.minimum(v, m - v)
    return np.sqrt(du * du + dv * dv)


def lpf_mask(n: int, m: int, r: float) -> np.ndarray:
    u = np.arange(n)[:, None]
    v = np.arange(m)[None, :]
    return wrapped_distance(u, v, n, m) <= r


def apply_lpf(spectrum: Spectrum, spec: CutoffSpec) -> Spectrum:
    n, m = spectrum.shape
    if (spec.width, spec.height) != (n, m):
        raise ValueError(f"cutoff built for {spec.width}x{spec.height}, spectrum is {n}x{m}")
    mask = lpf_mask(n, m, spec.radius)
    return Spectrum(np.where(mask, spectrum.coeffs, 0.0 + 0.0j))


def _axis_candidates(n: int, k: int) -> np.ndarray:
    """Sorted indices in [0, n) whose wrapped offset from 0 is at most k."""
    if 2 * k + 1 >= n:
        return np.arange(n, dtype=np.int64)
    return np.concatenate([np.arange(k + 1), np.arange(n - k, n)]).astype(np.int64)


def kept_indices_for_radius(n: int, m: int, r: float) -> np.ndarray:
    """(K, 2) array of (u, v) with wrapped distance <= r, row-major order."""
    if r < 0:
        return np.empty((0, 2), dtype=np.int64)
    k = int(math.floor(r))
    us = _axis_candidates(n, k)
    vs = _axis_candidates(m, k)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    keep = wrapped_distance(uu, vv, n, m) <= r
    return np.column_stack([uu[keep], vv[keep]])


def kept_indices(n: int, m: int, spec: CutoffSpec) -> np.ndarray:
    return kept_indices_for_radius(n, m, spec.radius)


def count_kept(n: int, m: int, r: float) -> int:
    """len(kept_indices_for_radius(n, m, r)) without materialising the set."""
    if r < 0 or not math.isfinite(r):
        return 0
    if n > m:
        n, m = m, n
    du = np.arange(min(int(math.floor(r)), n // 2) + 1, dtype=np.float64)
    # each offset du > 0 stands for two rows (u and n-u) unless they coincide
    mult = np.where((du == 0) | ((n % 2 == 0) & (du == n // 2)), 1, 2)
    dv = np.floor(np.sqrt(np.maximum(r * r - du * du, 0.0)))
    dv = np.where(np.sqrt(du * du + (dv + 1) ** 2) <= r, dv + 1, dv)
    dv = np.where(np.sqrt(du * du + dv * dv) > r, dv - 1, dv)
    dv = np.minimum(dv, m // 2)
    per_row = np.where(dv < 0, 0, np.minimum(m, 2 * dv + 1))
    return int((mult * per_row).sum())
