"""Spectral DEM codec and the ``.dfz`` container.

Only coefficients inside the cutoff circle are stored. Because the heights are
real, F(-u, -v) = conj(F(u, v)), so by default only one member of each
conjugate pair is written (flags bit 0) and the other is mirrored on decode.

Container layout, little-endian throughout::

    magic "DFZ1" | version u16 | flags u16 | N u32 | M u32
    resolution f64 | origin_x f64 | origin_y f64 | plane_z f64 | r f64
    point_count u64 | run_count u32 | runs u32[run_count]
    coeff_count u64 | coeffs (f32 real, f32 imag)[coeff_count]
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from dfzcodec.dem import Dem
from dfzcodec.errors import (
    BadMagic,
    CoefficientCountMismatch,
    InconsistentRuns,
    InvalidHeader,
    Truncated,
    UnsupportedVersion,
)
from dfzcodec.spectral import (
    CutoffSpec,
    Spectrum,
    count_kept,
    cutoff_from_radius,
    dft2,
    idft2,
    kept_indices_for_radius,
    r_max,
    wrapped_distance,
)

MAGIC = b"DFZ1"
VERSION = 1
FLAG_SYMMETRIC = 0x1
MAX_CELLS = 1 << 30

_HEADER = struct.Struct("<4sHHIIdddddQI")
HEADER_SIZE = _HEADER.size  # 68
_U64 = struct.Struct("<Q")


@dataclass(frozen=True, eq=False)
class CompressedMap:
    version: int
    flags: int
    n: int
    m: int
    resolution: float
    origin_x: float
    origin_y: float
    plane_z: float
    r: float
    point_count: int
    runs: np.ndarray  # uint32
    coeffs: np.ndarray  # complex64, one per stored index

    @property
    def symmetric(self) -> bool:
        return bool(self.flags & FLAG_SYMMETRIC)

    @property
    def cutoff_ratio(self) -> float:
        return cutoff_from_radius(self.r, self.n, self.m)

    def stored_indices(self) -> np.ndarray:
        if self.symmetric:
            return canonical_kept(self.n, self.m, self.r)
        return kept_indices_for_radius(self.n, self.m, self.r)

    def __eq__(self, other):
        if not isinstance(other, CompressedMap):
            return NotImplemented
        scalars = ("version", "flags", "n", "m", "resolution", "origin_x",
                   "origin_y", "plane_z", "r", "point_count")
        return (
            all(getattr(self, k) == getattr(other, k) for k in scalars)
            and np.array_equal(self.runs, other.runs)
            and np.array_equal(self.coeffs, other.coeffs)
        )


def partner(u, v, n: int, m: int):
    return (n - u) % n, (m - v) % m


def canonical_kept(n: int, m: int, r: float) -> np.ndarray:
    """Kept indices reduced to one representative per conjugate pair.

    (u, v) is the representative iff it is lexicographically <= its partner.
    """
    idx = kept_indices_for_radius(n, m, r)
    u, v = idx[:, 0], idx[:, 1]
    pu, pv = partner(u, v, n, m)
    keep = (u < pu) | ((u == pu) & (v <= pv))
    return idx[keep]


def _self_paired(n: int, m: int) -> set[tuple[int, int]]:
    us = {0, n // 2} if n % 2 == 0 else {0}
    vs = {0, m // 2} if m % 2 == 0 else {0}
    return {(u, v) for u in us for v in vs}


def count_canonical(n: int, m: int, r: float) -> int:
    full = count_kept(n, m, r)
    selfs = sum(1 for u, v in _self_paired(n, m) if wrapped_distance(u, v, n, m) <= r)
    return (full + selfs) // 2


def expected_coeff_count(n: int, m: int, r: float, symmetric: bool) -> int:
    return count_canonical(n, m, r) if symmetric else count_kept(n, m, r)


def rle_encode(mask: np.ndarray) -> np.ndarray:
    """Row-major run lengths of a boolean mask; the first run counts True cells."""
    flat = np.asarray(mask, dtype=bool).ravel()
    if flat.size == 0:
        return np.zeros(1, dtype=np.uint32)
    edges = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    runs = np.diff(np.concatenate([[0], edges, [flat.size]]))
    if not flat[0]:
        runs = np.concatenate([[0], runs])
    return runs.astype(np.uint32)


def rle_decode(runs: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    runs = np.asarray(runs, dtype=np.int64)
    if int(runs.sum()) != shape[0] * shape[1]:
        raise InconsistentRuns(f"runs cover {int(runs.sum())} cells, grid has {shape[0] * shape[1]}")
    values = np.arange(len(runs)) % 2 == 0
    return np.repeat(values, runs).reshape(shape)


def encode(
    dem: Dem,
    cutoff_ratio: float,
    original_point_count: int | None = None,
    symmetric: bool = True,
) -> CompressedMap:
    """Filter and pack a DEM.

    ``original_point_count`` is the size of the source cloud, stored so that
    bits-per-point can be computed from the file alone. It defaults to the
    number of occupied cells.
    """
    n, m = dem.shape
    spec = CutoffSpec(cutoff_ratio, n, m)
    if n * m > MAX_CELLS:
        raise InvalidHeader(f"grid {n}x{m} exceeds {MAX_CELLS} cells")
    coeffs = dft2(dem.heights).coeffs

    if symmetric:
        idx = canonical_kept(n, m, spec.radius)
    else:
        idx = kept_indices_for_radius(n, m, spec.radius)
    values = coeffs[idx[:, 0], idx[:, 1]]

    pu, pv = partner(idx[:, 0], idx[:, 1], n, m)
    selfs = (idx[:, 0] == pu) & (idx[:, 1] == pv)
    peak = float(np.abs(coeffs).max())
    if selfs.any() and np.abs(values[selfs].imag).max() > 1e-3 * peak:
        raise ValueError("self-paired coefficient has non-negligible imaginary part")

    packed = values.astype(np.complex64)
    if not np.isfinite(packed.view(np.float32)).all():
        raise ValueError("coefficient overflows 32-bit float storage")

    if original_point_count is None:
        original_point_count = int(dem.occupancy.sum())

    return CompressedMap(
        version=VERSION,
        flags=FLAG_SYMMETRIC if symmetric else 0,
        n=n,
        m=m,
        resolution=dem.resolution,
        origin_x=dem.origin_x,
        origin_y=dem.origin_y,
        plane_z=dem.plane_z,
        r=spec.radius,
        point_count=int(original_point_count),
        runs=rle_encode(dem.occupancy),
        coeffs=packed,
    )


def full_spectrum(cmap: CompressedMap) -> Spectrum:
    """Scatter stored coefficients into a full N x M spectrum (zeros elsewhere)."""
    expected = expected_coeff_count(cmap.n, cmap.m, cmap.r, cmap.symmetric)
    if len(cmap.coeffs) != expected:
        raise CoefficientCountMismatch(f"{len(cmap.coeffs)} coefficients stored, header implies {expected}")
    idx = cmap.stored_indices()
    u, v = idx[:, 0], idx[:, 1]
    values = cmap.coeffs.astype(np.complex128)
    grid = np.zeros((cmap.n, cmap.m), dtype=np.complex128)
    if cmap.symmetric:
        pu, pv = partner(u, v, cmap.n, cmap.m)
        grid[pu, pv] = np.conj(values)
        grid[u, v] = values
        selfs = (u == pu) & (v == pv)
        grid[u[selfs], v[selfs]] = values[selfs].real
    else:
        grid[u, v] = values
    return Spectrum(grid)


def decode(cmap: CompressedMap) -> Dem:
    occupancy = rle_decode(cmap.runs, (cmap.n, cmap.m))
    heights = idft2(full_spectrum(cmap))
    return Dem(
        resolution=cmap.resolution,
        origin_x=cmap.origin_x,
        origin_y=cmap.origin_y,
        plane_z=cmap.plane_z,
        heights=heights,
        occupancy=occupancy,
    )


def serialize(cmap: CompressedMap) -> bytes:
    header = _HEADER.pack(
        MAGIC, cmap.version, cmap.flags, cmap.n, cmap.m,
        cmap.resolution, cmap.origin_x, cmap.origin_y, cmap.plane_z, cmap.r,
        cmap.point_count, len(cmap.runs),
    )
    return b"".join([
        header,
        np.asarray(cmap.runs, dtype="<u4").tobytes(),
        _U64.pack(len(cmap.coeffs)),
        np.asarray(cmap.coeffs, dtype="<c8").tobytes(),
    ])


def deserialize(data: bytes) -> CompressedMap:
    data = bytes(data)
    if data[:4] != MAGIC[: len(data[:4])]:
        raise BadMagic("not a .dfz container")
    if len(data) < HEADER_SIZE:
        raise Truncated(f"header needs {HEADER_SIZE} bytes, got {len(data)}")
    (_, version, flags, n, m, resolution, origin_x, origin_y, plane_z, r,
     point_count, run_count) = _HEADER.unpack_from(data)

    if version != VERSION:
        raise UnsupportedVersion(f"container version {version} (expected {VERSION})")
    if flags & ~FLAG_SYMMETRIC:
        raise InvalidHeader(f"unknown flag bits 0x{flags:04x}")
    if n < 1 or m < 1 or n * m > MAX_CELLS:
        raise InvalidHeader(f"bad grid size {n}x{m}")
    if not (math.isfinite(resolution) and resolution > 0):
        raise InvalidHeader(f"bad resolution {resolution!r}")
    if not all(math.isfinite(x) for x in (origin_x, origin_y, plane_z)):
        raise InvalidHeader("non-finite origin or plane height")
    if not (math.isfinite(r) and 0.0 <= r <= r_max(n, m)):
        raise InvalidHeader(f"cutoff radius {r!r} outside [0, r_max]")

    pos = HEADER_SIZE
    end = pos + 4 * run_count
    if end + _U64.size > len(data):
        raise Truncated("container ends inside the occupancy runs")
    runs = np.frombuffer(data, "<u4", run_count, pos).astype(np.uint32)
    if int(runs.sum(dtype=np.uint64)) != n * m:
        raise InconsistentRuns(f"runs cover {int(runs.sum(dtype=np.uint64))} cells, grid has {n * m}")
    pos = end

    (coeff_count,) = _U64.unpack_from(data, pos)
    pos += _U64.size
    symmetric = bool(flags & FLAG_SYMMETRIC)
    expected = expected_coeff_count(n, m, r, symmetric)
    if coeff_count != expected:
        raise CoefficientCountMismatch(f"{coeff_count} coefficients stored, header implies {expected}")
    if pos + 8 * coeff_count > len(data):
        raise Truncated("container ends inside the coefficient block")
    if pos + 8 * coeff_count < len(data):
        raise InvalidHeader(f"{len(data) - pos - 8 * coeff_count} trailing bytes")
    coeffs = np.frombuffer(data, "<c8", coeff_count, pos).astype(np.complex64)
    if not np.isfinite(coeffs.view(np.float32)).all():
        raise InvalidHeader("non-finite coefficient")

    return CompressedMap(
        version=version, flags=flags, n=n, m=m, resolution=resolution,
        origin_x=origin_x, origin_y=origin_y, plane_z=plane_z, r=r,
        point_count=point_count, runs=runs, coeffs=coeffs,
    )
