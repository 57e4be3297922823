"""Rate-distortion measurements: height RMSE and bits per point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dfzcodec.codec import decode, deserialize, encode, serialize
from dfzcodec.dem import Dem, build_dem, reconstruct_cloud
from dfzcodec.errors import GridMismatch, NoOccupiedCells, ZeroPoints
from dfzcodec.pointcloud_io import PointCloud, as_cloud


@dataclass(frozen=True)
class MetricsReport:
    cutoff_ratio: float
    rmse: float
    bpp: float
    file_bytes: int
    kept_coeffs: int
    original_points: int
    rmse_raw: float | None = None


def rmse_dem(reference: Dem, reconstructed: Dem) -> float:
    """Cell-aligned height RMSE over occupied cells.

    With both DEMs sharing geometry, the i-th reconstructed point differs from
    the i-th reference point only in z, so the point RMSE reduces to this.
    """
    if not reference.same_geometry(reconstructed):
        raise GridMismatch("DEMs differ in size, resolution, origin or plane height")
    if not np.array_equal(reference.occupancy, reconstructed.occupancy):
        raise GridMismatch("DEMs differ in occupancy")
    occ = reference.occupancy
    if not occ.any():
        raise NoOccupiedCells("no occupied cells to compare")
    diff = reference.heights[occ] - reconstructed.heights[occ]
    return math.sqrt(float(np.mean(diff * diff)))


def rmse_against_raw(cloud: PointCloud, reconstructed: PointCloud) -> float:
    """Nearest-neighbour RMSE from every raw point to the reconstructed cloud."""
    from scipy.spatial import cKDTree

    cloud = as_cloud(cloud)
    reconstructed = as_cloud(reconstructed)
    if len(cloud) == 0 or len(reconstructed) == 0:
        raise NoOccupiedCells("cannot compare empty clouds")
    dist, _ = cKDTree(reconstructed).query(cloud)
    return math.sqrt(float(np.mean(dist * dist)))


def bits_per_point(file_bytes: int, original_points: int) -> float:
    if original_points < 1:
        raise ZeroPoints("bits per point needs at least one point")
    return 8.0 * file_bytes / original_points


def evaluate_dem(
    dem: Dem,
    cutoff_ratio: float,
    original_points: int,
    cloud: PointCloud | None = None,
) -> MetricsReport:
    """Run encode -> serialize -> deserialize -> decode and score the result.

    If ``cloud`` is given, also report nearest-neighbour RMSE against it.
    """
    blob = serialize(encode(dem, cutoff_ratio, original_point_count=original_points))
    cmap = deserialize(blob)
    decoded = decode(cmap)
    raw = None
    if cloud is not None:
        raw = rmse_against_raw(cloud, reconstruct_cloud(decoded))
    return MetricsReport(
        cutoff_ratio=cutoff_ratio,
        rmse=rmse_dem(dem, decoded),
        bpp=bits_per_point(len(blob), original_points),
        file_bytes=len(blob),
        kept_coeffs=len(cmap.coeffs),
        original_points=original_points,
        rmse_raw=raw,
    )


def evaluate(
    cloud: PointCloud,
    resolution: float,
    cutoff_ratio: float,
    against_raw: bool = False,
) -> MetricsReport:
    cloud = as_cloud(cloud)
    dem = build_dem(cloud, resolution)
    return evaluate_dem(dem, cutoff_ratio, len(cloud), cloud if against_raw else None)


def sweep(
    cloud: PointCloud,
    resolution: float,
    cutoffs,
    against_raw: bool = False,
) -> list[MetricsReport]:
    """Evaluate several cutoffs on one rasterisation; rows come back sorted by cutoff."""
    cloud = as_cloud(cloud)
    dem = build_dem(cloud, resolution)
    raw = cloud if against_raw else None
    return [evaluate_dem(dem, fc, len(cloud), raw) for fc in sorted(cutoffs)]
