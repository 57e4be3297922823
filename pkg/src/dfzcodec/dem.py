"""Point cloud <-> digital elevation model (DEM).

The grid is axis-aligned over the cloud's xy bounding box. Heights are stored
relative to a horizontal plane through the cloud centroid, so an unoccupied
cell filled with 0 sits exactly on that plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dfzcodec.errors import EmptyCloud, NonPositiveResolution
from dfzcodec.pointcloud_io import PointCloud, as_cloud

DEFAULT_RESOLUTION = 0.1


@dataclass(frozen=True, eq=False)
class Dem:
    """Height grid indexed ``heights[i, j]``, i along x (width), j along y (height)."""

    resolution: float
    origin_x: float
    origin_y: float
    plane_z: float
    heights: np.ndarray
    occupancy: np.ndarray

    def __post_init__(self):
        if self.heights.ndim != 2 or self.heights.shape != self.occupancy.shape:
            raise ValueError("heights and occupancy must be 2D grids of equal shape")

    @property
    def width(self) -> int:
        return self.heights.shape[0]

    @property
    def height(self) -> int:
        return self.heights.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.heights.shape

    def same_geometry(self, other: Dem) -> bool:
        return (
            self.shape == other.shape
            and self.resolution == other.resolution
            and self.origin_x == other.origin_x
            and self.origin_y == other.origin_y
            and self.plane_z == other.plane_z
        )


def _cells_along(extent: float, resolution: float) -> int:
    return max(1, math.ceil(extent / resolution))


def build_dem(cloud: PointCloud, resolution: float = DEFAULT_RESOLUTION) -> Dem:
    cloud = as_cloud(cloud)
    if len(cloud) == 0:
        raise EmptyCloud()
    if not (resolution > 0 and math.isfinite(resolution)):
        raise NonPositiveResolution(f"resolution must be > 0, got {resolution!r}")

    x, y, z = cloud[:, 0], cloud[:, 1], cloud[:, 2]
    origin_x, origin_y = float(x.min()), float(y.min())
    plane_z = float(z.mean())
    width = _cells_along(float(x.max()) - origin_x, resolution)
    height = _cells_along(float(y.max()) - origin_y, resolution)

    # points on the max edge fall into the last cell
    i = np.clip(np.floor((x - origin_x) / resolution).astype(np.int64), 0, width - 1)
    j = np.clip(np.floor((y - origin_y) / resolution).astype(np.int64), 0, height - 1)
    flat = i * height + j

    counts = np.bincount(flat, minlength=width * height)
    sums = np.bincount(flat, weights=z - plane_z, minlength=width * height)
    occupied = counts > 0
    heights = np.zeros(width * height)
    heights[occupied] = sums[occupied] / counts[occupied]

    return Dem(
        resolution=float(resolution),
        origin_x=origin_x,
        origin_y=origin_y,
        plane_z=plane_z,
        heights=heights.reshape(width, height),
        occupancy=occupied.reshape(width, height),
    )


def reconstruct_cloud(dem: Dem) -> PointCloud:
    """One point per occupied cell at its center, emitted j-outer, i-inner."""
    jj, ii = np.nonzero(dem.occupancy.T)
    x = dem.origin_x + (ii + 0.5) * dem.resolution
    y = dem.origin_y + (jj + 0.5) * dem.resolution
    z = dem.plane_z + dem.heights[ii, jj]
    return np.column_stack([x, y, z]).astype(np.float64).reshape(-1, 3)
