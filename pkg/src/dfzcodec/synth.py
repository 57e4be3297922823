"""Seeded synthetic terrains: flat sand, smooth dunes, dunes with rocks.

Randomness comes from NumPy's PCG64 bit generator. ``SeedSequence(seed)`` is
spawned into three independent child streams (xy jitter, z noise, rocks), and
every draw goes through ``Generator.random``. This choice is normative: the
same seed gives the same cloud on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dfzcodec.errors import InvalidSpec
from dfzcodec.pointcloud_io import PointCloud

KINDS = ("flat", "dunes", "rocky")
FLAT_NOISE = 0.005  # meters, half-width of the uniform z noise on flat terrain
JITTER = 0.25  # fraction of point_spacing, half-width of the uniform xy jitter


@dataclass(frozen=True)
class TerrainSpec:
    kind: str = "flat"
    extent_x: float = 10.0
    extent_y: float = 10.0
    point_spacing: float = 0.1
    seed: int = 0
    amplitude: float = 0.5
    rock_count: int = 40
    rock_radius_range: tuple[float, float] = (0.2, 0.8)

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown terrain kind {self.kind!r} (expected one of {', '.join(KINDS)})")
        for name in ("extent_x", "extent_y", "point_spacing"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidSpec(f"{name} must be positive, got {value!r}")
        if self.point_spacing > min(self.extent_x, self.extent_y):
            raise InvalidSpec("point_spacing larger than the terrain extent")
        if self.seed < 0:
            raise InvalidSpec("seed must be non-negative")
        if self.kind in ("dunes", "rocky") and not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise InvalidSpec(f"amplitude must be >= 0, got {self.amplitude!r}")
        if self.kind == "rocky":
            lo, hi = self.rock_radius_range
            if self.rock_count < 1:
                raise InvalidSpec("rock_count must be positive for rocky terrain")
            if not (0 < lo <= hi and math.isfinite(hi)):
                raise InvalidSpec(f"bad rock_radius_range {self.rock_radius_range!r}")


def _uniform(rng: np.random.Generator, lo, hi, size):
    return lo + (hi - lo) * rng.random(size)


def dunes_height(x, y, spec: TerrainSpec):
    lx, ly = spec.extent_x / 4, spec.extent_y / 4
    return spec.amplitude * np.sin(2 * np.pi * x / lx) * np.sin(2 * np.pi * y / ly)


def generate(spec: TerrainSpec) -> PointCloud:
    spec.validate()
    jitter_ss, noise_ss, rock_ss = np.random.SeedSequence(spec.seed).spawn(3)
    jitter_rng = np.random.Generator(np.random.PCG64(jitter_ss))

    nx = max(1, round(spec.extent_x / spec.point_spacing))
    ny = max(1, round(spec.extent_y / spec.point_spacing))
    gx, gy = np.meshgrid(
        (np.arange(nx) + 0.5) * spec.point_spacing,
        (np.arange(ny) + 0.5) * spec.point_spacing,
        indexing="ij",
    )
    half = JITTER * spec.point_spacing
    x = gx.ravel() + _uniform(jitter_rng, -half, half, nx * ny)
    y = gy.ravel() + _uniform(jitter_rng, -half, half, nx * ny)

    if spec.kind == "flat":
        noise_rng = np.random.Generator(np.random.PCG64(noise_ss))
        z = _uniform(noise_rng, -FLAT_NOISE, FLAT_NOISE, nx * ny)
    else:
        z = dunes_height(x, y, spec)

    if spec.kind == "rocky":
        rock_rng = np.random.Generator(np.random.PCG64(rock_ss))
        cx = _uniform(rock_rng, 0.0, spec.extent_x, spec.rock_count)
        cy = _uniform(rock_rng, 0.0, spec.extent_y, spec.rock_count)
        radius = _uniform(rock_rng, *spec.rock_radius_range, spec.rock_count)
        for rx, ry, rr in zip(cx, cy, radius):
            # only touch points inside the rock's bounding square
            near = (np.abs(x - rx) <= rr) & (np.abs(y - ry) <= rr)
            d2 = (x[near] - rx) ** 2 + (y[near] - ry) ** 2
            z[near] += np.sqrt(np.maximum(0.0, rr * rr - d2))

    return np.column_stack([x, y, z])
