"""Random fixtures shared by several test modules."""

import math

import numpy as np

from dfzcodec.codec import CompressedMap, expected_coeff_count, rle_encode
from dfzcodec.dem import Dem


def random_dem(rng, n, m, fill=1.0, scale=1.0, resolution=0.1):
    heights = rng.uniform(-scale, scale, size=(n, m))
    occ = rng.random((n, m)) < fill
    heights[~occ] = 0.0
    return Dem(resolution, float(rng.uniform(-100, 100)), float(rng.uniform(-100, 100)),
               float(rng.uniform(-10, 10)), heights, occ)


def random_map(rng, max_side=12):
    n, m = (int(x) for x in rng.integers(1, max_side + 1, size=2))
    rm = math.sqrt((n // 2) ** 2 + (m // 2) ** 2)
    r = float(rng.uniform(0, rm)) if rng.random() < 0.8 else float(rng.choice([0.0, rm]))
    flags = int(rng.integers(0, 2))
    runs = rle_encode(rng.random((n, m)) < rng.random())
    k = expected_coeff_count(n, m, r, bool(flags))
    coeffs = (rng.normal(size=k) + 1j * rng.normal(size=k)).astype(np.complex64) * 100
    return CompressedMap(
        version=1, flags=flags, n=n, m=m,
        resolution=float(rng.uniform(0.01, 2)), origin_x=float(rng.normal() * 1e3),
        origin_y=float(rng.normal() * 1e3), plane_z=float(rng.normal() * 10), r=r,
        point_count=int(rng.integers(0, 10**6)), runs=runs, coeffs=coeffs,
    )
