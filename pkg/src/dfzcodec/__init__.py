"""Lossy DFT-based compression of terrain point clouds.

Pipeline: point cloud -> elevation grid -> 2D DFT -> radial low-pass ->
packed ``.dfz`` container, and back.
"""

from dfzcodec.codec import CompressedMap, decode, deserialize, encode, serialize
from dfzcodec.dem import Dem, build_dem, reconstruct_cloud
from dfzcodec.errors import DfzError
from dfzcodec.metrics import MetricsReport, bits_per_point, evaluate, rmse_dem
from dfzcodec.pointcloud_io import parse_ply, parse_xyz, write_ply, write_xyz
from dfzcodec.spectral import CutoffSpec, Spectrum, apply_lpf, dft2, idft2
from dfzcodec.synth import TerrainSpec, generate

__all__ = [
    "CompressedMap",
    "CutoffSpec",
    "Dem",
    "DfzError",
    "MetricsReport",
    "Spectrum",
    "TerrainSpec",
    "apply_lpf",
    "bits_per_point",
    "build_dem",
    "decode",
    "deserialize",
    "dft2",
    "encode",
    "evaluate",
    "generate",
    "idft2",
    "parse_ply",
    "parse_xyz",
    "reconstruct_cloud",
    "rmse_dem",
    "serialize",
    "write_ply",
    "write_xyz",
]
