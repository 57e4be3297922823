"""``dfz`` command line: compress, decompress, info, sweep, synth, render."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from dfzcodec.codec import decode, deserialize, encode, full_spectrum, serialize
from dfzcodec.dem import DEFAULT_RESOLUTION, Dem, build_dem, reconstruct_cloud
from dfzcodec.errors import DfzError
from dfzcodec.metrics import bits_per_point, sweep
from dfzcodec.pointcloud_io import read_cloud, write_ply, write_xyz
from dfzcodec.spectral import dft2
from dfzcodec.synth import TerrainSpec, generate

SWEEP_HEADER = ["cutoff", "rmse_m", "bpp", "file_bytes", "kept_coeffs"]


class InvalidRange(DfzError):
    pass


class CliError(DfzError):
    pass


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` -> cutoffs, stop included when it lands on a step."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise InvalidRange(f"expected start:stop:step, got {text!r}") from None
    if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0:
        raise InvalidRange(f"step must be positive in {text!r}")
    if not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise InvalidRange(f"cutoff range {text!r} must lie within [0,1]")
    values = []
    k = 0
    while start + k * step <= stop + 1e-12:
        values.append(min(round(start + k * step, 12), 1.0))
        k += 1
    if not values:
        raise InvalidRange(f"cutoff range {text!r} is empty")
    return values


def pgm(image: np.ndarray) -> bytes:
    """Binary (P5) 8-bit PGM; ``image`` is rows x cols uint8."""
    rows, cols = image.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + np.ascontiguousarray(image, dtype=np.uint8).tobytes()


def render_dem(dem: Dem) -> np.ndarray:
    occ = dem.occupancy
    img = np.zeros(dem.shape, dtype=np.uint8)
    if occ.any():
        h = dem.heights[occ]
        lo, hi = float(h.min()), float(h.max())
        if hi > lo:
            # occupied cells span 1..255 so they never read as holes
            img[occ] = np.round(1 + 254 * (h - lo) / (hi - lo)).astype(np.uint8)
        else:
            img[occ] = 128
    # x to the right, y up
    return img.T[::-1]


def render_spectrum(coeffs: np.ndarray) -> np.ndarray:
    mag = np.log1p(np.abs(np.fft.fftshift(coeffs)))
    peak = float(mag.max())
    if peak <= 0:
        return np.zeros(coeffs.shape[::-1], dtype=np.uint8)
    return np.round(255 * mag / peak).astype(np.uint8).T


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)


def cmd_compress(args) -> int:
    cloud = read_cloud(args.input, args.format)
    dem = build_dem(cloud, args.resolution)
    cmap = encode(dem, args.cutoff, original_point_count=len(cloud))
    blob = serialize(cmap)
    _write(args.output, blob)
    print(f"file_bytes: {len(blob)}")
    print(f"kept_coeffs: {len(cmap.coeffs)}")
    print(f"bpp: {bits_per_point(len(blob), len(cloud))!r}")
    return 0


def cmd_decompress(args) -> int:
    dem = decode(deserialize(Path(args.input).read_bytes()))
    cloud = reconstruct_cloud(dem)
    if len(cloud) == 0:
        raise CliError("container has no occupied cells")
    _write(args.output, write_ply(cloud, binary=not args.ascii))
    print(f"points: {len(cloud)}")
    return 0


def cmd_info(args) -> int:
    blob = Path(args.input).read_bytes()
    cmap = deserialize(blob)
    occupied = int(np.asarray(cmap.runs[::2], dtype=np.int64).sum())
    fields = [
        ("version", cmap.version),
        ("flags", f"0x{cmap.flags:04x}"),
        ("symmetric_packing", cmap.symmetric),
        ("width", cmap.n),
        ("height", cmap.m),
        ("resolution", repr(cmap.resolution)),
        ("origin_x", repr(cmap.origin_x)),
        ("origin_y", repr(cmap.origin_y)),
        ("plane_z", repr(cmap.plane_z)),
        ("cutoff_radius", repr(cmap.r)),
        ("cutoff_ratio", repr(cmap.cutoff_ratio)),
        ("point_count", cmap.point_count),
        ("run_count", len(cmap.runs)),
        ("kept_coeffs", len(cmap.coeffs)),
        ("occupied_cells", occupied),
        ("fill_ratio", repr(occupied / (cmap.n * cmap.m))),
        ("file_bytes", len(blob)),
        ("bpp", repr(bits_per_point(len(blob), cmap.point_count)) if cmap.point_count else "n/a"),
    ]
    for key, value in fields:
        print(f"{key}: {value}")
    return 0


def cmd_sweep(args) -> int:
    cutoffs = parse_range(args.cutoffs)
    cloud = read_cloud(args.input, args.format)
    reports = sweep(cloud, args.resolution, cutoffs, against_raw=args.against_raw)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER + (["rmse_raw_m"] if args.against_raw else []))
    for rep in reports:
        row = [repr(rep.cutoff_ratio), repr(rep.rmse), repr(rep.bpp), rep.file_bytes, rep.kept_coeffs]
        if args.against_raw:
            row.append(repr(rep.rmse_raw))
        writer.writerow(row)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_synth(args) -> int:
    spec = TerrainSpec(
        kind=args.kind,
        extent_x=args.extent,
        extent_y=args.extent_y if args.extent_y is not None else args.extent,
        point_spacing=args.spacing,
        seed=args.seed,
        amplitude=args.amplitude,
        rock_count=args.rock_count,
        rock_radius_range=(args.rock_min, args.rock_max),
    )
    cloud = generate(spec)
    if Path(args.output).suffix.lower() == ".xyz":
        _write(args.output, write_xyz(cloud))
    else:
        _write(args.output, write_ply(cloud, binary=True))
    print(f"points: {len(cloud)}")
    return 0


def cmd_render(args) -> int:
    path = Path(args.input)
    if path.suffix.lower() == ".dfz":
        cmap = deserialize(path.read_bytes())
        if args.what == "dem":
            img = render_dem(decode(cmap))
        else:
            img = render_spectrum(full_spectrum(cmap).coeffs)
    else:
        dem = build_dem(read_cloud(path, args.format), args.resolution)
        img = render_dem(dem) if args.what == "dem" else render_spectrum(dft2(dem.heights).coeffs)
    _write(args.output, pgm(img))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def cloud_opts(p):
        p.add_argument("--format", choices=["xyz", "ply"], help="override extension-based detection")
        p.add_argument("--resolution", type=float, default=DEFAULT_RESOLUTION, help="DEM cell size in meters")

    p = sub.add_parser("compress", help="point cloud -> .dfz")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--cutoff", type=float, default=0.8, help="cutoff ratio in [0,1]")
    cloud_opts(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help=".dfz -> PLY")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--ascii", action="store_true", help="write ascii PLY instead of binary")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("info", help="print .dfz header and derived values")
    p.add_argument("input")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("sweep", help="RMSE / bpp over a range of cutoffs, as CSV")
    p.add_argument("input")
    p.add_argument("--cutoffs", default="0.0:0.95:0.05", help="start:stop:step (default %(default)s)")
    p.add_argument("--csv", help="output path (default: stdout)")
    p.add_argument("--against-raw", action="store_true",
                   help="add nearest-neighbour RMSE against the raw cloud")
    cloud_opts(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="generate a synthetic terrain cloud")
    p.add_argument("--kind", default="flat", help="flat | dunes | rocky")
    p.add_argument("--extent", type=float, default=10.0, help="side length in meters")
    p.add_argument("--extent-y", type=float, help="y extent if different from --extent")
    p.add_argument("--spacing", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--amplitude", type=float, default=0.5)
    p.add_argument("--rock-count", type=int, default=40)
    p.add_argument("--rock-min", type=float, default=0.2)
    p.add_argument("--rock-max", type=float, default=0.8)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="DEM or centered spectrum as an 8-bit PGM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--what", choices=["dem", "spectrum"], default="dem")
    cloud_opts(p)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DfzError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "),
              file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
