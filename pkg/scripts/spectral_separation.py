"""Share of spectral energy outside r = frac * r_max for each synthetic terrain.

    python scripts/spectral_separation.py [--frac 0.2] [--seeds 0 1 2]
"""

import argparse

import numpy as np

from dfzcodec.dem import build_dem
from dfzcodec.spectral import dft2, lpf_mask, r_max
from dfzcodec.synth import KINDS, TerrainSpec, generate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frac", type=float, default=0.2)
    ap.add_argument("--extent", type=float, default=10.0)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 7])
    args = ap.parse_args()

    print(f"{'kind':>6} {'seed':>5} {'outside/total':>14} {'outside/(NM)':>13}")
    for kind in KINDS:
        for seed in args.seeds:
            dem = build_dem(generate(TerrainSpec(kind, args.extent, args.extent, seed=seed)), 0.1)
            power = np.abs(dft2(dem.heights).coeffs) ** 2
            n, m = power.shape
            outside = power[~lpf_mask(n, m, args.frac * r_max(n, m))].sum()
            print(f"{kind:>6} {seed:>5} {outside / power.sum():14.4f} {outside / (n * m):13.4g}")


if __name__ == "__main__":
    main()
