"""Cutoff sweep on synthetic flat and rocky terrain (RMSE and bpp per cutoff).

    python scripts/reproduce_tradeoff.py --out results/ [--extent 20] [--seed 7] [--plot]

Writes one CSV per terrain in the ``dfz sweep`` format and prints a side-by-side
table. ``--plot`` additionally saves tradeoff.png (needs matplotlib).
"""

import argparse
import csv
from pathlib import Path

from dfzcodec.cli import SWEEP_HEADER, parse_range
from dfzcodec.metrics import sweep
from dfzcodec.synth import TerrainSpec, generate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--extent", type=float, default=20.0)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--resolution", type=float, default=0.1)
    ap.add_argument("--cutoffs", default="0.0:0.95:0.05")
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()

    cutoffs = parse_range(args.cutoffs)
    args.out.mkdir(parents=True, exist_ok=True)
    results = {}
    for kind in ("flat", "rocky"):
        cloud = generate(TerrainSpec(kind, args.extent, args.extent, 0.1, seed=args.seed))
        rows = sweep(cloud, args.resolution, cutoffs)
        results[kind] = rows
        with open(args.out / f"{kind}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SWEEP_HEADER)
            for r in rows:
                w.writerow([repr(r.cutoff_ratio), repr(r.rmse), repr(r.bpp), r.file_bytes, r.kept_coeffs])

    print(f"{'cutoff':>6}  {'rmse flat':>10}  {'rmse rocky':>10}  {'bpp flat':>9}  {'bpp rocky':>9}")
    for f, r in zip(results["flat"], results["rocky"]):
        print(f"{f.cutoff_ratio:6.2f}  {f.rmse:10.5f}  {r.rmse:10.5f}  {f.bpp:9.3f}  {r.bpp:9.3f}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
        for kind, rows in results.items():
            xs = [r.cutoff_ratio for r in rows]
            ax1.plot(xs, [r.bpp for r in rows], marker="o", label=kind)
            ax2.plot(xs, [r.rmse for r in rows], marker="o", label=kind)
        ax1.set(xlabel="cutoff ratio", ylabel="bits per point")
        ax2.set(xlabel="cutoff ratio", ylabel="RMSE [m]")
        ax2.legend()
        fig.tight_layout()
        fig.savefig(args.out / "tradeoff.png", dpi=120)
        print(f"wrote {args.out / 'tradeoff.png'}")


if __name__ == "__main__":
    main()
