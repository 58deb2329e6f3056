"""Strict non-overlap versus the single-radius distance test.

The strict rule accepts a centre when its distance to every placed disk
is at least ``r_i + r_k``. The single-radius rule only asks for ``r_i``,
so disks may overlap by up to the neighbour's radius. Both runs use the
same radii, box, porosity target and trial budget; the single-radius
variant is implemented here by brute force and is not part of the package.

    python3 scripts/predicate_comparison.py [--n 2000] [--seeds 3]
"""
import argparse
import math

import numpy as np

from granpack import distributions as dist
from granpack import packing as pk


def single_radius_ssi(side, radii, eta, j_max, rng):
    area = side * side
    xs, ys = np.empty(radii.size), np.empty(radii.size)
    porosity, n = 1.0, 0
    for r in radii:
        if porosity <= eta:
            break
        placed = False
        for _ in range(j_max):
            x, y = rng.uniform(0, side, 2)
            if x < r or y < r or x > side - r or y > side - r:
                continue
            if n == 0 or np.min((xs[:n] - x) ** 2 + (ys[:n] - y) ** 2) >= r * r:
                placed = True
                break
        if not placed:
            break
        xs[n], ys[n] = x, y
        n += 1
        porosity -= math.pi * r * r / area
    return porosity, n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--eta", type=float, default=0.35)
    ap.add_argument("--sigma", type=float, default=0.05)
    ap.add_argument("--jmax", type=int, default=pk.DEFAULT_JMAX)
    args = ap.parse_args()
    model = pk.RadiusModel(dist.Lognormal(math.log(6.0), args.sigma), "log")
    e, v = pk.radius_moments(model)
    side = math.sqrt(args.n * math.pi * (v + e * e) / (1 - args.eta))
    print(f"box {side:.3f} mm, target {args.eta}, N estimate {args.n}")
    print(f"{'seed':>4} {'strict eta_hat':>15} {'placed':>7} {'single-radius eta_hat':>22} {'placed':>7}")
    for seed in range(args.seeds):
        p = pk.sequential_pack(pk.Rectangle(side, side), model, args.eta, j_max=args.jmax, rng=seed)
        eta_lit, n_lit = single_radius_ssi(side, p.radii_drawn, args.eta, args.jmax, np.random.default_rng(seed))
        print(f"{seed:4d} {p.achieved_porosity:15.4f} {p.particle_count:7d} {eta_lit:22.4f} {n_lit:7d}")


if __name__ == "__main__":
    main()
