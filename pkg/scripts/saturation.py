"""Coverage reached by exhaustive SSI as the radius spread grows.

Runs each law with a porosity target that is never reached, so the
packing stops at its first failed disk, and prints the covered fraction.

    python3 scripts/saturation.py [--seeds 5] [--jmax 10000]
"""
import argparse
import math

import numpy as np

from granpack import distributions as dist
from granpack import packing as pk


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--jmax", type=int, default=10_000)
    ap.add_argument("--n", type=int, default=2000, help="box sized for this many mean disks at full cover")
    args = ap.parse_args()
    print(f"{'sigma (log-space)':>17} {'mean cover':>11} {'min':>7} {'max':>7} {'placed':>7}")
    for sigma in (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3):
        law = dist.Constant(6.0) if sigma == 0 else dist.Lognormal(math.log(6.0), sigma)
        model = pk.RadiusModel(law, "log")
        e, v = pk.radius_moments(model)
        side = math.sqrt(args.n * math.pi * (v + e * e))
        cover, placed = [], []
        for seed in range(args.seeds):
            try:
                p = pk.sequential_pack(pk.Rectangle(side, side), model, 0.01, K=3, j_max=args.jmax, rng=seed)
            except pk.RadiiExhausted as exc:
                p = exc.packing
            cover.append(1 - p.achieved_porosity)
            placed.append(p.particle_count)
        print(f"{sigma:17.2f} {np.mean(cover):11.4f} {min(cover):7.4f} {max(cover):7.4f} {int(np.mean(placed)):7d}")


if __name__ == "__main__":
    main()
