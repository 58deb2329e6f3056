"""Target versus achieved porosity for several radius laws and box sizes.

For each law the square box is sized so the particle-count estimate is
``N`` at the target porosity; the table reports the estimate, the number
of disks placed, the achieved porosity and why placement stopped.

    python3 scripts/porosity_table.py [--seeds 3] [--jmax 30000]
"""
import argparse
import math
import time

import numpy as np

from granpack import distributions as dist
from granpack import packing as pk

LAWS = {
    "equal disks": pk.RadiusModel(dist.Constant(0.2), "linear"),
    "lognormal-log s=0.02": pk.RadiusModel(dist.Lognormal(math.log(6.0), 0.02), "log"),
    "lognormal-log s=0.05": pk.RadiusModel(dist.Lognormal(math.log(6.0), 0.05), "log"),
    "lognormal-log s=0.10": pk.RadiusModel(dist.Lognormal(math.log(6.0), 0.10), "log"),
    "weibull-log": pk.RadiusModel(dist.Weibull(12.0, 6.0), "log"),
    "hyperbolic-log": pk.RadiusModel(dist.Hyperbolic(-0.5, 3.0, 0.3, 6.0), "log"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--jmax", type=int, default=pk.DEFAULT_JMAX)
    ap.add_argument("--n", type=int, nargs="+", default=[2000, 30000])
    ap.add_argument("--targets", type=float, nargs="+", default=[0.33, 0.35, 0.40, 0.44, 0.55, 0.70])
    args = ap.parse_args()
    print(f"{'law':<22} {'N':>6} {'eta':>5} {'seed':>4} {'placed':>7} {'eta_hat':>8} {'stop':<16} {'s':>6}")
    for name, model in LAWS.items():
        e, v = pk.radius_moments(model)
        for n in args.n:
            for eta in args.targets:
                side = math.sqrt(n * math.pi * (v + e * e) / (1 - eta))
                for seed in range(args.seeds):
                    t0 = time.perf_counter()
                    try:
                        p = pk.sequential_pack(pk.Rectangle(side, side), model, eta, j_max=args.jmax, rng=seed)
                    except pk.RadiiExhausted as exc:
                        p = exc.packing
                    dt = time.perf_counter() - t0
                    print(f"{name:<22} {p.estimated_count:6d} {eta:5.2f} {seed:4d} {p.particle_count:7d} "
                          f"{p.achieved_porosity:8.4f} {p.termination_reason:<16} {dt:6.2f}")


if __name__ == "__main__":
    np.seterr(over="ignore")
    main()
