"""Sweep random indefinite problems and tabulate the kappa certificates.

    python3 scripts/kappa_sweep.py --count 30 --seed 0
"""

import argparse
import time

import numpy as np

from nevpick.datasets import aggregate_from_simple
from nevpick.fixtures import random_indefinite_simple
from nevpick.lft import make_interpolant
from nevpick.verify import check_interpolation
from nevpick.winding import kappa_certificate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-kappa", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'#':>3} {'kappa':>5} {'wno T22':>7} {'wno psi':>7} {'poles':>5} {'residual':>9} certified")
    bad = 0
    t0 = time.perf_counter()
    for i in range(args.count):
        kappa = 1 + i % args.max_kappa
        # one spare node keeps rejection sampling cheap
        total = kappa + 1 + int(rng.integers(0, 2))
        n_left = int(rng.integers(1, total + 1))
        n_right = total - n_left
        s = random_indefinite_simple(rng, kappa, n_left, n_right, 1 + i % 2, 1)
        d = aggregate_from_simple(s)
        S = make_interpolant(d)
        c = kappa_certificate(d, interp=S)
        rep = check_interpolation(S, d, kappa=kappa)
        res = max(rep.r_left, rep.r_right, rep.r_bi)
        bad += not c.certified
        print(f"{i:>3} {c.kappa_pick:>5} {c.wno_theta22:>7} {c.wno_psi:>7} {c.pole_count_S:>5} {res:>9.1e} {c.certified}")
    print(f"{args.count - bad}/{args.count} certified in {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
