#!/usr/bin/env python3
"""Empirical comparison of cyclic and greedy pair sweeps.

Whether the two strategies always reach the same signed-permutation class of
rotations is open; this script counts agreements and records the
disagreements instead of asserting anything.

Example:
    python scripts/sweep_strategy_comparison.py --dim 4 --trials 100
"""

import argparse
import json

import numpy as np

from tensorbss.core import symmetrize, tucker_transform
from tensorbss.jacobi import ContrastSpec, sweep_cyclic, sweep_greedy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    spec = ContrastSpec(2, 4)
    agreements, disagreements = 0, []
    for trial in range(args.trials):
        rng = np.random.default_rng(args.seed + trial)
        kappa = rng.uniform(-2.0, -0.5, size=args.dim)
        diag = np.zeros((args.dim,) * 4)
        for i in range(args.dim):
            diag[(i,) * 4] = kappa[i]
        q0, _ = np.linalg.qr(rng.standard_normal((args.dim, args.dim)))
        g = symmetrize(tucker_transform(diag, [q0] * 4).array)

        res_c = sweep_cyclic(g, spec)
        res_g = sweep_greedy(g, spec)
        alignment = float(np.min(np.abs(res_c.Q.T @ res_g.Q).max(axis=1)))
        if alignment > 0.999:
            agreements += 1
        else:
            disagreements.append(
                {
                    "seed": args.seed + trial,
                    "row_alignment": alignment,
                    "contrast_cyclic": res_c.trace[-1],
                    "contrast_greedy": res_g.trace[-1],
                }
            )

    print(
        json.dumps(
            {
                "trials": args.trials,
                "same_class": agreements,
                "disagreements": disagreements,
            },
            indent=2,
        )
    )


if __name__ == "__main__":
    main()
