"""Compare the closed form against both brute-force oracles on random instances.

    python scripts/crosscheck.py --instances 500 --k 2 3 4 --grid-n 400 --seed 0

Prints one summary row per K: worst |closed form - ternary search|, and the
worst grid shortfall as a fraction of the grid's Lipschitz bound L/n.
"""

import argparse
import time

import numpy as np

from uvar import OracleConfig, QpInstance, minimax_oracle, moment_set_from_arrays, solve
from uvar import simplex_grid, upper_variance


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--grid-n", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cfg = OracleConfig(grid_n=args.grid_n)
    print(f"{'K':>3} {'max|exact-ternary|':>20} {'max grid gap/(L/n)':>20} {'grid excess':>12} {'sec':>7}")
    for k in args.k:
        t = time.perf_counter()
        worst_ternary = worst_gap = worst_excess = 0.0
        for _ in range(args.instances):
            mu = rng.uniform(-10, 10, k)
            var = 10 * (1 - rng.random(k))
            ms = moment_set_from_arrays(mu.tolist(), (var + mu * mu).tolist())
            v = upper_variance(ms).upper_variance
            worst_ternary = max(worst_ternary, abs(v - minimax_oracle(ms).value))

            # arbitrary kappa for the QP side
            d = rng.uniform(-5, 5, k)
            inst = QpInstance(tuple(mu.tolist()), tuple((d + mu * mu).tolist()))
            qv = solve(inst).value
            if k <= cfg.max_k_grid:
                g = simplex_grid(inst, cfg)
                worst_gap = max(worst_gap, (qv - g.value) / (g.lipschitz / cfg.grid_n))
                worst_excess = max(worst_excess, g.value - qv)
        print(
            f"{k:>3} {worst_ternary:>20.3e} {worst_gap:>20.4f} {worst_excess:>12.1e} "
            f"{time.perf_counter() - t:>7.2f}"
        )


if __name__ == "__main__":
    main()
