"""Upper vs lower variance for a stock under a bull and a bear regime.

Under each regime the daily return is normal with variance 0.4; the means
are +0.1 and -0.1. Neither regime alone has variance above 0.4, but the
50/50 mixture does.

    python scripts/bull_bear.py [--spread 0.1] [--variance 0.4]
"""

import argparse

from uvar import MomentEntry, build_moment_set, upper_variance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spread", type=float, default=0.1, help="|mean| under each regime")
    ap.add_argument("--variance", type=float, default=0.4)
    args = ap.parse_args()

    ms = build_moment_set(
        [
            MomentEntry.from_variance("bull", args.spread, args.variance),
            MomentEntry.from_variance("bear", -args.spread, args.variance),
        ]
    )
    r = upper_variance(ms)
    print(f"upper variance  {r.upper_variance:.6f}")
    print(f"lower variance  {r.lower_variance:.6f}")
    print(f"optimal center  {r.mu_star:.6f}")
    for e, w in zip(ms.input_entries(), r.lambda_input_order()):
        print(f"  weight on {e.label:<5} {w:.6f}")


if __name__ == "__main__":
    main()
