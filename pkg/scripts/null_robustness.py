"""Power against the number of null samples, on shared datasets.

Null samples are drawn from per-sample streams, so every smaller null is a
prefix of the larger one and the curve isolates the effect of P.

    python scripts/null_robustness.py --dep-coef 0.3 --T 100
"""

import argparse

from tsdhsic.power import null_sample_robustness
from tsdhsic.resampling import TestConfig
from tsdhsic.synthgen import GeneratorSpec


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", default="case2")
    parser.add_argument("--T", type=int, default=100)
    parser.add_argument("--dep-coef", type=float, default=0.3)
    parser.add_argument("--counts", type=int, nargs="+", default=[25, 50, 100, 150, 250, 500, 1000])
    parser.add_argument("--repeats", type=int, default=100)
    parser.add_argument("--csv", default=None)
    args = parser.parse_args()

    curve = null_sample_robustness(GeneratorSpec(args.kind, T=args.T, dep_coef=args.dep_coef), TestConfig(),
                                   args.counts, repeats=args.repeats)
    for cell in curve.cells:
        print(f"P={cell.params['num_null']:5d}  power {cell.power:.3f} +/- {cell.ci_half_width:.3f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            curve.write_csv(fh)


if __name__ == "__main__":
    main()
