"""Output vs input quadrature histogram at the ideal gate setting (eta, gamma) = (1/2, 1).

    python scripts/output_histogram.py --a 2.745 --samples 1100000 [--plot hist.png]
"""

import argparse
import math

from cvqaoa import GateParams, SeedSpec, run_fixed
from cvqaoa.experiment import analytic_mean_cost


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=2.745)
    ap.add_argument("--eta", type=float, default=0.5)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--samples", type=int, default=1_100_000)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--plot")
    args = ap.parse_args()

    h = run_fixed(GateParams(args.eta, args.gamma, args.a), args.samples, SeedSpec(args.seed))
    predicted = math.sqrt(analytic_mean_cost(args.eta, args.gamma, args.a) - (args.a * (2 * args.eta * args.gamma - 1)) ** 2)
    print(f"output: mean {h.mean:.5f} std {h.std:.5f} (predicted {predicted:.5f}, vacuum {1 / math.sqrt(2):.5f})")
    print(f"input:  mean {h.input_mean:.5f} std {h.input_std:.5f}")

    if args.plot:
        import matplotlib.pyplot as plt

        centers = 0.5 * (h.edges[1:] + h.edges[:-1])
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.step(centers, h.input_density, where="mid", label="input x")
        ax.step(centers, h.output_density, where="mid", label="output x")
        ax.axvline(args.a, color="k", ls=":", lw=1)
        ax.set(xlabel="x", ylabel="density")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
