"""Mean-cost landscape over (eta, gamma) for a few target values, with the analytic optimum marked.

    python scripts/landscape_scan.py --a 1 3 --seed 2 [--plot landscape.png]
"""

import argparse

import numpy as np

from cvqaoa import LandscapeSpec, SeedSpec, run_landscape, theoretical_optimum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, nargs="+", default=[1.0, 3.0])
    ap.add_argument("--grid", type=int, default=21)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=2)
    ap.add_argument("--plot", help="write a heat map to this path (needs matplotlib)")
    args = ap.parse_args()

    eta_o, gamma_o, _ = theoretical_optimum()
    lands = {}
    for a in args.a:
        land = run_landscape(LandscapeSpec.log_spaced(args.grid, samples_per_point=args.samples, a=a),
                             SeedSpec(args.seed))
        i, j = land.argmin()
        lands[a] = land
        print(f"a={a:g}: argmin eta={land.eta_grid[i]:.3f} gamma={land.gamma_grid[j]:.3f} "
              f"cost={land.mean_cost[i, j]:.4f}  median={np.median(land.mean_cost):.3f}")
    print(f"analytic optimum (a=0): eta={eta_o:.4f} gamma={gamma_o:.4f}")

    if args.plot:
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, len(lands), figsize=(5 * len(lands), 4), squeeze=False)
        for ax, (a, land) in zip(axes[0], lands.items()):
            mesh = ax.pcolormesh(land.gamma_grid, land.eta_grid, np.log10(land.mean_cost), shading="nearest")
            ax.plot(land.gamma_grid, 0.5 / land.gamma_grid, "w--", lw=1)
            ax.plot(gamma_o, eta_o, "r*", ms=10)
            ax.set(xscale="log", yscale="log", xlabel="gamma", ylabel="eta", title=f"log10 mean cost, a={a:g}")
            ax.set_xlim(land.gamma_grid[0], land.gamma_grid[-1])
            ax.set_ylim(land.eta_grid[0], land.eta_grid[-1])
            fig.colorbar(mesh, ax=ax)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
