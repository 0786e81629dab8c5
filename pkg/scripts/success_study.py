"""Cumulative success probability of Bayesian-optimized CV-QAOA against direct input sampling.

Full scale (11 repeat-sets x 30 targets x 100 steps x 1000 samples) takes a few minutes per mode
on one core; pass --jobs to spread targets over processes.

    python scripts/success_study.py --seed 2024 [--repeats 11 --n-a 30] [--plot success.png]
"""

import argparse
import time

import numpy as np

from cvqaoa import Mode, QaoaRunSpec, SeedSpec, run_success_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--repeats", type=int, default=11)
    ap.add_argument("--n-a", type=int, default=30)
    ap.add_argument("--threshold", type=float, default=1e-9)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--plot")
    args = ap.parse_args()

    spec = QaoaRunSpec(steps=args.steps, samples_per_step=args.samples, repeats=args.repeats,
                       success_threshold=args.threshold)
    curves = {}
    for mode in Mode:
        start = time.perf_counter()
        curves[mode] = run_success_study(spec, mode, SeedSpec(args.seed), n_a=args.n_a, n_jobs=args.jobs)
        print(f"{mode.value}: {time.perf_counter() - start:.0f} s")

    q, r = curves[Mode.QAOA], curves[Mode.RANDOM]
    steps = sorted({s for s in (1, 5, 10, 20, 50, args.steps) if s <= args.steps})
    print("step   qaoa    random")
    for s in steps:
        print(f"{s:4d}  {q.probability[s - 1]:.3f}   {r.probability[s - 1]:.3f}")
    dominated = sum(np.all(q.per_repeat[k, 4:] >= r.per_repeat[k, 4:]) for k in range(args.repeats))
    print(f"final ratio {q.probability[-1] / r.probability[-1]:.2f}; "
          f"qaoa >= random from step 5 in {dominated}/{args.repeats} repeat-sets")

    if args.plot:
        import matplotlib.pyplot as plt

        t = np.arange(1, args.steps + 1)
        fig, ax = plt.subplots(figsize=(6, 4))
        for mode, c in curves.items():
            ax.plot(t, c.probability, label=mode.value)
            ax.fill_between(t, c.probability - c.band, c.probability + c.band, alpha=0.25)
        ax.set(xlabel="step", ylabel="cumulative success probability", ylim=(0, 1.05))
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
