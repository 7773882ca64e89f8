"""Empirical misclustering rate against Phi(-A) for isotropic models.

    python3 scripts/isotropic_center.py --n 50 --m 2000 --reps 100
"""
import argparse

from spectral_gmm import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--m", type=int, default=2000)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--mu-norm", type=float, nargs="+", default=[1.0, 1.5, 2.0, 2.5])
    args = ap.parse_args()

    print(f"{'|mu|':>6} {'Phi(-A)':>10} {'p_hat':>10} {'se':>9} {'z':>7}")
    for norm in args.mu_norm:
        cfg = ExperimentConfig.from_dict({
            "model": {"scenario": "isotropic", "params": {"n": args.n, "mu_norm": norm}},
            "m": args.m, "reps": args.reps, "seed": args.seed,
        })
        res = run_experiment(cfg, workers=args.workers)
        center = res.report.center
        z = (res.miss_rate - center) / res.miss_se if res.miss_se else float("nan")
        print(f"{norm:6.2f} {center:10.6f} {res.miss_rate:10.6f} {res.miss_se:9.2e} {z:7.2f}")


if __name__ == "__main__":
    main()
