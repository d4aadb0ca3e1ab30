"""Empirical RI slope against the analytic skew threshold p*.

For each first-cluster share p1, draws a skewed ground truth with ``--r``
clusters, scores uniformly random candidates with RI over c = 2..3r and
compares the sign of the fitted slope with the side of p* that p1 falls on.
"""

import argparse

import numpy as np

from gtbias import audit
from gtbias.audit import Candidates, ExperimentConfig, SkewedGT, assess_trend, run_experiment, slope
from gtbias.theory import gt2_threshold, predict_gt2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=audit.DEFAULT_SEED)
    ap.add_argument("--p1", type=float, nargs="+", default=list(audit.P1_STEPS))
    args = ap.parse_args()

    pstar = gt2_threshold(args.r)
    print(f"r={args.r}  p*={pstar:.6f}")
    print(f"{'p1':>5}{'predicted':>11}{'empirical':>11}{'slope':>12}  agree")
    for p1 in args.p1:
        cfg = ExperimentConfig(f"p1={p1:g}", args.n, SkewedGT(args.r, p1),
                               Candidates.UNIFORM_RANDOM, tuple(range(2, 3 * args.r + 1)),
                               args.trials, args.seed, ("RI",))
        (ri,) = run_experiment(cfg)
        s = slope(ri)
        agree = np.sign(s) == -np.sign(p1 - pstar)
        print(f"{p1:>5g}{predict_gt2(args.r, p1).value:>11}{assess_trend(ri).status.value:>11}"
              f"{s:>12.2e}  {'yes' if agree else 'NO'}")


if __name__ == "__main__":
    main()
