"""First-order energy expansion of the return map.

For a random perturbation of a scenario, compares (H^R(D_eps) - H^R(A)) / eps
with M(h) for halving eps and reports the observed convergence order.
"""
import argparse
import math

import numpy as np

from pwlmelnikov.integrator import poincare_sample
from pwlmelnikov.melnikov import melnikov_coefficients
from pwlmelnikov.scenarios import SCENARIOS
from pwlmelnikov.unperturbed import annulus_interval


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenario", default="scs-a", choices=list(SCENARIOS))
    ap.add_argument("--seed", type=int, default=4)
    ap.add_argument("--levels", type=int, default=4, help="number of eps values")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    sys = SCENARIOS[args.scenario].system().with_perturbation_vector(rng.uniform(-1, 1, 18))
    form = melnikov_coefficients(sys)
    J = annulus_interval(sys)
    top = J.upper if J.bounded else 2.0
    eps = [1e-3 / 2 ** k for k in range(args.levels)]
    print(f"{'h':>7} {'eps':>10} {'quotient':>16} {'M(h)':>16} {'error':>11} {'order':>7}")
    for frac in (0.15, 0.3, 0.45, 0.6, 0.75):
        h = frac * top
        m = form(h)
        prev = None
        for e in eps:
            q = poincare_sample(sys, h, e).h_energy_diff / e
            err = abs(q - m)
            order = f"{math.log2(prev / err):7.3f}" if prev else " " * 7
            print(f"{h:7.4f} {e:10.3e} {q:16.10f} {m:16.10f} {err:11.3e} {order}")
            prev = err


if __name__ == "__main__":
    main()
