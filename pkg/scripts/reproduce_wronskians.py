"""Wronskian of each scenario's basis at its reference ordinate.

Prints the analytic value, the finite-difference cross-check and the
reference value carried in ``scenarios.WRONSKIAN_GOLDENS``.
"""
import argparse

from pwlmelnikov.analysis import DerivativeMethod, wronskian
from pwlmelnikov.melnikov import melnikov_coefficients
from pwlmelnikov.scenarios import SCENARIOS, WRONSKIAN_GOLDENS


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", type=float, help="override the reference ordinate")
    args = ap.parse_args(argv)
    print(f"{'scenario':8} {'h':>5} {'basis':22} {'analytic':>14} {'finite diff':>14} "
          f"{'reference':>11}  match")
    for name, (h0, ref, tol) in WRONSKIAN_GOLDENS.items():
        h = args.h if args.h is not None else h0
        basis = melnikov_coefficients(SCENARIOS[name].system()).basis
        exact = wronskian(basis, h).value
        fd = wronskian(basis, h, DerivativeMethod.FINITE_DIFFERENCE).value
        names = ",".join(b.name for b in basis)
        match = "yes" if abs(exact - ref) <= tol else "no"
        print(f"{name:8} {h:5.2f} {names:22} {exact:14.7f} {fd:14.7f} {ref:11g}  {match}")


if __name__ == "__main__":
    main()
