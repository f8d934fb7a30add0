#!/usr/bin/env python3
"""Emit the tail-bound comparison sweep for the quadratic form on the
centered unit cube (both theta regimes) as CSV on stdout.

Equivalent to:
    normconc compare --example quadratic --theta 0.25  --n-max 100
    normconc compare --example quadratic --theta 0.125 --n-max 100
"""

import argparse

from normconc import quadratic_example_bounds


def fmt(x):
    return format(float(x) + 0.0, ".17g")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=100)
    parser.add_argument("--thetas", type=float, nargs="+", default=[0.25, 0.125])
    args = parser.parse_args()

    print("N,theta,mcd_exponent,halfspace_exponent,mcd_bound,halfspace_bound")
    for theta in args.thetas:
        for n in range(1, args.n_max + 1):
            mcd, half = quadratic_example_bounds(n, theta)
            print(",".join([str(n), fmt(theta), fmt(mcd.exponent), fmt(half.exponent),
                            fmt(mcd.value), fmt(half.value)]))


if __name__ == "__main__":
    main()
