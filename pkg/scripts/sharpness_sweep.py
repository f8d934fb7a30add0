#!/usr/bin/env python3
"""Sharpness diagnostics across dimensions for two ball families: radius
growing like sqrt(N) (log gap shrinking to zero) and fixed radius (flagged
not-sharp once the curvature threshold bites)."""

import argparse
import math

import numpy as np

from normconc import Ball, EuclideanPsi, sharpness_diagnostics


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dimensions", type=int, nargs="+",
                        default=[4, 16, 64, 256])
    parser.add_argument("--offset", type=float, default=1.0,
                        help="gap between the mean and the ball along e1")
    args = parser.parse_args()

    psi = EuclideanPsi()
    print("N,radius_rule,radius,log_gap,lambda1,threshold,verdict")
    for n in args.dimensions:
        for rule, radius in (("sqrtN", math.sqrt(n)), ("fixed", 1.0)):
            center = np.zeros(n)
            center[0] = radius + args.offset
            report = sharpness_diagnostics(psi, np.zeros(n), Ball(center, radius))
            print(f"{n},{rule},{radius:.6g},{report.log_gap:.6g},"
                  f"{report.curvature_eigenvalues[0]:.6g},"
                  f"{report.eigenvalue_threshold:.6g},{report.verdict}")


if __name__ == "__main__":
    main()
