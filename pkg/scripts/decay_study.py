#!/usr/bin/env python3
"""Compare dispersive decay of the 10-flat word against the k=2 baseline.

Usage: python scripts/decay_study.py [--n-points 9] [--bump-width 0.7] [--out-prefix decay]

Emits one CSV per word (columns n, amplitude, prediction) spanning
n in [1e3, 1e5], plus fitted slopes.  The flat word should decay like
n^(-1/10), the single-letter baseline like n^(-1/2).
"""

import argparse
import csv

import numpy as np

from slowdisp.dispersion import (
    BumpProfile,
    amplitude_prediction,
    decay_fit,
    default_flatness_tol,
    flatness_order,
    oscillatory_amplitude,
    theta_jet,
)
from slowdisp.monodromy import Word, trace_jet, word_jet
from slowdisp.precision import QUAD256
from slowdisp.reference import reference_root
from slowdisp.solver import newton_refine


def study(word_hp, word, bump, n_values, label, out_path):
    th = theta_jet(trace_jet(word_jet(word_hp, 12, QUAD256)), QUAD256)
    k, deriv = flatness_order(th, default_flatness_tol(QUAD256))
    theta0, theta_k0 = float(th.coeffs[0].real), float(deriv)
    rows = []
    for n in n_values:
        amp = abs(oscillatory_amplitude(word, bump, n)[0])
        pred = amplitude_prediction(k, theta_k0, bump, n, theta0)
        rows.append((n, amp, pred))
    fit = decay_fit([(n, a) for n, a, _ in rows])
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "amplitude", "prediction"])
        writer.writerows(rows)
    print(f"{label}: k={k}, slope={fit.slope:+.4f} (expect {-1.0 / k:+.4f}), "
          f"r2={fit.r_squared:.5f}, ratio@n={rows[-1][0]}: {rows[-1][1] / rows[-1][2]:.3f} "
          f"-> {out_path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-points", type=int, default=9)
    ap.add_argument("--bump-width", type=float, default=0.7)
    ap.add_argument("--out-prefix", default="decay")
    args = ap.parse_args()

    n_values = [int(round(v)) for v in np.logspace(3, 5, args.n_points)]

    root, _ = newton_refine(reference_root(QUAD256), QUAD256, tol=1e-45, max_iter=25)
    flat_hp = Word.alternating4(root)
    flat = Word.alternating4([float(t) for t in root])
    study(flat_hp, flat, BumpProfile(half_width=args.bump_width), n_values,
          "flat word   ", f"{args.out_prefix}_flat.csv")

    base = Word.single(+1, 1.0)
    study(base, base, BumpProfile(half_width=0.2), n_values,
          "k=2 baseline", f"{args.out_prefix}_baseline.csv")


if __name__ == "__main__":
    main()
