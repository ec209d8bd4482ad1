"""Reproduction error against quadrature order for interior and exterior formulas.

Prints a table (and optionally writes JSON) of the sup relative error of the
Cauchy-Green reproduction at 20 points for orders 6..48, n = 3 and 4.
Run:  python3 scripts/convergence_study.py [--out results.json] [--seed 0]
"""
import argparse
import json

import numpy as np

from harmonic_duality.cauchy_green import reproduce_many
from harmonic_duality.fields import harmonic_polynomial_form, random_covector
from harmonic_duality.geometry import sphere_surface
from harmonic_duality.potentials import KernelSum

ORDERS = (6, 12, 24, 48)


def points(rng, n, count, rmin, rmax):
    X = rng.standard_normal((count, n))
    return X * (rng.uniform(rmin, rmax, count) / np.linalg.norm(X, axis=1))[:, None]


def exterior_field(n, r, rng):
    a = KernelSum(n, r, [np.zeros(n)], [random_covector(n, r, rng).coeffs]).delta().d()
    b = KernelSum(n, r, [np.zeros(n)], [random_covector(n, r, rng).coeffs]).d().delta()
    return a + b


def study(seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for n in (3, 4):
        for r in range(1, n):
            for orient in ("interior", "exterior"):
                if orient == "interior":
                    u, X = harmonic_polynomial_form(n, r, rng), points(rng, n, 20, 0.0, 0.5)
                else:
                    u, X = exterior_field(n, r, rng), points(rng, n, 20, 2.0, 3.0)
                ref = u.eval_many(X)
                scale = np.max(np.linalg.norm(ref, axis=1))
                errs = []
                for o in ORDERS:
                    got = reproduce_many(u, sphere_surface(np.zeros(n), 1.0, o), X, orient)
                    errs.append(float(np.max(np.linalg.norm(got - ref, axis=1)) / scale))
                rows.append({"n": n, "r": r, "orientation": orient, "orders": list(ORDERS), "rel_error": errs})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = study(args.seed)
    print(f"{'n':>2} {'r':>2} {'side':<9} " + " ".join(f"{'order ' + str(o):>11}" for o in ORDERS))
    for row in rows:
        print(f"{row['n']:>2} {row['r']:>2} {row['orientation']:<9} " + " ".join(f"{e:11.2e}" for e in row["rel_error"]))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"seed": args.seed, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
