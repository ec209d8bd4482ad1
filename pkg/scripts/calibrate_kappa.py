"""Calibrate the point-measure constants of the two pairings with an independent oracle.

The oracle works in plain vector calculus (n=3, r=1): the pair built from
``U = k(., x0) xi`` is ``f = -grad k . xi`` and ``v = grad k x xi``, and both
pairings reduce to

    -1/(4 pi) int <v, N x u> dS + 1/(4 pi) int f <N, u> dS

on a sphere, integrated with adaptive ``scipy.integrate.dblquad`` in
spherical coordinates.  Nothing from the package's exterior algebra is used.
Run:  python3 scripts/calibrate_kappa.py
"""
import json
import math
import sys

import numpy as np
from scipy.integrate import dblquad


def grad_k(x, x0):
    d = x - x0
    return -d / np.linalg.norm(d) ** 3


def integrand(u, x0, xi, R):
    def g(phi, theta):
        N = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        x = R * N
        gk = grad_k(x, x0)
        f = -gk @ xi
        v = np.cross(gk, xi)
        uu = u(x)
        val = -np.dot(v, np.cross(N, uu)) + f * np.dot(N, uu)
        return val / (4 * math.pi) * R**2 * math.sin(theta)
    return g


def pairing(u, x0, xi, R):
    val, err = dblquad(integrand(u, x0, xi, R), 0.0, math.pi, 0.0, 2 * math.pi, epsabs=1e-13, epsrel=1e-13)
    return val, err


def main():
    xi = np.array([0.3, -0.5, 0.8])
    # first pairing: u = grad(x1^2 - x2^2) harmonic everywhere, x0 inside the sphere
    u1 = lambda x: np.array([2 * x[0], -2 * x[1], 0.0])
    x0 = np.array([0.1, -0.2, 0.15])
    v1, e1 = pairing(u1, x0, xi, 1.2)
    kappa1 = v1 / (u1(x0) @ xi)
    # second pairing: u = x/|x|^3 harmonic outside the origin, x0 outside the sphere;
    # expected value (-1)^{n+r+1} kappa' <u(x0), xi> with n=3, r=1
    u2 = lambda x: x / np.linalg.norm(x) ** 3
    y0 = np.array([2.0, 0.5, -0.4])
    v2, e2 = pairing(u2, y0, xi, 1.2)
    kappa2 = v2 / ((-1) ** (3 + 1 + 1) * (u2(y0) @ xi))
    out = {"kappa_theorem1": kappa1, "quad_error1": e1, "kappa_theorem2": kappa2, "quad_error2": e2,
           "reference": {"xi": xi.tolist(), "x0_inside": x0.tolist(), "x0_outside": y0.tolist(), "radius": 1.2}}
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
