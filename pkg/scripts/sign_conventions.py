"""Compare the sign conventions that are not fixed by the formulas alone.

1. Codifferential: the adjoint sign (-1)^{nr+n+1} against the alternative
   (-1)^{nr+r+1}.  For each (n, r) it reports whether the interior
   reproduction formula holds with each choice.
2. Second pairing: the ratio pairing / <u(x0), xi> for point pairs with the
   first coefficient (-1)^{n+r+1} (used) and (-1)^{nr+r+1} (alternative).
   A valid coefficient gives the same ratio for every configuration.
Run:  python3 scripts/sign_conventions.py
"""
import numpy as np

from harmonic_duality import duality as du
from harmonic_duality.exterior import hodge
from harmonic_duality.fields import harmonic_polynomial_form, random_covector
from harmonic_duality.geometry import sphere_surface
from harmonic_duality.potentials import KernelSum, c_n, gamma, nwedge_density, star_nwedge_star_density, point_pair


def reproduce_with_sign(u, S, x, sign_of):
    """Interior formula with delta and gamma built from an arbitrary codifferential sign."""
    n, r = u.n, u.r
    c = c_n(n)
    P = KernelSum(n, r + 1, S.nodes, nwedge_density(u, S).values() * S.weights[:, None]) if r < n else None
    Q = KernelSum(n, r - 1, S.nodes, star_nwedge_star_density(u, S).values() * S.weights[:, None]) if r > 0 else None
    total = np.zeros(u.dim)
    if P is not None:
        # delta P = s(n, r + 1) * (*d*P)
        total += sign_of(n, r + 1) * hodge(P.star().d_eval(x)).coeffs
    if Q is not None:
        total += gamma(n, r) * Q.d_eval(x).coeffs
    return -total / c


def main():
    rng = np.random.default_rng(0)
    adjoint = lambda n, r: (-1) ** (n * r + n + 1)
    literal = lambda n, r: (-1) ** (n * r + r + 1)
    print("interior reproduction error (relative) with each codifferential sign")
    print(f"{'n':>2} {'r':>2} {'adjoint':>10} {'literal':>10}")
    for n in (3, 4):
        S = sphere_surface(np.zeros(n), 1.0, 32 if n == 3 else 20)
        for r in range(1, n):
            u = harmonic_polynomial_form(n, r, rng)
            x = rng.uniform(-0.3, 0.3, n)
            ref = u.eval(x).coeffs
            errs = [np.linalg.norm(reproduce_with_sign(u, S, x, s) - ref) / np.linalg.norm(ref)
                    for s in (adjoint, literal)]
            print(f"{n:>2} {r:>2} {errs[0]:10.2e} {errs[1]:10.2e}")

    print("\nsecond pairing ratio value / <u(x0), xi> over five configurations")
    for n in (3, 4):
        S = du.default_surface(n)
        for r in range(1, n):
            used, alt = [], []
            for _ in range(5):
                c1, c2 = (0.2 * v / np.linalg.norm(v) for v in rng.standard_normal((2, n)))
                u = (KernelSum(n, r, [c1], [random_covector(n, r, rng).coeffs]).delta().d()
                     + KernelSum(n, r, [c2], [random_covector(n, r, rng).coeffs]).d().delta())
                y = rng.standard_normal(n)
                x0, xi = 2.5 * y / np.linalg.norm(y), random_covector(n, r, rng)
                w = point_pair(x0, xi)
                base = du.point_measure_action(u, x0, xi)
                used.append(du.pairing_theorem2(w, u, S, check=False).value / base)
                alt.append(du.pairing_theorem2(w, u, S, check=False,
                                               first_coefficient=(-1) ** (n * r + r + 1)).value / base)
            fmt = lambda v: " ".join(f"{t:+.4f}" for t in v)
            print(f"n={n} r={r}  used: {fmt(used)}   alternative: {fmt(alt)}")


if __name__ == "__main__":
    main()
