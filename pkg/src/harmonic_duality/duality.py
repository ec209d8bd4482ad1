"""Duality pairings between harmonic forms and holomorphic pairs.

Both pairings are sums of two boundary integrals over a closed surface
``S = dK_1`` with outward normal N,

    A = int_S *(w_hi ^ *(N ^ u)) dS,        B = int_S *(w_lo ^ (N ^ *u)) dS,

combined with different coefficients:

* first pairing (u harmonic near K, w a pair outside K vanishing at
  infinity): ``-A/c_n + (-1)^{r+1} B/c_n``;
* second pairing (w a pair near K, u harmonic outside K vanishing at
  infinity): ``(-1)^{n+r+1} A/c_n + (-1)^{n+1} B/c_n``.

For the point pair ``w = (delta U, d U)``, ``U = k(., x0) xi``, the pairings
evaluate to ``KAPPA_THEOREM1 <u(x0), xi>`` (x0 inside the surface) and
``KAPPA_THEOREM2 (-1)^{n+r+1} <u(x0), xi>`` (x0 outside).  The constants were
computed once by an independent quadrature (``scripts/calibrate_kappa.py``)
and are frozen here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DegreeError, DimensionMismatchError, UnsupportedDimensionError
from .exterior import Covector, hodge_matrix, inner, wedge_tensor
from .fields import FormField, HolomorphicPair, is_harmonic, is_holomorphic_pair
from .geometry import Cycle3, QuadratureSurface, sphere_surface
from .potentials import KernelSum, c_n

# point-measure constants, from scripts/calibrate_kappa.py (dblquad oracle,
# n=3, r=1 reference configuration; the oracle returned 1 to within 4e-15)
KAPPA_THEOREM1 = 1.0
KAPPA_THEOREM2 = 1.0
# signs relating the period integrals to the first pairing of curve potentials
PERIOD_SIGN = 1
PERIOD_LO_SIGN = 1

DEFAULT_ORDER = {3: 48, 4: 24}
_CHECK_NODES = 48


def default_surface(n: int, radius: float = 1.0, center=None, order: int | None = None) -> QuadratureSurface:
    """Sphere with the default pairing quadrature order for dimension n."""
    if n not in DEFAULT_ORDER:
        raise UnsupportedDimensionError(f"pairings support n in {tuple(DEFAULT_ORDER)}, got n={n}")
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    return sphere_surface(c, radius, order or DEFAULT_ORDER[n])


@dataclass(frozen=True)
class PairingReport:
    """A pairing value split into its two boundary integrals."""

    term1: float
    term2: float
    surface: dict
    order: int
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.term1 + self.term2

    def __float__(self):
        return float(self.value)

    def as_dict(self) -> dict:
        return {"value": self.value, "term1": self.term1, "term2": self.term2,
                "surface": self.surface, "order": self.order, "diagnostics": self.diagnostics}


def _validate(u: FormField, w: HolomorphicPair, surface: QuadratureSurface):
    if u.n != w.n or u.n != surface.n:
        raise DimensionMismatchError(f"u in n={u.n}, pair in n={w.n}, surface in n={surface.n}")
    if u.r != w.r:
        raise DegreeError(f"u has degree {u.r} but the pair is centered at degree {w.r}")


def boundary_integrands(u: FormField, w: HolomorphicPair, surface: QuadratureSurface):
    """Node values of ``*(w_hi ^ *(N ^ u))`` and ``*(w_lo ^ (N ^ *u))``."""
    _validate(u, w, surface)
    n, r = u.n, u.r
    N = surface.normals
    U = u.eval_many(surface.nodes)
    hi = w.w_hi.eval_many(surface.nodes)
    lo = w.w_lo.eval_many(surface.nodes)
    nu = np.einsum("kij,Ni,Nj->Nk", wedge_tensor(n, 1, r), N, U)
    snu = nu @ hodge_matrix(n, r + 1).T
    a = np.einsum("kij,Ni,Nj->Nk", wedge_tensor(n, r + 1, n - r - 1), hi, snu)[:, 0]
    su = U @ hodge_matrix(n, r).T
    nsu = np.einsum("kij,Ni,Nj->Nk", wedge_tensor(n, 1, n - r), N, su)
    b = np.einsum("kij,Ni,Nj->Nk", wedge_tensor(n, r - 1, n - r + 1), lo, nsu)[:, 0]
    return a, b


def _integrals(u, w, surface) -> tuple[float, float]:
    a, b = boundary_integrands(u, w, surface)
    wt = surface.weights
    return math.fsum(wt * a), math.fsum(wt * b)


def _diagnostics(u, w, surface, check: bool) -> dict:
    if not check:
        return {}
    idx = np.linspace(0, len(surface) - 1, min(_CHECK_NODES, len(surface))).round().astype(int)
    pts = surface.nodes[idx]
    out = {"pair_residual": is_holomorphic_pair(w, pts, tol=np.inf).residual}
    if 0 <= u.r <= u.n:
        out["harmonic_residual"] = is_harmonic(u, pts, tol=np.inf).residual
    return out


def _report(t1, t2, surface, diag) -> PairingReport:
    return PairingReport(float(t1), float(t2), dict(surface.descriptor),
                         int(surface.descriptor.get("order", 0)), diag)


def pairing_theorem1(u: FormField, w: HolomorphicPair, surface: QuadratureSurface, *,
                     check: bool = True) -> PairingReport:
    """``-1/c_n int *(w_hi ^ *(N ^ u)) + (-1)^{r+1}/c_n int *(w_lo ^ (N ^ *u))``.

    u is harmonic near the compact, w a holomorphic pair outside it that
    vanishes at infinity; the surface separates the two singular sets
    (caller contract, not checked).
    """
    A, B = _integrals(u, w, surface)
    c = c_n(u.n)
    return _report(-A / c, (-1) ** (u.r + 1) * B / c, surface, _diagnostics(u, w, surface, check))


def theorem2_coefficients(n: int, r: int) -> tuple[int, int]:
    """Signs of the two integrals in the second pairing."""
    return (-1) ** (n + r + 1), (-1) ** (n + 1)


def pairing_theorem2(w: HolomorphicPair, u: FormField, surface: QuadratureSurface, *,
                     check: bool = True, first_coefficient: int | None = None) -> PairingReport:
    """``(-1)^{n+r+1}/c_n int *(w_hi ^ *(N ^ u)) + (-1)^{n+1}/c_n int *(w_lo ^ (N ^ *u))``.

    w is a pair near the compact, u harmonic outside it and vanishing at
    infinity.  ``first_coefficient`` overrides the sign of the first integral
    (used only to compare against the alternative ``(-1)^{nr+r+1}``).
    """
    A, B = _integrals(u, w, surface)
    n, r = u.n, u.r
    s1, s2 = theorem2_coefficients(n, r)
    if first_coefficient is not None:
        s1 = int(first_coefficient)
    c = c_n(n)
    return _report(s1 * A / c, s2 * B / c, surface, _diagnostics(u, w, surface, check))


def point_measure_action(u: FormField, x0, xi: Covector) -> float:
    """``mu[*u]`` for ``mu = xi`` concentrated at x0, i.e. ``<xi, u(x0)>``."""
    return inner(xi, u.eval(x0))


def expected_point_theorem1(u: FormField, x0, xi: Covector) -> float:
    return KAPPA_THEOREM1 * point_measure_action(u, x0, xi)


def expected_point_theorem2(u: FormField, x0, xi: Covector) -> float:
    return KAPPA_THEOREM2 * (-1) ** (u.n + u.r + 1) * point_measure_action(u, x0, xi)


def lemma1_residual(u: FormField, w: HolomorphicPair, surface: QuadratureSurface, *,
                    normalize: bool = False) -> float:
    """``|pairing|`` when u and w are both regular inside the surface (then it vanishes).

    With ``normalize`` the value is divided by ``sup|u| * sup|w|`` over the
    nodes, i.e. computed for inputs rescaled to unit sup norm on the surface.
    """
    v = abs(pairing_theorem1(u, w, surface, check=False).value)
    if not normalize:
        return v
    X = surface.nodes
    su = float(np.max(np.linalg.norm(u.eval_many(X), axis=1)))
    sw = max(float(np.max(np.linalg.norm(w.w_hi.eval_many(X), axis=1))),
             float(np.max(np.linalg.norm(w.w_lo.eval_many(X), axis=1))))
    return v / (su * sw) if su > 0 and sw > 0 else 0.0


def continuity_constant(w: HolomorphicPair, surface: QuadratureSurface) -> float:
    """C with ``|pairing_theorem1(u, w)| <= C max_S |u|`` for every u.

    Each integrand is a top-degree wedge of unit-normal contractions, bounded
    pointwise by ``|w_hi||u|`` and ``|w_lo||u|`` (Cauchy-Schwarz).
    """
    X = surface.nodes
    g = np.linalg.norm(w.w_hi.eval_many(X), axis=1) + np.linalg.norm(w.w_lo.eval_many(X), axis=1)
    return math.fsum(surface.weights * g) / c_n(surface.n)


# period integrals (n = 3, r = 1) -----------------------------------------------

def _require_31(w: HolomorphicPair):
    if w.n != 3 or w.r != 1:
        raise UnsupportedDimensionError(f"period integrals are implemented for n=3, r=1, got n={w.n}, r={w.r}")


def period_star_whi(cycle: Cycle3, w: HolomorphicPair) -> float:
    """``int_cycle *w_hi``: line integral of the 1-form ``*w_hi`` along the cycle."""
    _require_31(w)
    vals = w.w_hi.eval_many(cycle.nodes) @ hodge_matrix(3, 2).T
    return math.fsum(cycle.weights * np.einsum("Ni,Ni->N", vals, cycle.tangents))


def period_w_lo(points, charges, w: HolomorphicPair) -> float:
    """``int_cycle w_lo`` over the 0-cycle ``sum_i charges_i [points_i]``."""
    _require_31(w)
    vals = w.w_lo.eval_many(np.asarray(points, dtype=float))[:, 0]
    return math.fsum(np.asarray(charges, dtype=float) * vals)


def curve_potential(cycle: Cycle3) -> KernelSum:
    """``U(x) = * int_cycle k(x, y) tau(y) ds(y)``, a 2-form (trapezoid rule on the curve)."""
    dens = (cycle.tangents @ hodge_matrix(3, 1).T) * cycle.weights[:, None]
    return KernelSum(3, 2, cycle.nodes, dens)


def point_cycle_potential(points, charges) -> KernelSum:
    """``U(x) = sum_i charges_i k(x, p_i)``, the potential of a 0-cycle."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    return KernelSum(3, 0, pts, np.asarray(charges, dtype=float).reshape(-1, 1))


def period_rhs(cycle: Cycle3, w: HolomorphicPair, surface: QuadratureSurface) -> float:
    """First pairing of ``delta U`` (U the curve potential) against w."""
    _require_31(w)
    u = curve_potential(cycle).delta()
    return PERIOD_SIGN * pairing_theorem1(u, w, surface, check=False).value


def period_lo_rhs(points, charges, w: HolomorphicPair, surface: QuadratureSurface) -> float:
    """First pairing of ``d V`` (V the 0-cycle potential) against w."""
    _require_31(w)
    u = point_cycle_potential(points, charges).d()
    return PERIOD_LO_SIGN * pairing_theorem1(u, w, surface, check=False).value


__all__ = [
    "KAPPA_THEOREM1", "KAPPA_THEOREM2", "PERIOD_SIGN", "PERIOD_LO_SIGN", "DEFAULT_ORDER",
    "default_surface", "PairingReport", "boundary_integrands", "pairing_theorem1",
    "theorem2_coefficients", "pairing_theorem2", "point_measure_action",
    "expected_point_theorem1", "expected_point_theorem2", "lemma1_residual",
    "continuity_constant", "period_star_whi", "period_w_lo", "curve_potential",
    "point_cycle_potential", "period_rhs", "period_lo_rhs",
]
