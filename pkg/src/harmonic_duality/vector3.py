"""Three-dimensional vector-calculus view of degree-1 forms and pairs.

A 1-form ``u_1 e^1 + u_2 e^2 + u_3 e^3`` is identified with the vector
``(u_1, u_2, u_3)``, and a pair ``w_0 + w_2`` with ``(f, v)`` where
``f = w_0`` and ``v = *w_2``.  Under this identification

    grad f = d f,   curl v = * d v,   div v = -delta v,

and the pair equations read ``grad f + curl v = 0``, ``div v = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cauchy_green import decompose_exterior
from .errors import DegreeError, UnsupportedDimensionError
from .exterior import Covector
from .fields import LAYER_TOL, FormField, HolomorphicPair, Polynomial, PolynomialForm
from .geometry import QuadratureSurface

FOUR_PI = 4.0 * math.pi


def _require_1form(u: FormField):
    if u.n != 3 or u.r != 1:
        raise UnsupportedDimensionError(f"vector fields correspond to n=3, r=1 forms, got n={u.n}, r={u.r}")


def _require_scalar(f: FormField):
    if f.n != 3 or f.r != 0:
        raise DegreeError(f"scalar companion must be a 0-form in n=3, got n={f.n}, r={f.r}")


class VectorField3:
    """Vector field in R^3 backed by a 1-form."""

    def __init__(self, form: FormField):
        _require_1form(form)
        self.form = form

    @classmethod
    def from_components(cls, components) -> "VectorField3":
        """From three polynomials (or numbers)."""
        comps = [c if isinstance(c, Polynomial) else Polynomial.constant(3, float(c)) for c in components]
        if len(comps) != 3:
            raise ValueError("need three components")
        return cls(PolynomialForm(3, 1, comps))

    def contains(self, x) -> bool:
        return self.form.contains(x)

    def __call__(self, x) -> np.ndarray:
        return self.form.eval(x).coeffs.copy()

    def eval_many(self, X) -> np.ndarray:
        return self.form.eval_many(X)

    def div(self, x) -> float:
        return -float(self.form.delta_eval(x).coeffs[0])

    def curl(self, x) -> np.ndarray:
        from .exterior import hodge
        return hodge(self.form.d_eval(x)).coeffs.copy()

    def laplacian(self, x) -> np.ndarray:
        return self.form.laplacian_eval(x).coeffs.copy()

    def is_harmonic(self, samples, tol: float = 1e-9) -> tuple[bool, float]:
        res = max(max(abs(self.div(p)), float(np.linalg.norm(self.curl(p)))) for p in samples)
        return res <= tol, res

    def __add__(self, other: "VectorField3") -> "VectorField3":
        return VectorField3(self.form + other.form)

    def __mul__(self, s) -> "VectorField3":
        return VectorField3(float(s) * self.form)

    __rmul__ = __mul__


def form_to_vector(u: FormField) -> VectorField3:
    return VectorField3(u)


def vector_to_form(v: VectorField3) -> FormField:
    return v.form


def grad(f: FormField, x) -> np.ndarray:
    _require_scalar(f)
    return f.d_eval(x).coeffs.copy()


@dataclass(frozen=True, eq=False)
class HolomorphicVectorPair:
    """``(f, v)`` with ``grad f + curl v = 0`` and ``div v = 0``."""

    f: FormField
    v: VectorField3

    def __post_init__(self):
        _require_scalar(self.f)

    @classmethod
    def from_pair(cls, w: HolomorphicPair) -> "HolomorphicVectorPair":
        if w.n != 3 or w.r != 1:
            raise UnsupportedDimensionError("vector pairs correspond to n=3, r=1")
        return cls(w.w_lo, VectorField3(w.w_hi.star()))

    def to_pair(self) -> HolomorphicPair:
        return HolomorphicPair(1, self.f, self.v.form.star())

    def residual(self, samples) -> float:
        out = 0.0
        for p in samples:
            out = max(out, float(np.linalg.norm(grad(self.f, p) + self.v.curl(p))), abs(self.v.div(p)))
        return out


def _vector_integrals(u: VectorField3, f: FormField, v: VectorField3, surface: QuadratureSurface):
    if surface.n != 3:
        raise UnsupportedDimensionError("vector pairings live in n=3")
    X, N, wt = surface.nodes, surface.normals, surface.weights
    uu = u.eval_many(X)
    vv = v.eval_many(X)
    ff = f.eval_many(X)[:, 0]
    a = np.einsum("Ni,Ni->N", vv, np.cross(N, uu))
    b = ff * np.einsum("Ni,Ni->N", N, uu)
    return math.fsum(wt * a), math.fsum(wt * b)


def pairing_vector_h(u: VectorField3, f: FormField, v: VectorField3, surface: QuadratureSurface) -> float:
    """``-1/4pi int <v, N x u> dS + 1/4pi int f <N, u> dS`` for u harmonic near the compact."""
    _require_scalar(f)
    A, B = _vector_integrals(u, f, v, surface)
    return -A / FOUR_PI + B / FOUR_PI


def pairing_vector_p(f: FormField, v: VectorField3, u: VectorField3, surface: QuadratureSurface) -> float:
    """Same two integrals with (f, v) regular near the compact and u harmonic outside it."""
    _require_scalar(f)
    A, B = _vector_integrals(u, f, v, surface)
    return -A / FOUR_PI + B / FOUR_PI


@dataclass(frozen=True, eq=False)
class Helmholtz:
    """``u = grad f + curl v`` outside the surface, f and v vanishing at infinity."""

    u: VectorField3
    f: FormField
    v: VectorField3
    warnings: tuple[str, ...] = ()

    def residuals(self, points) -> dict:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rec = div = lap_f = lap_v = 0.0
        sup_u = 0.0
        for p in pts:
            uu = self.u(p)
            sup_u = max(sup_u, float(np.linalg.norm(uu)))
            rec = max(rec, float(np.linalg.norm(grad(self.f, p) + self.v.curl(p) - uu)))
            div = max(div, abs(self.v.div(p)))
            lap_f = max(lap_f, abs(float(self.f.laplacian_eval(p).coeffs[0])))
            lap_v = max(lap_v, float(np.linalg.norm(self.v.laplacian(p))))
        out = {"reconstruction": rec, "div_v": div, "laplacian_f": lap_f, "laplacian_v": lap_v, "sup_u": sup_u}
        s = sup_u if sup_u > 0 else 1.0
        out["relative"] = {k: out[k] / s for k in ("reconstruction", "div_v", "laplacian_f", "laplacian_v")}
        return out


def helmholtz_decompose(u: VectorField3, surface: QuadratureSurface, *, check: bool = True,
                        tol: float = LAYER_TOL) -> Helmholtz:
    """Exterior decomposition ``u = d u1 + delta u2`` read as ``grad f + curl v``."""
    dec = decompose_exterior(u.form, surface, check=check, tol=tol)
    return Helmholtz(u, dec.u1, VectorField3(dec.u2.star()), dec.warnings)


def cross_integrand(u: Covector, v: Covector, normal) -> float:
    """``<v, N x u>`` for single covectors (pointwise comparison helper)."""
    return float(np.dot(v.coeffs, np.cross(np.asarray(normal, dtype=float), u.coeffs)))


__all__ = [
    "VectorField3", "form_to_vector", "vector_to_form", "grad", "HolomorphicVectorPair",
    "pairing_vector_h", "pairing_vector_p", "Helmholtz", "helmholtz_decompose", "cross_integrand",
]
