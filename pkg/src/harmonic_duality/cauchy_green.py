"""Cauchy-Green reproduction of harmonic forms and holomorphic pairs.

With ``P(u) = U^{N ^ u}`` and ``Q(u) = U^{*(N ^ *u)}`` the layer potentials of
the boundary traces of u, a harmonic r-form near a regular compact is
reproduced inside the boundary by

    u(x) = -(1/c_n) [ delta P(u) + gamma_r d Q(u) ](x),

and a harmonic form outside the boundary that vanishes at infinity by the
same expression with the opposite overall sign.  Holomorphic pairs carry an
extra coupling term in each component.  All formulas are assembled as
``FormField`` objects so that the reproducing fields can be differentiated
analytically (used by the exterior decomposition).
"""
from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass, field as dc_field
from typing import Literal, Sequence

import numpy as np

from .errors import DegreeError, DimensionMismatchError
from .exterior import Covector
from .fields import (
    LAYER_TOL,
    FormField,
    HolomorphicPair,
    SumForm,
    ZeroForm,
    is_harmonic,
    is_holomorphic_pair,
)
from .geometry import QuadratureSurface
from .potentials import (
    LayerPotentialForm,
    c_n,
    far_sample,
    gamma,
    nwedge_density,
    star_nwedge_star_density,
)

Orientation = Literal["interior", "exterior"]

# number of surface nodes used for the precondition checks
_CHECK_NODES = 48
# far-field decay check: sup at the far radius relative to sup on the surface
_DECAY_RADIUS_FACTOR = 1e3
_DECAY_RATIO = 1e-2


def orientation_sign(orientation: Orientation) -> float:
    """Overall factor of the bracket: ``-1`` inside, ``+1`` outside."""
    if orientation == "interior":
        return -1.0
    if orientation == "exterior":
        return 1.0
    raise ValueError(f"orientation must be 'interior' or 'exterior', got {orientation!r}")


def _same_dim(u: FormField, surface: QuadratureSurface):
    if u.n != surface.n:
        raise DimensionMismatchError(f"field in n={u.n}, surface in n={surface.n}")


def P(u: FormField, surface: QuadratureSurface, scale: float = 1.0) -> LayerPotentialForm:
    """Layer potential with density ``N ^ u`` (degree r + 1)."""
    return LayerPotentialForm(surface, nwedge_density(u, surface), scale)


def Q(u: FormField, surface: QuadratureSurface, scale: float = 1.0) -> LayerPotentialForm:
    """Layer potential with density ``*(N ^ *u)`` (degree r - 1)."""
    return LayerPotentialForm(surface, star_nwedge_star_density(u, surface), scale)


def cauchy_green_field(u: FormField, surface: QuadratureSurface,
                       orientation: Orientation = "interior") -> FormField:
    """The reproducing field ``x -> s/c_n [delta P(u) + gamma_r d Q(u)](x)``.

    Terms whose degree leaves ``0..n`` are dropped (``P`` for r = n, ``Q``
    for r = 0).
    """
    _same_dim(u, surface)
    n, r = u.n, u.r
    s = orientation_sign(orientation) / c_n(n)
    terms = []
    if r + 1 <= n:
        terms.append((1.0, P(u, surface, s).delta()))
    if r >= 1:
        terms.append((1.0, Q(u, surface, s * gamma(n, r)).d()))
    return SumForm.of(terms) if terms else ZeroForm(n, r)


def pair_cauchy_green_fields(w: HolomorphicPair, surface: QuadratureSurface,
                             orientation: Orientation = "interior") -> tuple[FormField, FormField]:
    """Reproducing fields ``(hi, lo)`` for a holomorphic pair.

    hi = s/c_n [delta P(w_hi) + gamma_{r+1} d Q(w_hi) + d P(w_lo)]
    lo = s/c_n [delta P(w_lo) + gamma_{r-1} d Q(w_lo) + gamma_{r+1} delta Q(w_hi)]

    The coupling term of ``lo`` uses the density ``*(N ^ *w_hi)``, the only
    reading of degree r that makes the identity hold.
    """
    _same_dim(w.w_hi, surface)
    n, r = w.n, w.r
    s = orientation_sign(orientation) / c_n(n)
    hi = [(1.0, Q(w.w_hi, surface, s * gamma(n, r + 1)).d()),
          (1.0, P(w.w_lo, surface, s).d())]
    if r + 2 <= n:
        hi.append((1.0, P(w.w_hi, surface, s).delta()))
    lo = [(1.0, P(w.w_lo, surface, s).delta()),
          (1.0, Q(w.w_hi, surface, s * gamma(n, r + 1)).delta())]
    if r >= 2:
        lo.append((1.0, Q(w.w_lo, surface, s * gamma(n, r - 1)).d()))
    return SumForm.of(hi), SumForm.of(lo)


# precondition checks ---------------------------------------------------------------

def _check_nodes(surface: QuadratureSurface) -> np.ndarray:
    idx = np.linspace(0, len(surface) - 1, min(_CHECK_NODES, len(surface))).round().astype(int)
    return surface.nodes[idx]


def _rel_harmonic_residual(u: FormField, pts) -> float:
    if u.r < 0 or u.r > u.n:
        return 0.0
    chk = is_harmonic(u, pts, tol=np.inf)
    size = float(np.max(np.linalg.norm(u.eval_many(pts), axis=1))) if len(pts) else 0.0
    return chk.residual / max(size, 1.0)


def _decay_ratio(fields: Sequence[FormField], surface: QuadratureSurface) -> float:
    """``sup_far / sup_surface`` over the given fields (0 when both vanish)."""
    c = np.asarray(surface.descriptor["center"], dtype=float)
    radius = _DECAY_RADIUS_FACTOR * (max(surface.descriptor["axes"]) + np.linalg.norm(c))
    far = far_sample(surface.n, radius, 16, np.random.default_rng(0)) + c
    near = _check_nodes(surface)
    top = max(float(np.max(np.linalg.norm(f.eval_many(far), axis=1))) for f in fields)
    bottom = max(float(np.max(np.linalg.norm(f.eval_many(near), axis=1))) for f in fields)
    if bottom == 0.0:
        return 0.0 if top == 0.0 else np.inf
    return top / bottom


def _precondition_warnings(fields, surface, exterior: bool, pair: HolomorphicPair | None,
                           tol: float) -> tuple[list[str], dict]:
    pts = _check_nodes(surface)
    diag: dict = {}
    msgs: list[str] = []
    if pair is None:
        res = _rel_harmonic_residual(fields[0], pts)
        diag["harmonic_residual"] = res
        if res > tol:
            msgs.append(f"input is not harmonic near the surface (relative residual {res:.3g} > {tol:.1g})")
    else:
        chk = is_holomorphic_pair(pair, pts, tol=np.inf)
        size = max(1.0, max(float(np.max(np.linalg.norm(f.eval_many(pts), axis=1))) for f in fields))
        res = chk.residual / size
        diag["pair_residual"] = res
        if res > tol:
            msgs.append(f"input is not a holomorphic pair near the surface (relative residual {res:.3g} > {tol:.1g})")
    if exterior:
        ratio = _decay_ratio(fields, surface)
        diag["decay_ratio"] = ratio
        if ratio > _DECAY_RATIO:
            msgs.append(f"input does not appear to vanish at infinity (far/near ratio {ratio:.3g})")
    return msgs, diag


def _emit(msgs: list[str]):
    for m in msgs:
        _warnings.warn(m, PreconditionWarning, stacklevel=3)


class PreconditionWarning(UserWarning):
    """An input violates a hypothesis of a reproduction formula."""


# results -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Reproduction:
    """Value of a reproduction formula at one point with precondition diagnostics."""

    value: Covector
    warnings: tuple[str, ...] = ()
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.warnings


@dataclass(frozen=True)
class PairReproduction:
    hi: Covector
    lo: Covector
    warnings: tuple[str, ...] = ()
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.warnings


def _reproduce(u, surface, x, orientation, check, tol) -> Reproduction:
    f = cauchy_green_field(u, surface, orientation)
    f.check_domain(x)
    msgs, diag = ([], {})
    if check:
        msgs, diag = _precondition_warnings([u], surface, orientation == "exterior", None, tol)
        _emit(msgs)
    return Reproduction(f.eval(x), tuple(msgs), diag)


def reproduce_interior(u: FormField, surface: QuadratureSurface, x, *, check: bool = True,
                       tol: float = LAYER_TOL) -> Reproduction:
    """Reproduce a harmonic form at an interior point from its boundary trace."""
    if not surface.is_inside(x):
        raise ValueError("reproduce_interior needs a point inside the surface")
    return _reproduce(u, surface, x, "interior", check, tol)


def reproduce_exterior(u: FormField, surface: QuadratureSurface, x, *, check: bool = True,
                       tol: float = LAYER_TOL) -> Reproduction:
    """Reproduce a harmonic form vanishing at infinity at an exterior point."""
    if surface.is_inside(x):
        raise ValueError("reproduce_exterior needs a point outside the surface")
    return _reproduce(u, surface, x, "exterior", check, tol)


def reproduce_many(u: FormField, surface: QuadratureSurface, X,
                   orientation: Orientation = "interior") -> np.ndarray:
    """Vectorized reproduction at many points (no precondition checks)."""
    f = cauchy_green_field(u, surface, orientation)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    for x in X:
        f.check_domain(x)
    return f.eval_many(X)


def _reproduce_pair(w, surface, x, orientation, check, tol) -> PairReproduction:
    hi, lo = pair_cauchy_green_fields(w, surface, orientation)
    hi.check_domain(x)
    msgs, diag = ([], {})
    if check:
        msgs, diag = _precondition_warnings([w.w_lo, w.w_hi], surface,
                                            orientation == "exterior", w, tol)
        _emit(msgs)
    return PairReproduction(hi.eval(x), lo.eval(x), tuple(msgs), diag)


def reproduce_pair_interior(w: HolomorphicPair, surface: QuadratureSurface, x, *,
                            check: bool = True, tol: float = LAYER_TOL) -> PairReproduction:
    if not surface.is_inside(x):
        raise ValueError("reproduce_pair_interior needs a point inside the surface")
    return _reproduce_pair(w, surface, x, "interior", check, tol)


def reproduce_pair_exterior(w: HolomorphicPair, surface: QuadratureSurface, x, *,
                            check: bool = True, tol: float = LAYER_TOL) -> PairReproduction:
    if surface.is_inside(x):
        raise ValueError("reproduce_pair_exterior needs a point outside the surface")
    return _reproduce_pair(w, surface, x, "exterior", check, tol)


# exterior decomposition -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Decomposition:
    """``u = d u1 + delta u2`` outside the surface, with ``delta u1 = 0``, ``d u2 = 0``.

    ``u1 = (gamma_r / c_n) Q(u)`` and ``u2 = (1 / c_n) P(u)``: the exterior
    reproduction formula read as ``d`` and ``delta`` of two potentials.
    """

    u: FormField
    u1: FormField
    u2: FormField
    surface: QuadratureSurface
    warnings: tuple[str, ...] = ()

    def reconstruct(self, x) -> Covector:
        n, r = self.u.n, self.u.r
        out = Covector.zero(n, r)
        if r >= 1:
            out = out + self.u1.d_eval(x)
        if r + 1 <= n:
            out = out + self.u2.delta_eval(x)
        return out

    def residuals(self, points) -> dict:
        """Max-norm residuals at exterior points, absolute and relative to ``sup |u|`` there."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        n, r = self.u.n, self.u.r
        uval = self.u.eval_many(pts)
        rec = np.zeros_like(uval)
        if r >= 1:
            rec = rec + self.u1.d_eval_many(pts)
        if r + 1 <= n:
            rec = rec + self.u2.delta_eval_many(pts)
        size = float(np.max(np.linalg.norm(uval, axis=1))) if len(pts) else 0.0
        def mx(a):
            return float(np.max(np.linalg.norm(a, axis=1))) if a.size else 0.0
        out = {
            "reconstruction": mx(rec - uval),
            "delta_u1": mx(self.u1.delta_eval_many(pts)) if r >= 2 else 0.0,
            "d_u2": mx(self.u2.d_eval_many(pts)) if r + 2 <= n else 0.0,
            "sup_u": size,
        }
        scale = size if size > 0 else 1.0
        out["relative"] = {k: out[k] / scale for k in ("reconstruction", "delta_u1", "d_u2")}
        return out

    def decay(self, radius: float, count: int = 32, seed: int = 0) -> dict:
        """Sup norms of u1, u2 on a sphere of the given radius, and sup |u| on the surface."""
        far = far_sample(self.u.n, radius, count, np.random.default_rng(seed))
        def sup(f):
            v = f.eval_many(far)
            return float(np.max(np.linalg.norm(v, axis=1))) if v.size else 0.0
        near = self.surface.nodes
        su = float(np.max(np.linalg.norm(self.u.eval_many(near), axis=1)))
        return {"u1": sup(self.u1), "u2": sup(self.u2), "sup_u_surface": su}


def decompose_exterior(u: FormField, surface: QuadratureSurface, *, check: bool = True,
                       tol: float = LAYER_TOL) -> Decomposition:
    """Split an exterior harmonic form vanishing at infinity as ``d u1 + delta u2``."""
    _same_dim(u, surface)
    n, r = u.n, u.r
    if not 0 <= r <= n:
        raise DegreeError(f"degree {r} outside 0..{n}")
    c = c_n(n)
    u1 = Q(u, surface, gamma(n, r) / c) if r >= 1 else ZeroForm(n, 0)
    u2 = P(u, surface, 1.0 / c) if r + 1 <= n else ZeroForm(n, n)
    msgs: list[str] = []
    if check:
        msgs, _ = _precondition_warnings([u], surface, True, None, tol)
        _emit(msgs)
    return Decomposition(u, u1, u2, surface, tuple(msgs))


__all__ = [
    "Orientation", "orientation_sign", "P", "Q", "cauchy_green_field", "pair_cauchy_green_fields",
    "PreconditionWarning", "Reproduction", "PairReproduction", "reproduce_interior",
    "reproduce_exterior", "reproduce_many", "reproduce_pair_interior", "reproduce_pair_exterior",
    "Decomposition", "decompose_exterior",
]
