"""Quadrature surfaces (spheres, ellipsoids) and closed curves.

Sphere rules are tensor products: a Gauss rule in the cosine of each polar
angle and the trapezoid rule in the azimuth.  For ``S^2`` the polar rule is
Gauss-Legendre; for ``S^3`` the outer polar angle carries the weight
``sin^2 psi``, so its cosine gets the Gauss rule for ``sqrt(1 - t^2)``
(Chebyshev of the second kind) and the inner one Gauss-Legendre.  All
three factors integrate the corresponding polynomial/trigonometric parts
exactly, so the rule is spectrally accurate for smooth integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_chebyu, roots_legendre

from .errors import NodeEvaluationError, ProximityError, UnsupportedDimensionError
from .exterior import Covector, dim

EXCLUSION_FACTOR = 0.05
SUPPORTED_QUADRATURE_DIMS = (3, 4)


def sphere_measure(n: int) -> float:
    """(n-1)-dimensional measure of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuadratureSurface:
    """Closed oriented hypersurface as nodes, positive weights and outward normals.

    ``descriptor`` records the shape (kind, center, axes, order); the
    clearance check uses it to compute a lower bound on the distance from a
    point to the surface.
    """

    n: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    normals: np.ndarray = field(repr=False)
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        object.__setattr__(self, "normals", _frozen(self.normals))
        m = self.nodes.shape[0]
        if self.nodes.shape != (m, self.n) or self.normals.shape != (m, self.n) or self.weights.shape != (m,):
            raise ValueError("inconsistent node/normal/weight shapes")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def __len__(self):
        return self.nodes.shape[0]

    @property
    def area(self) -> float:
        return math.fsum(self.weights)

    @property
    def scale(self) -> float:
        """Length scale used by the exclusion zone (radius or smallest semi-axis)."""
        return float(min(self.descriptor["axes"]))

    def distance_bound(self, x) -> float:
        """Lower bound on the distance from x to the surface.

        Exact for spheres; for an ellipsoid ``c + A S`` it is
        ``|‖A^-1 (x - c)‖ - 1| * min(axes)``.
        """
        x = np.asarray(x, dtype=float)
        c = np.asarray(self.descriptor["center"])
        axes = np.asarray(self.descriptor["axes"], dtype=float)
        s = np.linalg.norm((x - c) / axes)
        return float(abs(s - 1.0) * axes.min())

    def is_inside(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        c = np.asarray(self.descriptor["center"])
        axes = np.asarray(self.descriptor["axes"], dtype=float)
        return bool(np.linalg.norm((x - c) / axes) < 1.0)

    def normal_at(self, p) -> np.ndarray:
        """Outward unit normal at a point of the (sphere or ellipsoid) surface."""
        p = np.asarray(p, dtype=float)
        c = np.asarray(self.descriptor["center"])
        axes = np.asarray(self.descriptor["axes"], dtype=float)
        g = (p - c) / axes**2
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def check_clearance(self, x, factor: float = EXCLUSION_FACTOR) -> None:
        dist = self.distance_bound(x)
        need = factor * self.scale
        if dist < need:
            raise ProximityError(
                f"point {np.asarray(x).tolist()} is {dist:.3g} from the surface; "
                f"plain quadrature needs at least {need:.3g}",
                distance=dist,
                minimum=need,
            )


def _sphere_rule(n: int, order: int):
    """Unit-sphere nodes and weights (nodes are also the outward normals)."""
    m_az = 2 * order
    phi = 2.0 * math.pi * np.arange(m_az) / m_az
    w_az = np.full(m_az, 2.0 * math.pi / m_az)
    t, wt = roots_legendre(order)
    if n == 3:
        T, P = np.meshgrid(t, phi, indexing="ij")
        S = np.sqrt(1.0 - T**2)
        pts = np.stack([S * np.cos(P), S * np.sin(P), T], axis=-1).reshape(-1, 3)
        w = np.outer(wt, w_az).reshape(-1)
        return pts, w
    if n == 4:
        u, wu = roots_chebyu(order)
        U, T, P = np.meshgrid(u, t, phi, indexing="ij")
        SU = np.sqrt(1.0 - U**2)
        ST = np.sqrt(1.0 - T**2)
        pts = np.stack(
            [U, SU * T, SU * ST * np.cos(P), SU * ST * np.sin(P)], axis=-1
        ).reshape(-1, 4)
        w = (wu[:, None, None] * wt[None, :, None] * w_az[None, None, :]).reshape(-1)
        return pts, w
    raise UnsupportedDimensionError(f"sphere quadrature supports n in {SUPPORTED_QUADRATURE_DIMS}, got n={n}")


def sphere_surface(center, radius: float, order: int) -> QuadratureSurface:
    center = np.asarray(center, dtype=float)
    n = center.shape[0]
    if n not in SUPPORTED_QUADRATURE_DIMS:
        raise UnsupportedDimensionError(f"sphere quadrature supports n in {SUPPORTED_QUADRATURE_DIMS}, got n={n}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if order < 4:
        raise ValueError(f"quadrature order must be >= 4, got {order}")
    pts, w = _sphere_rule(n, order)
    return QuadratureSurface(
        n,
        center + radius * pts,
        radius ** (n - 1) * w,
        pts,
        {"kind": "sphere", "center": center.tolist(), "radius": float(radius),
         "axes": [float(radius)] * n, "order": int(order)},
    )


def ellipsoid_surface(center, axes, order: int) -> QuadratureSurface:
    """Axis-aligned ellipsoid as the affine image of the unit-sphere rule."""
    center = np.asarray(center, dtype=float)
    axes = np.asarray(axes, dtype=float)
    n = center.shape[0]
    if n not in SUPPORTED_QUADRATURE_DIMS:
        raise UnsupportedDimensionError(f"ellipsoid quadrature supports n in {SUPPORTED_QUADRATURE_DIMS}, got n={n}")
    if axes.shape != (n,) or np.any(axes <= 0):
        raise ValueError("axes must be n positive semi-axis lengths")
    if order < 4:
        raise ValueError(f"quadrature order must be >= 4, got {order}")
    pts, w = _sphere_rule(n, order)
    # normal of A S at A p is A^{-T} p normalized; area element scales by det A |A^{-T} p|
    g = pts / axes
    gn = np.linalg.norm(g, axis=1)
    return QuadratureSurface(
        n,
        center + pts * axes,
        w * np.prod(axes) * gn,
        g / gn[:, None],
        {"kind": "ellipsoid", "center": center.tolist(), "axes": axes.tolist(), "order": int(order)},
    )


def integrate_scalar(surface: QuadratureSurface, f: Callable) -> float:
    """``sum_i w_i f(node_i)`` with exactly rounded summation."""
    vals = []
    for i, p in enumerate(surface.nodes):
        try:
            vals.append(float(f(p)))
        except Exception as exc:  # noqa: BLE001 - re-raised with the node index
            raise NodeEvaluationError(i, repr(exc)) from exc
    return math.fsum(w * v for w, v in zip(surface.weights, vals))


def integrate_covector(surface: QuadratureSurface, g: Callable) -> Covector:
    """Componentwise surface integral of a covector-valued integrand."""
    rows = []
    n = r = None
    for i, p in enumerate(surface.nodes):
        try:
            c = g(p)
        except Exception as exc:  # noqa: BLE001
            raise NodeEvaluationError(i, repr(exc)) from exc
        if n is None:
            n, r = c.n, c.r
        rows.append(c.coeffs)
    vals = np.asarray(rows) * surface.weights[:, None]
    return Covector(n, r, [math.fsum(col) for col in vals.T] if dim(n, r) else [])


def normals_as_covectors(surface: QuadratureSurface) -> list[Covector]:
    return [Covector(surface.n, 1, v) for v in surface.normals]


@dataclass(frozen=True, eq=False)
class Cycle3:
    """Closed curve in R^3 as nodes, unit tangents and arclength weights."""

    nodes: np.ndarray = field(repr=False)
    tangents: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("nodes", "tangents", "weights"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def length(self) -> float:
        return math.fsum(self.weights)

    def line_integral(self, one_form: Callable) -> float:
        """``sum_i w_i <alpha(p_i), tau_i>`` for a 1-form valued callable."""
        vals = []
        for i, (p, t) in enumerate(zip(self.nodes, self.tangents)):
            try:
                vals.append(float(np.dot(one_form(p).coeffs, t)))
            except Exception as exc:  # noqa: BLE001
                raise NodeEvaluationError(i, repr(exc)) from exc
        return math.fsum(w * v for w, v in zip(self.weights, vals))


def circle_cycle(center, radius: float, axis, order: int) -> Cycle3:
    """Circle traversed counterclockwise about ``axis`` (right-hand rule)."""
    center = np.asarray(center, dtype=float)
    axis = np.asarray(axis, dtype=float)
    if center.shape != (3,) or axis.shape != (3,):
        raise UnsupportedDimensionError("circles are supported in n=3 only")
    an = np.linalg.norm(axis)
    if an == 0:
        raise ValueError("circle axis must be nonzero")
    if radius <= 0 or order < 3:
        raise ValueError("need radius > 0 and order >= 3")
    a = axis / an
    helper = np.eye(3)[np.argmin(np.abs(a))]
    u = np.cross(a, helper)
    u /= np.linalg.norm(u)
    v = np.cross(a, u)
    th = 2.0 * math.pi * np.arange(order) / order
    nodes = center + radius * (np.cos(th)[:, None] * u + np.sin(th)[:, None] * v)
    tang = -np.sin(th)[:, None] * u + np.cos(th)[:, None] * v
    w = np.full(order, 2.0 * math.pi * radius / order)
    return Cycle3(nodes, tang, w, {"kind": "circle", "center": center.tolist(),
                                   "radius": float(radius), "axis": a.tolist(), "order": int(order)})
