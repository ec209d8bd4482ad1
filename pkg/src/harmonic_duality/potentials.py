"""Newtonian kernel, point-source and surface layer potentials.

The kernel is ``k(x, y) = |x - y|^(2 - n)``.  Writing ``k = g(s)`` with
``s = |x - y|^2`` and ``g(s) = s^p``, ``p = (2 - n)/2``, all x-derivatives up
to order four follow from the chain rule in closed form; they are the only
derivatives used by kernel and layer-potential fields.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import DegreeError, DimensionMismatchError, DomainError
from .exterior import Covector, dim, hodge_matrix, wedge_tensor
from .fields import FormField, HolomorphicPair, SumForm
from .geometry import EXCLUSION_FACTOR, QuadratureSurface, sphere_measure

MAX_KERNEL_ORDER = 4


def c_n(n: int) -> float:
    """``(n - 2)`` times the measure of the unit sphere ``S^(n-1)``."""
    return (n - 2) * sphere_measure(n)


def gamma(n: int, r: int) -> int:
    """``(-1)^(n r + n + 1)``."""
    return -1 if (n * r + n + 1) % 2 else 1


# kernel ------------------------------------------------------------------------

def _g_derivs(s: np.ndarray, n: int, order: int) -> list[np.ndarray]:
    p = (2.0 - n) / 2.0
    out = []
    coef = 1.0
    for k in range(order + 1):
        out.append(coef * s ** (p - k))
        coef *= p - k
    return out


def kernel_derivatives(diff: np.ndarray, order: int) -> np.ndarray:
    """x-derivatives of ``|x - y|^(2-n)`` of the given order.

    ``diff`` holds ``x - y`` with shape (..., n); the result has shape
    ``(...,) + (n,) * order``.
    """
    if not 0 <= order <= MAX_KERNEL_ORDER:
        raise ValueError(f"kernel derivatives available up to order {MAX_KERNEL_ORDER}")
    diff = np.asarray(diff, dtype=float)
    n = diff.shape[-1]
    s = np.einsum("...i,...i->...", diff, diff)
    g = _g_derivs(s, n, order)
    r = diff
    eye = np.eye(n)
    if order == 0:
        return g[0]
    if order == 1:
        return 2 * g[1][..., None] * r
    rr = np.einsum("...i,...j->...ij", r, r)
    if order == 2:
        return 4 * g[2][..., None, None] * rr + 2 * g[1][..., None, None] * eye
    if order == 3:
        rrr = np.einsum("...ij,...k->...ijk", rr, r)
        dr = np.einsum("ij,...k->...ijk", eye, r)
        sym = dr + np.swapaxes(dr, -1, -2) + np.moveaxis(dr, -1, -3)
        return 8 * g[3][..., None, None, None] * rrr + 4 * g[2][..., None, None, None] * sym
    rrrr = np.einsum("...ij,...kl->...ijkl", rr, rr)
    # delta_ab r_c r_d summed over the 6 ways to pick the delta pair
    drr = np.einsum("ij,...kl->...ijkl", eye, rr)
    sym2 = (drr
            + np.einsum("...ijkl->...ikjl", drr)
            + np.einsum("...ijkl->...iklj", drr)
            + np.einsum("...ijkl->...kijl", drr)
            + np.einsum("...ijkl->...kilj", drr)
            + np.einsum("...ijkl->...klij", drr))
    dd = (np.einsum("ij,kl->ijkl", eye, eye)
          + np.einsum("ik,jl->ijkl", eye, eye)
          + np.einsum("il,jk->ijkl", eye, eye))
    e4 = (..., None, None, None, None)
    return 16 * g[4][e4] * rrrr + 8 * g[3][e4] * sym2 + 4 * g[2][e4] * dd


def _distinct(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"points of shapes {x.shape} and {y.shape}")
    diff = x - y
    if not np.any(diff):
        raise DomainError("kernel is singular at x = y")
    return diff


def kernel(x, y) -> float:
    return float(kernel_derivatives(_distinct(x, y), 0))


def kernel_grad_x(x, y) -> Covector:
    """``d_x |x - y|^(2-n)`` as a 1-covector; component i is (2-n) rho^-n (x-y)_i."""
    diff = _distinct(x, y)
    return Covector(diff.shape[0], 1, kernel_derivatives(diff, 1))


def kernel_grad_y(x, y) -> Covector:
    diff = _distinct(x, y)
    return Covector(diff.shape[0], 1, -kernel_derivatives(diff, 1))


def kernel_hessian_x(x, y) -> np.ndarray:
    """``(2-n) [delta_ij rho^-n - n rho^-(n+2) (x-y)_i (x-y)_j]``."""
    return kernel_derivatives(_distinct(x, y), 2)


# kernel-sum fields ----------------------------------------------------------------

class KernelSum(FormField):
    """``scale * sum_j k(x, y_j) rho_j`` for fixed centers y_j and covectors rho_j.

    The quadrature weights of a layer potential are folded into ``rho_j``.
    Derivatives act on the kernel only; higher-order fields come from
    ``d()``/``delta()`` through :class:`~harmonic_duality.fields.DerivedForm`.
    """

    _CHUNK = 2_000_000

    def __init__(self, n: int, r: int, centers, densities, scale: float = 1.0):
        self.n, self.r = n, r
        self.centers = np.asarray(centers, dtype=float).reshape(-1, n)
        self.densities = np.asarray(densities, dtype=float).reshape(len(self.centers), dim(n, r))
        self.scale = float(scale)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(np.any(self.centers != x, axis=1)))

    def contains_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.n)
        out = np.ones(len(X), dtype=bool)
        for c in self.centers:
            out &= np.any(X != c, axis=1)
        return out

    def coeff_derivs_many(self, X, order):
        X = np.asarray(X, dtype=float).reshape(-1, self.n)
        nc = len(self.centers)
        out = np.empty((len(X),) + (self.n,) * order + (self.dim,))
        step = max(1, self._CHUNK // max(1, nc * self.n**order))
        for a in range(0, len(X), step):
            xs = X[a:a + step]
            t = kernel_derivatives(xs[:, None, :] - self.centers[None, :, :], order)
            t = t.reshape(len(xs), nc, -1)
            val = np.einsum("xjK,jb->xKb", t, self.densities)
            out[a:a + step] = val.reshape((len(xs),) + (self.n,) * order + (self.dim,))
        return self.scale * out

    def coeff_derivs(self, x, order):
        x = np.asarray(x, dtype=float)
        t = kernel_derivatives(x[None, :] - self.centers, order).reshape(len(self.centers), -1)
        val = t.T @ self.densities
        return self.scale * val.reshape((self.n,) * order + (self.dim,))


class KernelForm(SumForm):
    """Finite sum of terms ``T(k(., x0) xi)`` with ``T`` one of identity, d, delta.

    ``terms`` is a sequence of ``(center, xi, tag)`` with ``tag`` in
    ``{"none", "d", "delta"}``; all terms must produce the same degree.
    """

    def __init__(self, terms: Sequence[tuple]):
        parts = []
        for center, xi, tag in terms:
            base = KernelSum(xi.n, xi.r, [center], [xi.coeffs])
            if tag in (None, "none"):
                f = base
            elif tag == "d":
                f = base.d()
            elif tag == "delta":
                f = base.delta()
            else:
                raise ValueError(f"unknown derivative tag {tag!r}")
            parts.append((1.0, f))
        super().__init__(parts)


def point_potential(x0, xi: Covector) -> KernelSum:
    """``U(x) = k(x, x0) xi``, the potential of a point charge with covector weight xi."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (xi.n,):
        raise DimensionMismatchError(f"center of dimension {x0.shape} for n={xi.n}")
    return KernelSum(xi.n, xi.r, [x0], [xi.coeffs])


def point_pair(x0, xi: Covector) -> HolomorphicPair:
    """Holomorphic pair ``(delta U, d U)`` with ``U = k(., x0) xi``, valid off x0."""
    if not 1 <= xi.r <= xi.n - 1:
        raise DegreeError(f"point pairs need 1 <= r <= n-1, got r={xi.r}")
    u = point_potential(x0, xi)
    return HolomorphicPair(xi.r, u.delta(), u.d())


def reciprocity_check(mu1: tuple, mu2: tuple) -> tuple[float, float]:
    """Mutual actions of two point measures on each other's potentials.

    ``mu1 = (x1, xi1)`` with xi1 of degree r and ``mu2 = (x2, xi2)`` with
    degree n - r.  A point measure acts on a form by
    ``mu[omega] = *(xi ^ omega(x))``.  Returns
    ``(mu1[U^mu2], mu2[U^mu1])``.
    """
    (x1, xi1), (x2, xi2) = mu1, mu2
    if xi1.n != xi2.n:
        raise DimensionMismatchError(f"n={xi1.n} vs n={xi2.n}")
    if xi1.r + xi2.r != xi1.n:
        raise DegreeError("charges must have complementary degrees r and n - r")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.array_equal(x1, x2):
        raise DomainError("reciprocity needs distinct supports (coincident points)")
    u2_at_1 = point_potential(x2, xi2).eval(x1)
    u1_at_2 = point_potential(x1, xi1).eval(x2)
    t = wedge_tensor(xi1.n, xi1.r, xi2.r)[0]
    a = float(xi1.coeffs @ t @ u2_at_1.coeffs)
    t2 = wedge_tensor(xi1.n, xi2.r, xi1.r)[0]
    b = float(xi2.coeffs @ t2 @ u1_at_2.coeffs)
    return a, b


# boundary densities -------------------------------------------------------------

class Density:
    """Covector-valued function on a quadrature surface.

    ``values()`` evaluates it at all nodes at once; calling it on a single
    surface point uses the analytic normal there.
    """

    def __init__(self, surface: QuadratureSurface, n: int, r: int, fn: Callable):
        self.surface = surface
        self.n, self.r = n, r
        self._fn = fn
        self._values = None

    def values(self) -> np.ndarray:
        if self._values is None:
            v = np.asarray(self._fn(self.surface.nodes, self.surface.normals), dtype=float)
            v.setflags(write=False)
            self._values = v
        return self._values

    def __call__(self, p) -> Covector:
        p = np.asarray(p, dtype=float)
        nrm = self.surface.normal_at(p)
        return Covector(self.n, self.r, np.asarray(self._fn(p[None], nrm[None]))[0])


def _field_values(u: FormField, pts) -> np.ndarray:
    return u.coeff_derivs_many(pts, 0)


def nwedge_density(u: FormField, surface: QuadratureSurface) -> Density:
    """``y -> N(y) ^ u(y)``."""
    n, r = u.n, u.r
    t = wedge_tensor(n, 1, r)

    def fn(pts, nrm):
        return np.einsum("kij,Ni,Nj->Nk", t, nrm, _field_values(u, pts))

    return Density(surface, n, r + 1, fn)


def star_nwedge_star_density(u: FormField, surface: QuadratureSurface) -> Density:
    """``y -> *(N(y) ^ *u(y))``, of degree r - 1."""
    n, r = u.n, u.r
    if r < 1:
        raise DegreeError("*(N ^ *u) needs u of degree >= 1")
    h_in = hodge_matrix(n, r)
    t = wedge_tensor(n, 1, n - r)
    h_out = hodge_matrix(n, n - r + 1)

    def fn(pts, nrm):
        su = _field_values(u, pts) @ h_in.T
        return np.einsum("ab,bij,Ni,Nj->Na", h_out, t, nrm, su)

    return Density(surface, n, r - 1, fn)


def star_nwedge_density(u: FormField, surface: QuadratureSurface) -> Density:
    """``y -> *(N(y) ^ u(y))``, of degree n - r - 1."""
    n, r = u.n, u.r
    if r + 1 > n:
        raise DegreeError("*(N ^ u) needs u of degree <= n - 1")
    t = wedge_tensor(n, 1, r)
    h_out = hodge_matrix(n, r + 1)

    def fn(pts, nrm):
        return np.einsum("ab,bij,Ni,Nj->Na", h_out, t, nrm, _field_values(u, pts))

    return Density(surface, n, n - r - 1, fn)


def covector_density(surface: QuadratureSurface, g: Callable, r: int) -> Density:
    """Wrap a pointwise callable ``p -> Covector`` as a density (loops over nodes)."""
    n = surface.n

    def fn(pts, nrm):
        return np.stack([g(p).coeffs for p in pts]) if len(pts) else np.zeros((0, dim(n, r)))

    return Density(surface, n, r, fn)


# layer potentials -------------------------------------------------------------------

class LayerPotentialForm(KernelSum):
    """``scale * sum_i w_i k(x, y_i) rho(y_i)`` over the nodes of a surface.

    Evaluation inside the exclusion zone (distance below
    ``EXCLUSION_FACTOR`` times the surface scale) raises ProximityError.
    """

    def __init__(self, surface: QuadratureSurface, density: Density, scale: float = 1.0,
                 exclusion: float = EXCLUSION_FACTOR):
        if density.surface is not surface:
            raise ValueError("density was built on a different surface")
        vals = density.values() * surface.weights[:, None]
        super().__init__(surface.n, density.r, surface.nodes, vals, scale)
        self.surface = surface
        self.exclusion = exclusion

    def contains(self, x) -> bool:
        return self.surface.distance_bound(x) >= self.exclusion * self.surface.scale

    def contains_many(self, X) -> np.ndarray:
        return np.array([self.contains(x) for x in np.asarray(X, dtype=float).reshape(-1, self.n)], dtype=bool)

    def check_domain(self, x) -> None:
        self.surface.check_clearance(x, self.exclusion)


def layer_potential(surface: QuadratureSurface, density: Density, x) -> Covector:
    return LayerPotentialForm(surface, density).eval(x)


def d_layer(surface: QuadratureSurface, density: Density, x) -> Covector:
    """``d_x`` of the layer potential, differentiating the kernel under the sum."""
    return LayerPotentialForm(surface, density).d_eval(x)


def delta_layer(surface: QuadratureSurface, density: Density, x) -> Covector:
    """Codifferential in x of the layer potential."""
    return LayerPotentialForm(surface, density).delta_eval(x)


def far_sample(n: int, radius: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random points on the sphere of the given radius about the origin."""
    v = rng.standard_normal((count, n))
    return radius * v / np.linalg.norm(v, axis=1, keepdims=True)


def sup_norm_on(u: FormField, pts) -> float:
    vals = u.eval_many(pts)
    return float(np.max(np.linalg.norm(vals, axis=1))) if len(vals) else 0.0


__all__ = [
    "c_n", "gamma", "kernel", "kernel_grad_x", "kernel_grad_y", "kernel_hessian_x",
    "kernel_derivatives", "KernelSum", "KernelForm", "point_potential", "point_pair",
    "reciprocity_check", "Density", "nwedge_density", "star_nwedge_star_density",
    "star_nwedge_density", "covector_density", "LayerPotentialForm", "layer_potential",
    "d_layer", "delta_layer", "far_sample", "sup_norm_on",
]
