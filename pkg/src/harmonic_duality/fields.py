"""Differential-form fields with analytic d, codifferential and Laplacian.

A field of degree r on (an open subset of) R^n exposes the partial
derivatives of its coefficient vector through ``coeff_derivs(x, order)``,
an array of shape ``(n,) * order + (binom(n, r),)``.  The exterior
derivative and the codifferential are constant-coefficient first-order
operators, so they act on those arrays through fixed symbol matrices:

    d u     = sum_i  e^i ^ (d_i u)
    delta u = sum_i  S_i (d_i u),   S_i xi = s(n, r) * (e^i ^ *xi)

with ``s(n, r) = (-1)^(n r + n + 1)``, the sign that makes delta the formal
adjoint of d.  With that sign ``-(d delta + delta d)`` is the componentwise
Laplacian sum_i d_i^2 on every degree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DegreeError, DimensionMismatchError, DomainError
from .exterior import (
    Covector,
    _mask_position,
    _parse_index,
    _popcount,
    dim,
    hodge_matrix,
    left_wedge_matrices,
)

DEFAULT_TOL = 1e-9
LAYER_TOL = 1e-6


def codifferential_sign(n: int, r: int) -> int:
    """Sign s with delta = s * (star d star) on r-forms."""
    return -1 if (n * r + n + 1) % 2 else 1


@lru_cache(maxsize=None)
def d_symbol(n: int, r: int) -> np.ndarray:
    """Shape ``(n, dim(r+1), dim(r))``: d u = sum_i d_symbol[i] @ d_i u."""
    return left_wedge_matrices(n, r)


@lru_cache(maxsize=None)
def delta_symbol(n: int, r: int) -> np.ndarray:
    """Shape ``(n, dim(r-1), dim(r))`` symbol of the codifferential on r-forms."""
    if r < 1:
        raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
    s = codifferential_sign(n, r)
    star_in = hodge_matrix(n, r)
    star_out = hodge_matrix(n, n - r + 1)
    w = left_wedge_matrices(n, n - r)
    out = s * np.einsum("ab,ibc,cd->iad", star_out, w, star_in)
    out.setflags(write=False)
    return out


def _as_point(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != n:
        raise DimensionMismatchError(f"point of dimension {x.shape[0]} for an n={n} field")
    return x


def _contract(op: np.ndarray, base: np.ndarray, m: int, k: int, n: int) -> np.ndarray:
    """Apply an order-m operator tensor to base derivatives of order m + k.

    ``op`` has shape (n,)*m + (a, b); ``base`` has shape (n,)*(m+k) + (b,).
    Returns shape (n,)*k + (a,).
    """
    a, b = op.shape[-2:]
    opf = op.reshape(n**m, a, b)
    basef = base.reshape((n**m, n**k, b))
    out = np.einsum("Iab,IKb->Ka", opf, basef)
    return out.reshape((n,) * k + (a,))


def _contract_many(op: np.ndarray, base: np.ndarray, m: int, k: int, n: int) -> np.ndarray:
    a, b = op.shape[-2:]
    N = base.shape[0]
    opf = op.reshape(n**m, a, b)
    basef = base.reshape((N, n**m, n**k, b))
    out = np.einsum("Iab,NIKb->NKa", opf, basef)
    return out.reshape((N,) + (n,) * k + (a,))


class FormField:
    """Base class of differential-form fields.

    Subclasses implement ``coeff_derivs`` and, when the domain is not all
    of R^n, ``contains``.  ``d()`` and ``delta()`` return new fields; the
    default wraps the field in a :class:`DerivedForm`.
    """

    n: int
    r: int

    # -- to implement (at least one of the two coeff_derivs variants) --------
    def coeff_derivs(self, x: np.ndarray, order: int) -> np.ndarray:
        return self.coeff_derivs_many(np.asarray(x, dtype=float)[None, :], order)[0]

    def coeff_derivs_many(self, X: np.ndarray, order: int) -> np.ndarray:
        """Shape ``(N,) + (n,)*order + (dim,)`` for points X of shape (N, n)."""
        return np.stack([self.coeff_derivs(x, order) for x in np.asarray(X, dtype=float)])

    def contains(self, x) -> bool:
        return True

    def contains_many(self, X) -> np.ndarray:
        """Boolean mask of domain membership for points X of shape (N, n)."""
        if type(self).contains is FormField.contains:
            return np.ones(len(np.asarray(X).reshape(-1, self.n)), dtype=bool)
        return np.array([self.contains(x) for x in np.asarray(X, dtype=float)], dtype=bool)

    def check_domain(self, x) -> None:
        if not self.contains(x):
            raise DomainError(f"point {np.asarray(x).tolist()} lies outside the domain of {type(self).__name__}")

    # -- evaluation ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return dim(self.n, self.r)

    def _checked(self, x) -> np.ndarray:
        x = _as_point(x, self.n)
        self.check_domain(x)
        return x

    def _checked_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.n)
        bad = np.flatnonzero(~self.contains_many(X))
        if bad.size:
            self.check_domain(X[bad[0]])
        return X

    def eval_many(self, X) -> np.ndarray:
        """Coefficient arrays at many points, shape (N, dim)."""
        return self.coeff_derivs_many(self._checked_many(X), 0)

    def d_eval_many(self, X) -> np.ndarray:
        g = self.coeff_derivs_many(self._checked_many(X), 1)
        return np.einsum("iab,Nib->Na", d_symbol(self.n, self.r), g)

    def delta_eval_many(self, X) -> np.ndarray:
        if self.r < 1:
            raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
        g = self.coeff_derivs_many(self._checked_many(X), 1)
        return np.einsum("iab,Nib->Na", delta_symbol(self.n, self.r), g)

    def eval(self, x) -> Covector:
        x = self._checked(x)
        return Covector(self.n, self.r, self.coeff_derivs(x, 0))

    __call__ = eval

    def d_eval(self, x) -> Covector:
        x = self._checked(x)
        g = self.coeff_derivs(x, 1)
        return Covector(self.n, self.r + 1, np.einsum("iab,ib->a", d_symbol(self.n, self.r), g))

    def delta_eval(self, x) -> Covector:
        if self.r < 1:
            raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
        x = self._checked(x)
        g = self.coeff_derivs(x, 1)
        return Covector(self.n, self.r - 1, np.einsum("iab,ib->a", delta_symbol(self.n, self.r), g))

    def laplacian_eval(self, x) -> Covector:
        """``-(d delta + delta d) u`` at x, from the coefficient Hessian."""
        x = self._checked(x)
        h = self.coeff_derivs(x, 2)
        n, r = self.n, self.r
        op = laplacian_symbol(n, r)
        return Covector(n, r, np.einsum("ijab,ijb->a", op, h))

    # -- derived fields -----------------------------------------------------
    def d(self) -> "FormField":
        return DerivedForm(self, d_symbol(self.n, self.r), self.r + 1)

    def delta(self) -> "FormField":
        return DerivedForm(self, delta_symbol(self.n, self.r), self.r - 1)

    def star(self) -> "FormField":
        return DerivedForm(self, hodge_matrix(self.n, self.r), self.n - self.r)

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FormField):
            return NotImplemented
        return SumForm.of([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        if not isinstance(other, FormField):
            return NotImplemented
        return SumForm.of([(1.0, self), (-1.0, other)])

    def __mul__(self, s):
        if isinstance(s, FormField):
            return NotImplemented
        return SumForm.of([(float(s), self)])

    __rmul__ = __mul__

    def __neg__(self):
        return SumForm.of([(-1.0, self)])


@lru_cache(maxsize=None)
def laplacian_symbol(n: int, r: int) -> np.ndarray:
    """Shape ``(n, n, dim(r), dim(r))`` so that Lap u = sum_ij L[i,j] d_i d_j u."""
    m = dim(n, r)
    out = np.zeros((n, n, m, m))
    if r >= 1:
        # d(delta u): delta acts first with index i, d second with index j
        out -= np.einsum("jab,ibc->ijac", d_symbol(n, r - 1), delta_symbol(n, r))
    if r + 1 <= n:
        out -= np.einsum("jab,ibc->ijac", delta_symbol(n, r + 1), d_symbol(n, r))
    out.setflags(write=False)
    return out


class DerivedForm(FormField):
    """``A(d) base``: a constant-coefficient operator applied to a field.

    ``op`` has shape ``(n,)*m + (dim_out, dim_base)``; the field's
    coefficients are ``sum_I op[I] @ d_I base``.
    """

    def __init__(self, base: FormField, op: np.ndarray, r: int):
        self.base = base
        self.n = base.n
        self.r = r
        self.op = np.asarray(op, dtype=float)
        self.order = self.op.ndim - 2
        if self.op.shape[-1] != base.dim or self.op.shape[-2] != dim(self.n, r):
            raise DegreeError("operator tensor does not match field degrees")

    def contains(self, x) -> bool:
        return self.base.contains(x)

    def contains_many(self, X) -> np.ndarray:
        return self.base.contains_many(X)

    def check_domain(self, x) -> None:
        self.base.check_domain(x)

    def coeff_derivs(self, x, order):
        b = self.base.coeff_derivs(x, self.order + order)
        return _contract(self.op, b, self.order, order, self.n)

    def coeff_derivs_many(self, X, order):
        b = self.base.coeff_derivs_many(X, self.order + order)
        return _contract_many(self.op, b, self.order, order, self.n)

    def _extend(self, sym: np.ndarray, r: int) -> "DerivedForm":
        # new[I, i] = sym[i] @ op[I]
        op = np.einsum("iab,...bc->...iac", sym, self.op)
        return DerivedForm(self.base, op, r)

    def d(self):
        return self._extend(d_symbol(self.n, self.r), self.r + 1)

    def delta(self):
        if self.r < 1:
            raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
        return self._extend(delta_symbol(self.n, self.r), self.r - 1)


class SumForm(FormField):
    """Finite linear combination of fields of equal degree."""

    def __init__(self, terms: Sequence[tuple[float, FormField]]):
        terms = [(float(c), f) for c, f in terms]
        if not terms:
            raise ValueError("empty linear combination")
        n, r = terms[0][1].n, terms[0][1].r
        for _, f in terms:
            if f.n != n:
                raise DimensionMismatchError(f"n={f.n} vs n={n}")
            if f.r != r:
                raise DegreeError(f"cannot add fields of degree {f.r} and {r}")
        self.terms = terms
        self.n = n
        self.r = r

    @classmethod
    def of(cls, terms):
        flat = []
        for c, f in terms:
            if isinstance(f, SumForm):
                flat.extend((c * c2, f2) for c2, f2 in f.terms)
            else:
                flat.append((c, f))
        return cls(flat)

    def contains(self, x) -> bool:
        return all(f.contains(x) for _, f in self.terms)

    def contains_many(self, X) -> np.ndarray:
        out = np.ones(len(np.asarray(X).reshape(-1, self.n)), dtype=bool)
        for _, f in self.terms:
            out &= f.contains_many(X)
        return out

    def check_domain(self, x) -> None:
        for _, f in self.terms:
            f.check_domain(x)

    def coeff_derivs(self, x, order):
        out = None
        for c, f in self.terms:
            v = c * f.coeff_derivs(x, order)
            out = v if out is None else out + v
        return out

    def coeff_derivs_many(self, X, order):
        out = None
        for c, f in self.terms:
            v = c * f.coeff_derivs_many(X, order)
            out = v if out is None else out + v
        return out

    def d(self):
        return SumForm([(c, f.d()) for c, f in self.terms])

    def delta(self):
        if self.r < 1:
            raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
        return SumForm([(c, f.delta()) for c, f in self.terms])


class ZeroForm(FormField):
    """The identically zero field of a given degree."""

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r

    def coeff_derivs(self, x, order):
        return np.zeros((self.n,) * order + (dim(self.n, self.r),))

    def coeff_derivs_many(self, X, order):
        return np.zeros((len(X),) + (self.n,) * order + (dim(self.n, self.r),))

    def d(self):
        return ZeroForm(self.n, self.r + 1)

    def delta(self):
        if self.r < 1:
            raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
        return ZeroForm(self.n, self.r - 1)


class CallableForm(FormField):
    """Field given by a coefficient callable and its derivative callables.

    Used for quick ad-hoc fields in scripts; ``derivs[k](x)`` must return the
    order-k coefficient derivative array.
    """

    def __init__(self, n: int, r: int, derivs: Sequence[Callable], guard: Callable | None = None):
        self.n, self.r = n, r
        self._derivs = list(derivs)
        self._guard = guard

    def contains(self, x) -> bool:
        return True if self._guard is None else bool(self._guard(x))

    def coeff_derivs(self, x, order):
        if order >= len(self._derivs):
            raise NotImplementedError(f"derivatives of order {order} not supplied")
        return np.asarray(self._derivs[order](np.asarray(x, dtype=float)), dtype=float)


# polynomials ----------------------------------------------------------------

def _monomials(X: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Values of the monomials ``x^e`` (rows of exps) at points X, shape (N, T)."""
    N, n = X.shape
    top = int(exps.max()) if exps.size else 0
    pw = np.ones((top + 1, N, n))
    for k in range(1, top + 1):
        pw[k] = pw[k - 1] * X
    out = np.ones((N, exps.shape[0]))
    for i in range(n):
        out *= pw[exps[:, i], :, i].T
    return out


class Polynomial:
    """Real multivariate polynomial as ``{exponent tuple: coefficient}``."""

    __slots__ = ("n", "terms", "_cache")

    def __init__(self, n: int, terms: Mapping[tuple, float] | None = None):
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n:
                raise DimensionMismatchError(f"exponent {e} for n={n}")
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}
        self._cache = None

    @classmethod
    def constant(cls, n: int, c: float) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def coordinate(cls, n: int, i: int) -> "Polynomial":
        """The coordinate function x_i (1-based)."""
        e = [0] * n
        e[i - 1] = 1
        return cls(n, {tuple(e): 1.0})

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.n, other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Polynomial(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.n, {e: c * other for e, c in self.terms.items()})
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Polynomial(self.n, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.n, 1.0)
        for _ in range(k):
            out = out * self
        return out

    @property
    def real(self) -> "Polynomial":
        return Polynomial(self.n, {e: complex(c).real for e, c in self.terms.items()})

    @property
    def imag(self) -> "Polynomial":
        return Polynomial(self.n, {e: complex(c).imag for e, c in self.terms.items()})

    def diff(self, i: int) -> "Polynomial":
        """Partial derivative in the 0-based coordinate i."""
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return Polynomial(self.n, t)

    def laplacian(self) -> "Polynomial":
        out = Polynomial(self.n)
        for i in range(self.n):
            out = out + self.diff(i).diff(i)
        return out

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x) -> float:
        if not self.terms:
            x = np.asarray(x)
            return np.zeros(x.shape[0]) if x.ndim == 2 else 0.0
        if self._cache is None:
            exps = np.array(list(self.terms.keys()), dtype=int).reshape(-1, self.n)
            coef = np.array(list(self.terms.values()))
            self._cache = (exps, coef)
        exps, coef = self._cache
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            return _monomials(x, exps) @ coef
        return float(np.sum(coef * np.prod(x[None, :] ** exps, axis=1)))

    def __repr__(self):
        return f"Polynomial(n={self.n}, {self.terms})"


class PolynomialForm(FormField):
    """Form whose coefficients are polynomials; derivatives are exact."""

    def __init__(self, n: int, r: int, coeffs: Sequence[Polynomial]):
        coeffs = list(coeffs)
        if len(coeffs) != dim(n, r):
            raise DegreeError(f"need {dim(n, r)} coefficient polynomials, got {len(coeffs)}")
        self.n, self.r = n, r
        self.coeffs = coeffs
        self._diff_cache: dict = {}

    @classmethod
    def from_terms(cls, n: int, r: int, terms: Mapping) -> "PolynomialForm":
        """``terms`` maps multi-index keys ('12', (1, 2), ...) to polynomials or numbers."""
        pos = _mask_position(n, r)
        coeffs = [Polynomial(n) for _ in range(dim(n, r))]
        for key, p in terms.items():
            m = _parse_index(key, n)
            if _popcount(m) != r:
                raise DegreeError(f"index {key!r} does not have degree {r}")
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(n, p)
            coeffs[pos[m]] = coeffs[pos[m]] + p
        return cls(n, r, coeffs)

    @classmethod
    def scalar(cls, p: Polynomial) -> "PolynomialForm":
        return cls(p.n, 0, [p])

    @classmethod
    def constant(cls, xi: Covector) -> "PolynomialForm":
        return cls(xi.n, xi.r, [Polynomial.constant(xi.n, c) for c in xi.coeffs])

    @classmethod
    def times(cls, p: Polynomial, xi: Covector) -> "PolynomialForm":
        """The form p(x) * xi for a constant covector xi."""
        return cls(xi.n, xi.r, [p * c for c in xi.coeffs])

    def _partial(self, idx: tuple) -> list[Polynomial]:
        if idx not in self._diff_cache:
            if not idx:
                self._diff_cache[idx] = self.coeffs
            else:
                prev = self._partial(idx[:-1])
                self._diff_cache[idx] = [p.diff(idx[-1]) for p in prev]
        return self._diff_cache[idx]

    def coeff_derivs(self, x, order):
        x = np.asarray(x, dtype=float)
        out = np.empty((self.n,) * order + (self.dim,))
        for idx in itertools.product(range(self.n), repeat=order):
            out[idx] = [p(x) for p in self._partial(tuple(sorted(idx)))]
        return out

    def _stacked(self, idx: tuple):
        """Shared exponent table and (T, dim) coefficient matrix of a partial derivative."""
        key = ("stack",) + idx
        if key not in self._diff_cache:
            polys = self._partial(idx)
            exps = sorted({e for p in polys for e in p.terms})
            pos = {e: t for t, e in enumerate(exps)}
            C = np.zeros((len(exps), len(polys)))
            for b, p in enumerate(polys):
                for e, c in p.terms.items():
                    C[pos[e], b] = c
            E = np.array(exps, dtype=int).reshape(-1, self.n)
            self._diff_cache[key] = (E, C)
        return self._diff_cache[key]

    def coeff_derivs_many(self, X, order):
        X = np.asarray(X, dtype=float)
        out = np.empty((X.shape[0],) + (self.n,) * order + (self.dim,))
        done: dict = {}
        for idx in itertools.product(range(self.n), repeat=order):
            key = tuple(sorted(idx))
            if key not in done:
                E, C = self._stacked(key)
                done[key] = _monomials(X, E) @ C if len(E) else np.zeros((X.shape[0], self.dim))
            out[(slice(None),) + idx] = done[key]
        return out

    def _apply(self, sym: np.ndarray, r_out: int) -> "PolynomialForm":
        out = []
        for a in range(dim(self.n, r_out)):
            acc = Polynomial(self.n)
            for i in range(self.n):
                for b in range(self.dim):
                    s = sym[i, a, b]
                    if s:
                        acc = acc + self.coeffs[b].diff(i) * s
            out.append(acc)
        return PolynomialForm(self.n, r_out, out)

    def d(self):
        return self._apply(d_symbol(self.n, self.r), self.r + 1)

    def delta(self):
        return self._apply(delta_symbol(self.n, self.r), self.r - 1)

    def star(self):
        m = hodge_matrix(self.n, self.r)
        out = []
        for a in range(m.shape[0]):
            acc = Polynomial(self.n)
            for b in range(self.dim):
                if m[a, b]:
                    acc = acc + self.coeffs[b] * m[a, b]
            out.append(acc)
        return PolynomialForm(self.n, self.n - self.r, out)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)


def random_harmonic_polynomial(n: int, degree: int, rng: np.random.Generator, terms: int = 2) -> Polynomial:
    """Random harmonic polynomial, homogeneous of the given degree.

    Sums of Re/Im of ``(a . x)^degree`` with ``a = p + i q``, ``p ⟂ q``,
    ``|p| = |q|``, so that ``a . a = 0``.
    """
    out = Polynomial(n)
    for _ in range(terms):
        p, q = rng.standard_normal((2, n))
        q -= p * (q @ p) / (p @ p)
        q *= np.linalg.norm(p) / np.linalg.norm(q)
        lin = Polynomial(n, {tuple(int(k == i) for k in range(n)): complex(p[i], q[i]) for i in range(n)})
        pw = lin**degree
        out = out + (pw.real if rng.random() < 0.5 else pw.imag) * float(rng.standard_normal())
    return out


def random_covector(n: int, r: int, rng: np.random.Generator) -> Covector:
    return Covector(n, r, rng.standard_normal(dim(n, r)))


def random_polynomial_form(n: int, r: int, rng: np.random.Generator, degree: int = 3, terms: int = 4) -> PolynomialForm:
    """Random (generally non-harmonic) polynomial form with small integer exponents.

    Coefficients are multiples of 1/64, so symbolic sums and derivatives are
    exact in floating point and ``d(d u)``, ``delta(delta u)`` cancel to zero.
    """
    coeffs = []
    for _ in range(dim(n, r)):
        t = {}
        for _ in range(terms):
            e = [0] * n
            for _ in range(int(rng.integers(0, degree + 1))):
                e[int(rng.integers(0, n))] += 1
            t[tuple(e)] = round(float(rng.standard_normal()) * 64) / 64
        coeffs.append(Polynomial(n, t))
    return PolynomialForm(n, r, coeffs)


def harmonic_polynomial_form(n: int, r: int, rng: np.random.Generator, degree: int = 3) -> PolynomialForm:
    """Random harmonic r-form (``du = 0`` and ``delta u = 0``).

    For 1 <= r <= n-1 this is ``d delta (h xi) + delta d (h' xi')`` with h, h'
    harmonic polynomials; each piece is closed and coclosed because
    ``(d delta + delta d)(h xi) = 0``.  In degrees 0 and n the only harmonic
    forms are constants (multiples of 1 and of the volume form).
    """
    if r in (0, n):
        return PolynomialForm.constant(random_covector(n, r, rng))
    h = random_harmonic_polynomial(n, degree + 2, rng)
    a = PolynomialForm.times(h, random_covector(n, r, rng)).delta().d()
    h2 = random_harmonic_polynomial(n, degree + 2, rng)
    b = PolynomialForm.times(h2, random_covector(n, r, rng)).d().delta()
    return PolynomialForm(n, r, [p + q for p, q in zip(a.coeffs, b.coeffs)])


# holomorphic pairs and predicates ---------------------------------------------

@dataclass(frozen=True)
class HolomorphicPair:
    """Non-homogeneous field ``w_lo + w_hi`` of degrees ``r - 1`` and ``r + 1``."""

    r: int
    w_lo: FormField
    w_hi: FormField

    def __post_init__(self):
        n = self.w_lo.n
        if self.w_hi.n != n:
            raise DimensionMismatchError(f"n={n} vs n={self.w_hi.n}")
        if not 1 <= self.r <= n - 1:
            raise DegreeError(f"central degree r={self.r} must lie in 1..{n - 1}")
        if self.w_lo.r != self.r - 1 or self.w_hi.r != self.r + 1:
            raise DegreeError(
                f"pair for r={self.r} needs degrees ({self.r - 1}, {self.r + 1}), "
                f"got ({self.w_lo.r}, {self.w_hi.r})"
            )

    @property
    def n(self) -> int:
        return self.w_lo.n

    @classmethod
    def zero(cls, n: int, r: int) -> "HolomorphicPair":
        return cls(r, ZeroForm(n, r - 1), ZeroForm(n, r + 1))

    def contains(self, x) -> bool:
        return self.w_lo.contains(x) and self.w_hi.contains(x)

    def __add__(self, other: "HolomorphicPair") -> "HolomorphicPair":
        if other.r != self.r:
            raise DegreeError(f"pairs for r={self.r} and r={other.r}")
        return HolomorphicPair(self.r, self.w_lo + other.w_lo, self.w_hi + other.w_hi)

    def __mul__(self, s):
        return HolomorphicPair(self.r, float(s) * self.w_lo, float(s) * self.w_hi)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Check:
    """Outcome of a residual check: ``ok`` iff ``residual <= tol``."""

    ok: bool
    residual: float
    tol: float
    residuals: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _samples(samples) -> list:
    pts = [np.asarray(p, dtype=float) for p in samples]
    if not pts:
        raise ValueError("empty sample list")
    return pts


def d(field: FormField, x) -> Covector:
    return field.d_eval(x)


def delta(field: FormField, x) -> Covector:
    return field.delta_eval(x)


def laplacian(field: FormField, x) -> Covector:
    return field.laplacian_eval(x)


def delta_via_star(field: FormField, x) -> Covector:
    """``s(n, r) * star(d(star u))`` evaluated through the public operations."""
    if field.r < 1:
        raise DegreeError("codifferential of a 0-form is undefined (degree underflow)")
    from .exterior import hodge

    return codifferential_sign(field.n, field.r) * hodge(field.star().d_eval(x))


def is_harmonic(field: FormField, samples, tol: float = DEFAULT_TOL) -> Check:
    pts = _samples(samples)
    rd = max(np.linalg.norm(field.d_eval(p).coeffs) for p in pts) if field.r < field.n else 0.0
    rdel = max(np.linalg.norm(field.delta_eval(p).coeffs) for p in pts) if field.r > 0 else 0.0
    res = float(max(rd, rdel))
    return Check(res <= tol, res, tol, {"d": float(rd), "delta": float(rdel)})


def is_holomorphic_pair(pair: HolomorphicPair, samples, tol: float = DEFAULT_TOL) -> Check:
    pts = _samples(samples)
    n = pair.n
    mixed = d_hi = del_lo = 0.0
    for p in pts:
        lhs = pair.w_lo.d_eval(p) + pair.w_hi.delta_eval(p)
        mixed = max(mixed, np.linalg.norm(lhs.coeffs))
        if pair.r + 1 < n:
            d_hi = max(d_hi, np.linalg.norm(pair.w_hi.d_eval(p).coeffs))
        if pair.r - 1 > 0:
            del_lo = max(del_lo, np.linalg.norm(pair.w_lo.delta_eval(p).coeffs))
    res = float(max(mixed, d_hi, del_lo))
    return Check(res <= tol, res, tol, {"d_lo+delta_hi": float(mixed), "d_hi": float(d_hi), "delta_lo": float(del_lo)})
