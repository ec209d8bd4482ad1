"""Exterior algebra of covectors on oriented Euclidean n-space.

Basis r-covectors ``e^alpha`` are indexed by strictly increasing multi-indices
``alpha = (a_1 < ... < a_r)`` with entries in ``1..n``.  Internally each
multi-index is an n-bit mask, and the coefficient vector of a degree-r
covector is ordered like ``itertools.combinations(range(n), r)``.

The Hodge star is fixed by ``e^alpha ^ *e^alpha = e^{1...n}``, i.e.
``*e^alpha = sgn(alpha, alpha^c) e^{alpha^c}``.  Every other sign in the
package is derived from this choice.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import DegreeError, DimensionMismatchError

MAX_DIM = 32


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask(entries: Iterable[int]) -> int:
    m = 0
    for a in entries:
        m |= 1 << (a - 1)
    return m


def _entries(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return tuple(out)


def wedge_sign(a: int, b: int) -> int:
    """Sign of ``e^a ^ e^b`` relative to ``e^{a|b}`` for bitmasks a, b.

    Zero when the masks overlap.  Otherwise the parity of the number of
    inversions needed to sort the concatenated index list, computed with
    integer bit counting only.
    """
    if a & b:
        return 0
    inversions = 0
    bb = b
    j = 0
    while bb:
        if bb & 1:
            inversions += _popcount(a >> (j + 1))
        bb >>= 1
        j += 1
    return -1 if inversions & 1 else 1


@lru_cache(maxsize=None)
def basis_masks(n: int, r: int) -> tuple[int, ...]:
    """Bitmasks of the increasing multi-indices of length r, in basis order."""
    if r < 0 or r > n:
        return ()
    return tuple(_mask(c) for c in itertools.combinations(range(1, n + 1), r))


@lru_cache(maxsize=None)
def _mask_position(n: int, r: int) -> dict:
    return {m: i for i, m in enumerate(basis_masks(n, r))}


def dim(n: int, r: int) -> int:
    return math.comb(n, r) if 0 <= r <= n else 0


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"ambient dimension must be in 1..{MAX_DIM}, got {n}")


@dataclass(frozen=True)
class MultiIndex:
    """Strictly increasing multi-index with entries in ``1..n``."""

    entries: tuple[int, ...]
    n: int

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        object.__setattr__(self, "entries", entries)
        _check_n(self.n)
        if len(entries) > self.n:
            raise DegreeError(f"multi-index {entries} longer than n={self.n}")
        if any(a < 1 or a > self.n for a in entries):
            raise ValueError(f"multi-index entries must lie in 1..{self.n}: {entries}")
        if any(b <= a for a, b in zip(entries, entries[1:])):
            raise ValueError(f"multi-index must be strictly increasing: {entries}")

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "MultiIndex":
        return cls(_entries(mask), n)

    @property
    def mask(self) -> int:
        return _mask(self.entries)

    @property
    def degree(self) -> int:
        return len(self.entries)

    def complement(self) -> "MultiIndex":
        return MultiIndex.from_mask(((1 << self.n) - 1) & ~self.mask, self.n)

    def __str__(self):
        return "".join(str(a) for a in self.entries) or "()"


def _parse_index(key, n: int) -> int:
    """Accept '12', (1, 2), MultiIndex or '' for the scalar index; return mask."""
    if isinstance(key, MultiIndex):
        if key.n != n:
            raise DimensionMismatchError(f"index for n={key.n} used with n={n}")
        return key.mask
    if isinstance(key, str):
        key = tuple(int(ch) for ch in key if ch.strip())
    return MultiIndex(tuple(key), n).mask


@dataclass(frozen=True, eq=False)
class Covector:
    """Degree-r element of the exterior algebra of R^n.

    ``coeffs`` is a read-only float array of length ``binom(n, r)`` in
    basis order.  Degrees above n are allowed and carry no coefficients;
    they arise as the formal result of wedges that overflow.
    """

    n: int
    r: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n)
        if self.r < 0:
            raise DegreeError(f"negative degree {self.r}")
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape[0] != dim(self.n, self.r):
            raise DegreeError(
                f"expected {dim(self.n, self.r)} coefficients for degree {self.r} "
                f"in n={self.n}, got {c.shape[0]}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int, r: int) -> "Covector":
        return cls(n, r, np.zeros(dim(n, r)))

    @classmethod
    def scalar(cls, n: int, value: float) -> "Covector":
        return cls(n, 0, [value])

    @classmethod
    def basis(cls, n: int, index) -> "Covector":
        """``Covector.basis(3, (1, 3))`` or ``Covector.basis(3, '13')`` is e^{13}."""
        m = _parse_index(index, n)
        r = _popcount(m)
        c = np.zeros(dim(n, r))
        c[_mask_position(n, r)[m]] = 1.0
        return cls(n, r, c)

    @classmethod
    def from_dict(cls, n: int, r: int, terms: Mapping) -> "Covector":
        c = np.zeros(dim(n, r))
        pos = _mask_position(n, r)
        for key, val in terms.items():
            m = _parse_index(key, n)
            if _popcount(m) != r:
                raise DegreeError(f"index {key!r} has degree {_popcount(m)}, expected {r}")
            c[pos[m]] += float(val)
        return cls(n, r, c)

    @classmethod
    def volume(cls, n: int) -> "Covector":
        return cls(n, n, [1.0])

    def to_dict(self) -> dict[str, float]:
        return {
            str(MultiIndex.from_mask(m, self.n)): float(v)
            for m, v in zip(basis_masks(self.n, self.r), self.coeffs)
            if v != 0.0
        }

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other: "Covector") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(f"n={self.n} vs n={other.n}")
        if self.r != other.r:
            raise DegreeError(f"degree {self.r} vs degree {other.r}")

    def __add__(self, other):
        if not isinstance(other, Covector):
            return NotImplemented
        self._check_same(other)
        return Covector(self.n, self.r, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Covector):
            return NotImplemented
        self._check_same(other)
        return Covector(self.n, self.r, self.coeffs - other.coeffs)

    def __neg__(self):
        return Covector(self.n, self.r, -self.coeffs)

    def __mul__(self, s):
        if isinstance(s, Covector):
            return NotImplemented
        return Covector(self.n, self.r, float(s) * self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return Covector(self.n, self.r, self.coeffs / float(s))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Covector):
            return NotImplemented
        return self.n == other.n and self.r == other.r and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.r, self.coeffs.tobytes()))

    def allclose(self, other: "Covector", atol: float = 1e-12, rtol: float = 0.0) -> bool:
        self._check_same(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))

    def __repr__(self):
        terms = " + ".join(f"{v:g}*e{k}" for k, v in self.to_dict().items()) or "0"
        return f"Covector(n={self.n}, r={self.r}: {terms})"


# structure tensors -----------------------------------------------------------

@lru_cache(maxsize=None)
def wedge_tensor(n: int, r: int, s: int) -> np.ndarray:
    """Array T with ``(u ^ v)_k = sum_ij T[k, i, j] u_i v_j``."""
    out = np.zeros((dim(n, r + s), dim(n, r), dim(n, s)))
    if r + s > n:
        return out
    pos = _mask_position(n, r + s)
    for i, a in enumerate(basis_masks(n, r)):
        for j, b in enumerate(basis_masks(n, s)):
            sg = wedge_sign(a, b)
            if sg:
                out[pos[a | b], i, j] = sg
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def hodge_matrix(n: int, r: int) -> np.ndarray:
    """Matrix of the Hodge star from degree r to degree n - r."""
    full = (1 << n) - 1
    out = np.zeros((dim(n, n - r), dim(n, r)))
    pos = _mask_position(n, n - r)
    for i, a in enumerate(basis_masks(n, r)):
        out[pos[full & ~a], i] = wedge_sign(a, full & ~a)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def left_wedge_matrices(n: int, r: int) -> np.ndarray:
    """Stack ``W[i]`` of matrices for ``xi -> e^{i+1} ^ xi`` on degree r."""
    t = wedge_tensor(n, 1, r)
    out = np.ascontiguousarray(np.transpose(t, (1, 0, 2)))
    out.setflags(write=False)
    return out


# operations ------------------------------------------------------------------

def wedge(u: Covector, v: Covector) -> Covector:
    if u.n != v.n:
        raise DimensionMismatchError(f"wedge of n={u.n} and n={v.n} covectors")
    t = wedge_tensor(u.n, u.r, v.r)
    return Covector(u.n, u.r + v.r, np.einsum("kij,i,j->k", t, u.coeffs, v.coeffs))


def hodge(u: Covector) -> Covector:
    if u.r > u.n:
        raise DegreeError(f"degree {u.r} exceeds n={u.n}")
    return Covector(u.n, u.n - u.r, hodge_matrix(u.n, u.r) @ u.coeffs)


def inner(u: Covector, v: Covector) -> float:
    if u.n != v.n:
        raise DimensionMismatchError(f"n={u.n} vs n={v.n}")
    if u.r != v.r:
        raise DegreeError(f"inner product of degree {u.r} and degree {v.r}")
    return float(np.dot(u.coeffs, v.coeffs))


def norm(u: Covector) -> float:
    return float(np.linalg.norm(u.coeffs))


def covector_from_vector(v) -> Covector:
    """The 1-covector with the same Euclidean components as ``v``."""
    v = np.asarray(v, dtype=float)
    return Covector(v.shape[0], 1, v)


# graded covectors ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MixedCovector:
    """Non-homogeneous element of the exterior algebra, stored by grade."""

    n: int
    parts: Mapping[int, Covector]

    def __post_init__(self):
        parts = {}
        for k, c in dict(self.parts).items():
            if c.n != self.n:
                raise DimensionMismatchError(f"part of degree {k} has n={c.n}, expected {self.n}")
            if c.r != k:
                raise DegreeError(f"part keyed {k} has degree {c.r}")
            if k > self.n:
                continue
            parts[k] = parts[k] + c if k in parts else c
        object.__setattr__(self, "parts", dict(sorted(parts.items())))

    @classmethod
    def of(cls, *covectors: Covector) -> "MixedCovector":
        if not covectors:
            raise ValueError("need at least one covector")
        n = covectors[0].n
        parts: dict[int, Covector] = {}
        for c in covectors:
            if c.n != n:
                raise DimensionMismatchError(f"n={c.n} vs n={n}")
            parts[c.r] = parts[c.r] + c if c.r in parts else c
        return cls(n, parts)

    def grade(self, k: int) -> Covector:
        return self.parts.get(k, Covector.zero(self.n, k))

    def __add__(self, other: "MixedCovector") -> "MixedCovector":
        if other.n != self.n:
            raise DimensionMismatchError(f"n={self.n} vs n={other.n}")
        keys = set(self.parts) | set(other.parts)
        return MixedCovector(self.n, {k: self.grade(k) + other.grade(k) for k in keys})

    def allclose(self, other: "MixedCovector", atol: float = 1e-12) -> bool:
        keys = set(self.parts) | set(other.parts)
        return all(self.grade(k).allclose(other.grade(k), atol=atol) for k in keys)

    def __repr__(self):
        return f"MixedCovector(n={self.n}, {list(self.parts.values())})"


def mixed_wedge(u: MixedCovector, v: MixedCovector) -> MixedCovector:
    if u.n != v.n:
        raise DimensionMismatchError(f"n={u.n} vs n={v.n}")
    out: dict[int, Covector] = {}
    for a in u.parts.values():
        for b in v.parts.values():
            if a.r + b.r > u.n:
                continue
            w = wedge(a, b)
            out[w.r] = out[w.r] + w if w.r in out else w
    return MixedCovector(u.n, out)
