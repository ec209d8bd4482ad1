"""Experiment configs: schema, field/pair/surface builders, mode runners and suites.

A config is a JSON document with ``schema_version``, a ``seed`` and a list of
``cases``.  Every case names a ``mode``; randomized ingredients draw from a
generator seeded by ``(seed, case index)`` so reports are reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable

import numpy as np

from . import cauchy_green as cg
from . import duality as du
from . import vector3 as v3
from .errors import UnsupportedDimensionError
from .exterior import Covector, dim, hodge, inner, wedge
from .fields import (
    FormField,
    HolomorphicPair,
    Polynomial,
    PolynomialForm,
    SumForm,
    ZeroForm,
    delta_via_star,
    harmonic_polynomial_form,
    random_covector,
    random_harmonic_polynomial,
    random_polynomial_form,
)
from .geometry import circle_cycle, ellipsoid_surface, sphere_surface
from .potentials import KernelSum, point_pair, reciprocity_check

SCHEMA_VERSION = "1.0"
MODES = ("reproduce", "pair1", "pair2", "decompose", "periods", "identities")
QUADRATURE_DIMS = (3, 4)
ALGEBRA_DIMS = (3, 4, 5, 6)

_vec = {"type": "array", "items": {"type": "number"}}
_field_schema = {
    "type": "object",
    "required": ["family"],
    "properties": {
        "family": {"enum": ["harmonic_polynomial", "polynomial_gradient", "constant", "kernel_chain", "zero", "sum"]},
        "degree": {"type": "integer", "minimum": 0, "maximum": 8},
        "terms": {"type": "array"},
        "coeffs": _vec,
        "center": _vec,
        "xi": _vec,
        "ops": {"type": "array", "items": {"enum": ["d", "delta"]}},
    },
    "additionalProperties": False,
}
_pair_schema = {
    "type": "object",
    "required": ["family"],
    "properties": {
        "family": {"enum": ["point", "constant", "zero"]},
        "center": _vec,
        "xi": _vec,
        "lo": _vec,
        "hi": _vec,
    },
    "additionalProperties": False,
}
_surface_schema = {
    "type": "object",
    "required": ["kind", "order"],
    "properties": {
        "kind": {"enum": ["sphere", "ellipsoid"]},
        "center": _vec,
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "axes": _vec,
        "order": {"type": "integer", "minimum": 4, "maximum": 128},
    },
    "additionalProperties": False,
}
_points_schema = {
    "oneOf": [
        {"type": "array", "items": _vec},
        {
            "type": "object",
            "required": ["random"],
            "properties": {
                "random": {"type": "integer", "minimum": 0},
                "center": _vec,
                "min_radius": {"type": "number", "minimum": 0},
                "max_radius": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
    ]
}
_cycle_schema = {
    "type": "object",
    "required": ["radius"],
    "properties": {"center": _vec, "radius": {"type": "number", "exclusiveMinimum": 0},
                   "axis": _vec, "order": {"type": "integer", "minimum": 3}},
    "additionalProperties": False,
}
CASE_SCHEMA = {
    "type": "object",
    "required": ["id", "mode"],
    "properties": {
        "id": {"type": "string"},
        "mode": {"enum": list(MODES)},
        "n": {"type": "integer"},
        "r": {"type": "integer", "minimum": 0},
        "field": _field_schema,
        "pair": _pair_schema,
        "surface": _surface_schema,
        "reference_surface": _surface_schema,
        "orientation": {"enum": ["interior", "exterior"]},
        "points": _points_schema,
        "reference": {"enum": ["point_measure", "zero", "surface"]},
        "cycle": _cycle_schema,
        "expected": {"type": "number"},
        "suite": {"type": "string"},
        "samples": {"type": "integer", "minimum": 1, "maximum": 10000},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "decay_radius": {"type": "number", "exclusiveMinimum": 0},
        "decay_tolerance": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}
CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "cases"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "output": {"type": "string"},
        "cases": {"type": "array", "items": CASE_SCHEMA},
    },
    "additionalProperties": False,
}


class ConfigError(ValueError):
    """Invalid experiment configuration (exit status 2)."""


# results ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    value: Any
    reference: Any
    provenance: str
    abs_error: float
    rel_error: float
    tolerance: float
    kind: str = "rel"  # which error the tolerance applies to

    @property
    def passed(self) -> bool:
        err = self.rel_error if self.kind == "rel" else self.abs_error
        return bool(np.isfinite(err) and err <= self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": _jsonable(self.value), "reference": _jsonable(self.reference),
                "provenance": self.provenance, "abs_error": _jsonable(self.abs_error),
                "rel_error": _jsonable(self.rel_error), "tolerance": self.tolerance,
                "tolerance_kind": self.kind, "pass": self.passed}


@dataclass
class CaseOutcome:
    checks: list[CheckResult] = dc_field(default_factory=list)
    diagnostics: dict = dc_field(default_factory=dict)


def _jsonable(x):
    if isinstance(x, Covector):
        return [float(v) for v in x.coeffs]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def scalar_check(name, value, reference, tol, provenance, kind="rel", scale=None) -> CheckResult:
    """Compare two reals; the relative error divides by ``scale`` (default |reference|)."""
    value, reference = float(value), float(reference)
    err = abs(value - reference)
    s = abs(reference) if scale is None else float(scale)
    rel = err / s if s > 0 else err
    return CheckResult(name, value, reference, provenance, err, rel, tol, kind)


def residual_check(name, residual, tol, provenance="identity (exact value 0)", kind="abs") -> CheckResult:
    return CheckResult(name, float(residual), 0.0, provenance, float(residual), float(residual), tol, kind)


# builders --------------------------------------------------------------------------

def _require(case: dict, key: str):
    if key not in case:
        raise ConfigError(f"case {case.get('id')!r} (mode {case['mode']}) needs '{key}'")
    return case[key]


def _vector(v, n: int, what: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (n,):
        raise ConfigError(f"{what} must have {n} entries, got {list(v)}")
    return a


def _covector(coeffs, n: int, r: int, rng, what: str) -> Covector:
    if coeffs is None:
        return random_covector(n, r, rng)
    if len(coeffs) != dim(n, r):
        raise ConfigError(f"{what} needs {dim(n, r)} coefficients for degree {r} in n={n}")
    return Covector(n, r, coeffs)


def _polynomial(terms, n: int) -> Polynomial:
    out = {}
    for item in terms:
        if not (isinstance(item, list) and len(item) == 2 and len(item[1]) == n):
            raise ConfigError(f"polynomial terms are [coefficient, [e_1..e_{n}]], got {item!r}")
        out[tuple(int(e) for e in item[1])] = float(item[0])
    return Polynomial(n, out)


def build_field(desc: dict, n: int, r: int, rng) -> FormField:
    fam = desc["family"]
    if fam == "zero":
        return ZeroForm(n, r)
    if fam == "harmonic_polynomial":
        return harmonic_polynomial_form(n, r, rng, desc.get("degree", 3))
    if fam == "constant":
        return PolynomialForm.constant(_covector(desc.get("coeffs"), n, r, rng, "constant field"))
    if fam == "polynomial_gradient":
        if r != 1:
            raise ConfigError("polynomial_gradient fields have degree 1")
        return PolynomialForm.scalar(_polynomial(desc.get("terms", []), n)).d()
    if fam == "kernel_chain":
        ops = desc.get("ops", [])
        r0 = r - sum(1 if o == "d" else -1 for o in ops)
        if not 0 <= r0 <= n:
            raise ConfigError(f"kernel_chain ops {ops} cannot produce degree {r}")
        center = _vector(desc.get("center", [0.0] * n), n, "kernel center")
        f: FormField = KernelSum(n, r0, [center], [_covector(desc.get("xi"), n, r0, rng, "kernel xi").coeffs])
        for o in ops:
            f = f.d() if o == "d" else f.delta()
        return f
    if fam == "sum":
        parts = []
        for t in desc.get("terms", []):
            if not isinstance(t, dict) or "field" not in t:
                raise ConfigError("sum terms are {'weight': w, 'field': {...}}")
            parts.append((float(t.get("weight", 1.0)), build_field(t["field"], n, r, rng)))
        return SumForm.of(parts) if parts else ZeroForm(n, r)
    raise ConfigError(f"unknown field family {fam!r}")


def build_pair_with_charge(desc: dict, n: int, r: int, rng):
    """``(pair, charge)`` where charge is ``(x0, xi)`` for point pairs and None otherwise."""
    if not 1 <= r <= n - 1:
        raise ConfigError(f"pairs need 1 <= r <= n-1, got r={r}")
    fam = desc["family"]
    if fam == "zero":
        return HolomorphicPair.zero(n, r), None
    if fam == "point":
        x0 = _vector(desc.get("center", [0.0] * n), n, "pair center")
        xi = _covector(desc.get("xi"), n, r, rng, "pair xi")
        return point_pair(x0, xi), (x0, xi)
    if fam == "constant":
        lo = Covector(n, r - 1, desc["lo"]) if "lo" in desc else Covector.zero(n, r - 1)
        hi = Covector(n, r + 1, desc["hi"]) if "hi" in desc else Covector.zero(n, r + 1)
        return HolomorphicPair(r, PolynomialForm.constant(lo), PolynomialForm.constant(hi)), None
    raise ConfigError(f"unknown pair family {fam!r}")


def build_pair(desc: dict, n: int, r: int, rng) -> HolomorphicPair:
    return build_pair_with_charge(desc, n, r, rng)[0]


def build_surface(desc: dict, n: int):
    center = _vector(desc.get("center", [0.0] * n), n, "surface center")
    if desc["kind"] == "sphere":
        return sphere_surface(center, float(desc.get("radius", 1.0)), int(desc["order"]))
    return ellipsoid_surface(center, _vector(_require(desc, "axes"), n, "ellipsoid axes"), int(desc["order"]))


def build_points(desc, n: int, rng) -> np.ndarray:
    if isinstance(desc, list):
        return np.array([_vector(p, n, "point") for p in desc]).reshape(-1, n)
    c = _vector(desc.get("center", [0.0] * n), n, "points center")
    lo, hi = float(desc.get("min_radius", 0.0)), float(desc.get("max_radius", 0.5))
    k = int(desc["random"])
    d = rng.standard_normal((k, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    rad = lo + (hi - lo) * rng.random(k)
    return c + d * rad[:, None]


# mode runners ------------------------------------------------------------------------

def _dims(case) -> tuple[int, int]:
    n = int(_require(case, "n"))
    r = int(case.get("r", 1))
    return n, r


def run_reproduce(case, rng) -> CaseOutcome:
    n, r = _dims(case)
    surface = build_surface(_require(case, "surface"), n)
    orientation = case.get("orientation", "interior")
    pts = build_points(_require(case, "points"), n, rng)
    tol = float(case.get("tolerance", 1e-6))
    out = CaseOutcome()
    if "pair" in case:
        w = build_pair(case["pair"], n, r, rng)
        hi_f, lo_f = cg.pair_cauchy_green_fields(w, surface, orientation)
        for name, f, exact in (("w_hi", hi_f, w.w_hi), ("w_lo", lo_f, w.w_lo)):
            got, ref = f.eval_many(pts), exact.eval_many(pts)
            out.checks.append(_array_check(name, got, ref, tol, "direct evaluation of the pair"))
        return out
    u = build_field(_require(case, "field"), n, r, rng)
    got = cg.reproduce_many(u, surface, pts, orientation)
    out.checks.append(_array_check("u", got, u.eval_many(pts), tol, "direct evaluation of the field"))
    return out


def _array_check(name, got, ref, tol, provenance) -> CheckResult:
    got, ref = np.asarray(got), np.asarray(ref)
    err = float(np.max(np.linalg.norm(got - ref, axis=1))) if got.size else 0.0
    scale = float(np.max(np.linalg.norm(ref, axis=1))) if ref.size else 0.0
    rel = err / scale if scale > 0 else err
    return CheckResult(name, {"max_norm": float(np.max(np.linalg.norm(got, axis=1))) if got.size else 0.0,
                              "points": int(len(got))},
                       {"max_norm": scale}, provenance, err, rel, tol)


def _pair_mode(case, rng, which: int) -> CaseOutcome:
    n, r = _dims(case)
    surface = build_surface(_require(case, "surface"), n)
    u = build_field(_require(case, "field"), n, r, rng)
    w, charge = build_pair_with_charge(_require(case, "pair"), n, r, rng)
    tol = float(case.get("tolerance", 1e-6))
    pair = du.pairing_theorem1 if which == 1 else (lambda a, b, s: du.pairing_theorem2(b, a, s))
    rep = pair(u, w, surface)
    ref_kind = case.get("reference", "point_measure")
    out = CaseOutcome(diagnostics={"term1": rep.term1, "term2": rep.term2, **rep.diagnostics})
    if ref_kind == "zero":
        out.checks.append(scalar_check("pairing", rep.value, 0.0, tol, "vanishing (both inputs regular)", kind="abs"))
    elif ref_kind == "surface":
        other = pair(u, w, build_surface(_require(case, "reference_surface"), n))
        out.checks.append(scalar_check("pairing", rep.value, other.value, tol, "same pairing on reference_surface"))
    else:
        if charge is None:
            raise ConfigError("reference 'point_measure' needs a point pair")
        x0, xi = charge
        expect = du.expected_point_theorem1 if which == 1 else du.expected_point_theorem2
        kappa = du.KAPPA_THEOREM1 if which == 1 else du.KAPPA_THEOREM2
        out.checks.append(scalar_check("pairing", rep.value, expect(u, x0, xi), tol,
                                       f"point-measure identity (kappa={kappa})"))
    return out


def run_pair1(case, rng) -> CaseOutcome:
    return _pair_mode(case, rng, 1)


def run_pair2(case, rng) -> CaseOutcome:
    return _pair_mode(case, rng, 2)


def run_decompose(case, rng) -> CaseOutcome:
    n, r = _dims(case)
    surface = build_surface(_require(case, "surface"), n)
    u = build_field(_require(case, "field"), n, r, rng)
    pts = build_points(_require(case, "points"), n, rng)
    tol = float(case.get("tolerance", 1e-5))
    dec = cg.decompose_exterior(u, surface, check=False)
    res = dec.residuals(pts)
    out = CaseOutcome(diagnostics={"sup_u": res["sup_u"]})
    rel = res["relative"]
    out.checks.append(CheckResult("u = d u1 + delta u2", res["reconstruction"], 0.0,
                                  "direct evaluation of the field", res["reconstruction"], rel["reconstruction"], tol))
    out.checks.append(CheckResult("delta u1", res["delta_u1"], 0.0, "identity (exact value 0)",
                                  res["delta_u1"], rel["delta_u1"], tol))
    out.checks.append(CheckResult("d u2", res["d_u2"], 0.0, "identity (exact value 0)",
                                  res["d_u2"], rel["d_u2"], tol))
    R = float(case.get("decay_radius", 100.0))
    dtol = float(case.get("decay_tolerance", 1e-3))
    dec_info = dec.decay(R)
    s = dec_info["sup_u_surface"] or 1.0
    for k in ("u1", "u2"):
        out.checks.append(CheckResult(f"decay of {k} at radius {R:g}", dec_info[k], 0.0,
                                      "relative to sup |u| on the surface", dec_info[k], dec_info[k] / s, dtol))
    return out


def run_periods(case, rng) -> CaseOutcome:
    n, r = _dims(case)
    if (n, r) != (3, 1):
        raise ConfigError("periods are implemented for n=3, r=1")
    w = build_pair(_require(case, "pair"), n, r, rng)
    cd = _require(case, "cycle")
    cyc = circle_cycle(_vector(cd.get("center", [0, 0, 0]), 3, "cycle center"), float(cd["radius"]),
                       _vector(cd.get("axis", [0, 0, 1]), 3, "cycle axis"), int(cd.get("order", 64)))
    tol = float(case.get("tolerance", 1e-6))
    lhs = du.period_star_whi(cyc, w)
    out = CaseOutcome()
    if "surface" in case:
        rhs = du.period_rhs(cyc, w, build_surface(case["surface"], n))
        out.checks.append(scalar_check("period = pairing of curve potential", lhs, rhs, tol,
                                       "first pairing of delta U^cycle", scale=max(abs(rhs), 1.0)))
    if "expected" in case:
        out.checks.append(scalar_check("period", lhs, case["expected"], tol, "closed form (config)", kind="abs"))
    return out


def run_identities(case, rng) -> CaseOutcome:
    name = _require(case, "suite")
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; see list-suites")
    n = case.get("n")
    suite = SUITES[name]
    if n is not None and n not in suite.dims:
        raise UnsupportedDimensionError(f"suite {name} supports n in {suite.dims}, got n={n}")
    dims = (n,) if n is not None else suite.default_dims
    out = CaseOutcome()
    for nn in dims:
        out.checks.extend(suite.fn(nn, rng, int(case.get("samples", suite.samples)), case.get("tolerance")))
    return out


RUNNERS: dict[str, Callable] = {
    "reproduce": run_reproduce,
    "pair1": run_pair1,
    "pair2": run_pair2,
    "decompose": run_decompose,
    "periods": run_periods,
    "identities": run_identities,
}


def validate_case_semantics(case: dict) -> None:
    """Checks beyond the JSON schema (dimension support, degree ranges)."""
    n = case.get("n")
    if case["mode"] == "identities":
        if n is not None and n not in ALGEBRA_DIMS:
            raise UnsupportedDimensionError(f"n={n} is not supported (identities need n in {ALGEBRA_DIMS})")
        return
    if n is None:
        raise ConfigError(f"case {case['id']!r} needs 'n'")
    if n not in QUADRATURE_DIMS:
        raise UnsupportedDimensionError(f"n={n} is not supported (surface integrals need n in {QUADRATURE_DIMS})")
    r = case.get("r", 1)
    if not 0 <= r <= n:
        raise ConfigError(f"degree r={r} outside 0..{n}")


# identity suites -----------------------------------------------------------------------

@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    fn: Callable
    dims: tuple
    default_dims: tuple
    samples: int


def _tol(t, default):
    return float(t) if t is not None else default


def suite_algebra(n, rng, samples, tol):
    tol = _tol(tol, 1e-13)
    vol = Covector.volume(n)
    hh = ws = ip = assoc = 0.0
    for r in range(n + 1):
        for k in range(dim(n, r)):
            e = Covector(n, r, np.eye(dim(n, r))[k])
            hh = max(hh, float(np.max(np.abs((hodge(hodge(e)) - (-1) ** (r * (n - r)) * e).coeffs))))
    for _ in range(samples):
        r = int(rng.integers(0, n + 1))
        u, v = random_covector(n, r, rng), random_covector(n, r, rng)
        ip = max(ip, float(np.max(np.abs((wedge(u, hodge(v)) - inner(u, v) * vol).coeffs))))
        a, b, c = (random_covector(n, int(rng.integers(0, 3)), rng) for _ in range(3))
        if a.r + b.r + c.r <= n:
            assoc = max(assoc, float(np.max(np.abs(((a ^ b) ^ c).coeffs - (a ^ (b ^ c)).coeffs), initial=0.0)))
        s = int(rng.integers(0, n + 1 - r))
        x = random_covector(n, s, rng)
        lhs, rhs = wedge(u, x), (-1) ** (r * s) * wedge(x, u)
        ws = max(ws, float(np.max(np.abs(lhs.coeffs - rhs.coeffs), initial=0.0)))
    return [residual_check(f"n={n} hodge∘hodge = (-1)^(r(n-r))", hh, tol),
            residual_check(f"n={n} u∧*v = <u,v> vol", ip, tol),
            residual_check(f"n={n} wedge associativity", assoc, tol),
            residual_check(f"n={n} graded commutativity", ws, tol)]


def suite_operators(n, rng, samples, tol):
    tol = _tol(tol, 1e-12)
    dd = ddel = lap = star = 0.0
    for _ in range(samples):
        r = int(rng.integers(1, n))
        f = random_polynomial_form(n, r, rng)
        x = rng.uniform(-1, 1, n)
        dd = max(dd, float(np.max(np.abs(f.d().d_eval(x).coeffs), initial=0.0)))
        if r >= 2:
            ddel = max(ddel, float(np.max(np.abs(f.delta().delta_eval(x).coeffs), initial=0.0)))
        comp = -(f.delta().d_eval(x) + f.d().delta_eval(x))
        lap = max(lap, float(np.max(np.abs((f.laplacian_eval(x) - comp).coeffs))))
        star = max(star, float(np.max(np.abs((delta_via_star(f, x) - f.delta_eval(x)).coeffs))))
    return [residual_check(f"n={n} d∘d = 0", dd, tol), residual_check(f"n={n} δ∘δ = 0", ddel, tol),
            residual_check(f"n={n} Δ = -(dδ+δd)", lap, tol),
            residual_check(f"n={n} δ = (-1)^(nr+n+1) *d*", star, tol)]


def suite_reciprocity(n, rng, samples, tol):
    tol = _tol(tol, 1e-12)
    worst = 0.0
    for _ in range(samples):
        r = int(rng.integers(1, n))
        a, b = reciprocity_check((rng.standard_normal(n), random_covector(n, r, rng)),
                                 (rng.standard_normal(n) + 3.0, random_covector(n, n - r, rng)))
        worst = max(worst, abs(a - (-1) ** (n * r + r) * b) / max(abs(a), 1e-300))
    return [residual_check(f"n={n} T1[U^T2] = (-1)^(nr+r) T2[U^T1]", worst, tol, kind="rel")]


def _ext_harmonic(n, r, rng, center=None):
    c = np.zeros(n) if center is None else center
    k1 = KernelSum(n, r, [c], [random_covector(n, r, rng).coeffs])
    k2 = KernelSum(n, r, [c], [random_covector(n, r, rng).coeffs])
    return SumForm.of([(1.0, k1.delta().d()), (1.0, k2.d().delta())])


def _surfaces(n):
    order = du.DEFAULT_ORDER[n] if n == 3 else 20
    return sphere_surface(np.zeros(n), 1.2, order), sphere_surface(np.zeros(n), 1.6, order)


def suite_lemma1(n, rng, samples, tol):
    tol = _tol(tol, 1e-8)
    S, _ = _surfaces(n)
    worst = 0.0
    for _ in range(samples):
        r = int(rng.integers(1, n))
        u = harmonic_polynomial_form(n, r, rng)
        x0 = rng.standard_normal(n)
        x0 *= 3.0 / np.linalg.norm(x0)
        w = point_pair(x0, random_covector(n, r, rng))
        worst = max(worst, du.lemma1_residual(u, w, S, normalize=True))
    return [residual_check(f"n={n} regular-inside vanishing (normalized)", worst, tol)]


def suite_contour(n, rng, samples, tol):
    tol = _tol(tol, 1e-7)
    S1, S2 = _surfaces(n)
    out = []
    for k in range(samples):
        r = int(rng.integers(1, n))
        u = harmonic_polynomial_form(n, r, rng)
        w = point_pair(rng.uniform(-0.4, 0.4, n), random_covector(n, r, rng))
        a, b = du.pairing_theorem1(u, w, S1, check=False).value, du.pairing_theorem1(u, w, S2, check=False).value
        out.append(scalar_check(f"n={n} r={r} first pairing radius 1.2 vs 1.6 #{k}", a, b, tol, "pairing on radius 1.6"))
        ue = _ext_harmonic(n, r, rng)
        wr = point_pair(rng.uniform(2.2, 2.8, n) * rng.choice([-1, 1], n), random_covector(n, r, rng))
        a, b = du.pairing_theorem2(wr, ue, S1, check=False).value, du.pairing_theorem2(wr, ue, S2, check=False).value
        out.append(scalar_check(f"n={n} r={r} second pairing radius 1.2 vs 1.6 #{k}", a, b, tol, "pairing on radius 1.6"))
    return out


def suite_point_measure(n, rng, samples, tol):
    tol = _tol(tol, 1e-6)
    S1, _ = _surfaces(n)
    out = []
    for k in range(samples):
        r = int(rng.integers(1, n))
        u = harmonic_polynomial_form(n, r, rng)
        x0, xi = rng.uniform(-0.4, 0.4, n), random_covector(n, r, rng)
        v = du.pairing_theorem1(u, point_pair(x0, xi), S1, check=False).value
        out.append(scalar_check(f"n={n} r={r} first pairing, point measure #{k}", v,
                                du.expected_point_theorem1(u, x0, xi), tol, "kappa <u(x0), xi>"))
        ue = _ext_harmonic(n, r, rng, rng.uniform(-0.2, 0.2, n))
        y0 = rng.standard_normal(n)
        y0 *= rng.uniform(2.0, 3.0) / np.linalg.norm(y0)
        v = du.pairing_theorem2(point_pair(y0, xi), ue, S1, check=False).value
        out.append(scalar_check(f"n={n} r={r} second pairing, point measure #{k}", v,
                                du.expected_point_theorem2(ue, y0, xi), tol, "kappa' (-1)^(n+r+1) <u(x0), xi>"))
    return out


def gauge_perturbation(n: int, r: int, rng) -> HolomorphicPair:
    """Polynomial pair ``(delta d g', d delta g)`` with g, g' componentwise harmonic.

    ``h1 = delta g`` satisfies ``delta d h1 = 0`` and ``h2 = d g'`` satisfies
    ``d delta h2 = 0``; the pair is ``(delta h2, d h1)``.
    """
    g = PolynomialForm.times(random_harmonic_polynomial(n, 3, rng), random_covector(n, r + 1, rng))
    hi = g.delta().d()
    if r >= 2:
        g2 = PolynomialForm.times(random_harmonic_polynomial(n, 3, rng), random_covector(n, r - 1, rng))
        lo: FormField = g2.d().delta()
    else:
        lo = ZeroForm(n, r - 1)
    return HolomorphicPair(r, lo, hi)


def suite_gauge(n, rng, samples, tol):
    tol = _tol(tol, 1e-8)
    S1, _ = _surfaces(n)
    out = []
    for k in range(samples):
        r = int(rng.integers(1, n))
        ue = _ext_harmonic(n, r, rng)
        w = point_pair(np.full(n, 2.5 / math.sqrt(n)), random_covector(n, r, rng))
        base = du.pairing_theorem2(w, ue, S1, check=False).value
        moved = du.pairing_theorem2(w + gauge_perturbation(n, r, rng), ue, S1, check=False).value
        out.append(scalar_check(f"n={n} r={r} second pairing gauge #{k}", moved, base, tol,
                                "unperturbed pairing", kind="abs"))
    return out


def suite_decomposition(n, rng, samples, tol):
    tol = _tol(tol, 1e-5)
    S = sphere_surface(np.zeros(n), 1.0, 32 if n == 3 else 16)
    out = []
    for k in range(samples):
        r = int(rng.integers(1, n))
        u = _ext_harmonic(n, r, rng, rng.uniform(-0.2, 0.2, n))
        dec = cg.decompose_exterior(u, S, check=False)
        pts = build_points({"random": 10, "min_radius": 1.5, "max_radius": 3.0}, n, rng)
        rel = dec.residuals(pts)["relative"]
        out.append(residual_check(f"n={n} r={r} u = du1 + δu2 #{k}", rel["reconstruction"], tol, kind="rel"))
        out.append(residual_check(f"n={n} r={r} δu1, du2 #{k}", max(rel["delta_u1"], rel["d_u2"]), tol, kind="rel"))
    return out


def suite_vectorial(n, rng, samples, tol):
    tol = _tol(tol, 1e-10)
    S1, _ = _surfaces(3)
    out = []
    for k in range(samples):
        u = harmonic_polynomial_form(3, 1, rng)
        w = point_pair(rng.uniform(-0.4, 0.4, 3), random_covector(3, 1, rng))
        hv = v3.HolomorphicVectorPair.from_pair(w)
        a = v3.pairing_vector_h(v3.form_to_vector(u), hv.f, hv.v, S1)
        b = du.pairing_theorem1(u, w, S1, check=False).value
        out.append(scalar_check(f"vector vs form, first pairing #{k}", a, b, tol, "form-language pairing",
                                kind="abs", scale=1.0))
    return out


def suite_periods(n, rng, samples, tol):
    tol = _tol(tol, 1e-6)
    S = sphere_surface(np.zeros(3), 1.2, 48)
    out = []
    for k in range(samples):
        w = point_pair(rng.uniform(-0.4, 0.4, 3), random_covector(3, 1, rng))
        cyc = circle_cycle(rng.uniform(-0.3, 0.3, 3), rng.uniform(2.2, 2.8), rng.standard_normal(3), 96)
        lhs, rhs = du.period_star_whi(cyc, w), du.period_rhs(cyc, w, S)
        out.append(scalar_check(f"period vs pairing #{k}", lhs, rhs, tol, "first pairing of δU^cycle",
                                scale=max(abs(rhs), 1.0)))
    return out


SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("algebra", "wedge/Hodge identities on basis and random covectors", suite_algebra, ALGEBRA_DIMS, (3, 4, 5), 50),
    Suite("operators", "d∘d = 0, δ∘δ = 0, Δ = -(dδ+δd), δ via the composed star", suite_operators, ALGEBRA_DIMS, (3, 4), 20),
    Suite("reciprocity", "reciprocity of point-measure potentials", suite_reciprocity, ALGEBRA_DIMS, (3, 4), 20),
    Suite("lemma1", "pairing vanishes when both inputs are regular inside", suite_lemma1, QUADRATURE_DIMS, (3, 4), 3),
    Suite("contour", "pairings agree on two radii", suite_contour, QUADRATURE_DIMS, (3, 4), 2),
    Suite("point_measure", "pairings against point pairs equal kappa <u(x0), xi>", suite_point_measure, QUADRATURE_DIMS, (3, 4), 2),
    Suite("gauge", "second pairing invariant under dh1 + δh2", suite_gauge, QUADRATURE_DIMS, (3, 4), 2),
    Suite("decomposition", "exterior decomposition u = du1 + δu2 and its constraints", suite_decomposition, QUADRATURE_DIMS, (3, 4), 2),
    Suite("vectorial", "vector-language and form-language pairings agree (n=3)", suite_vectorial, (3,), (3,), 3),
    Suite("periods", "period of *w_hi equals the pairing of the curve potential (n=3)", suite_periods, (3,), (3,), 2),
]}


__all__ = [
    "SCHEMA_VERSION", "MODES", "CONFIG_SCHEMA", "ConfigError", "CheckResult", "CaseOutcome",
    "build_field", "build_pair", "build_pair_with_charge", "build_surface", "build_points", "RUNNERS", "SUITES", "Suite",
    "validate_case_semantics", "gauge_perturbation", "scalar_check", "residual_check",
]
