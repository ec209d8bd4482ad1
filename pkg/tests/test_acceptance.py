"""Acceptance criteria 1-10.

Each criterion records its sub-checks through ``record_criterion``; the
terminal summary prints one PASS/FAIL line per criterion.  Criteria whose
stated form cannot hold are still checked as stated and fail.
"""
import itertools
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from harmonic_duality import duality as du
from harmonic_duality.cauchy_green import decompose_exterior, reproduce_many, pair_cauchy_green_fields
from harmonic_duality.exterior import Covector, dim, hodge, inner, wedge
from harmonic_duality.experiments import gauge_perturbation
from harmonic_duality.fields import (
    Polynomial,
    PolynomialForm,
    harmonic_polynomial_form,
    random_covector,
    random_polynomial_form,
)
from harmonic_duality.geometry import sphere_surface
from harmonic_duality.potentials import KernelSum, point_pair, reciprocity_check
from harmonic_duality.vector3 import (
    HolomorphicVectorPair,
    VectorField3,
    helmholtz_decompose,
    pairing_vector_h,
    pairing_vector_p,
)

from conftest import perm_parity, record_criterion
from oracles import fd_d, fd_delta

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = Path(__file__).parent / "fixtures" / "kappa_oracle.json"


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def ball_points(rng, n, count, rmin, rmax, center=None):
    X = rng.standard_normal((count, n))
    X *= (rng.uniform(rmin, rmax, count) / np.linalg.norm(X, axis=1))[:, None]
    return X if center is None else X + center


def kernel_harmonic(n, r, rng, c1, c2):
    """delta d (k xi) + d delta (k xi'): harmonic off the centers, vanishing at infinity."""
    parts = []
    if r >= 1:
        parts.append(KernelSum(n, r, [c1], [random_covector(n, r, rng).coeffs]).delta().d())
    if r < n:
        parts.append(KernelSum(n, r, [c2], [random_covector(n, r, rng).coeffs]).d().delta())
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def rel_sup(got, ref):
    return float(np.max(np.linalg.norm(got - ref, axis=1)) / max(np.max(np.linalg.norm(ref, axis=1)), 1e-300))


def convergence_ok(errs, floor=1e-10):
    return all(b <= max(a / 4.0, floor) for a, b in zip(errs, errs[1:]))


# 1 -----------------------------------------------------------------------------------

def test_criterion_1_algebra():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (3, 4, 5):
        idx = {r: list(itertools.combinations(range(1, n + 1), r)) for r in range(n + 1)}
        for r, s in itertools.product(range(n + 1), repeat=2):
            for a in idx[r]:
                ea = Covector.basis(n, a)
                for b in idx[s]:
                    w = wedge(ea, Covector.basis(n, b))
                    if r + s <= n and not set(a) & set(b):
                        expect = perm_parity(a + b) * Covector.basis(n, tuple(sorted(a + b)))
                        worst = max(worst, float(np.max(np.abs(w.coeffs - expect.coeffs))))
                    else:
                        worst = max(worst, float(np.max(np.abs(w.coeffs), initial=0.0)))
        for r in range(n + 1):
            vol = Covector.volume(n)
            E = np.eye(dim(n, r))
            for i in range(dim(n, r)):
                u = Covector(n, r, E[i])
                worst = max(worst, float(np.max(np.abs(hodge(hodge(u)).coeffs - (-1) ** (r * (n - r)) * u.coeffs))))
                for j in range(dim(n, r)):
                    v = Covector(n, r, E[j])
                    worst = max(worst, float(np.max(np.abs((wedge(u, hodge(v)) - inner(u, v) * vol).coeffs))))
    dt = time.perf_counter() - t0
    ok = record_criterion(1, "algebra", worst <= 1e-13 and dt < 5, f"max residual {worst:.1e}, {dt:.2f}s")
    assert ok


# 2 -----------------------------------------------------------------------------------

def _operator_forms(count=200, seed=2):
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = (3, 4)[k % 2]
        r = int(rng.integers(0, n + 1))
        yield n, r, random_polynomial_form(n, r, rng), rng.uniform(-1, 1, n)


def test_criterion_2_operators():
    t0 = time.perf_counter()
    dd = ddel = star = lap = fd = 0.0
    for n, r, u, x in _operator_forms():
        if r + 2 <= n:
            dd = max(dd, float(np.max(np.abs(u.d().d_eval(x).coeffs))))
        if r >= 2:
            ddel = max(ddel, float(np.max(np.abs(u.delta().delta_eval(x).coeffs))))
        if r >= 1:
            direct = u.delta_eval(x).coeffs
            composed = du_star_path(u, x, (-1) ** (n * r + n + 1))
            star = max(star, float(np.max(np.abs(direct - composed))))
        comp = np.zeros(dim(n, r))
        if r >= 1:
            comp = comp + u.delta().d_eval(x).coeffs
        if r < n:
            comp = comp + u.d().delta_eval(x).coeffs
        L = u.laplacian_eval(x).coeffs
        lap = max(lap, float(np.max(np.abs(L + comp))) / max(1.0, float(np.max(np.abs(L)))))
        a = u.d_eval(x).coeffs
        fd = max(fd, float(np.linalg.norm(a - fd_d(u, x)) / max(1.0, np.linalg.norm(a))))
        if r >= 1:
            a = u.delta_eval(x).coeffs
            fd = max(fd, float(np.linalg.norm(a - fd_delta(u, x)) / max(1.0, np.linalg.norm(a))))
    dt = time.perf_counter() - t0
    res = max(dd, ddel, star, lap)
    ok = record_criterion(
        2, "d^2, delta^2, delta = (-1)^(nr+n+1) *d*, Laplacian, finite differences",
        res <= 1e-12 and fd <= 1e-6 and dt < 30,
        f"identity residual {res:.1e}, fd rel {fd:.1e}, {dt:.1f}s")
    assert ok


def du_star_path(u, x, sign):
    """sign * *(d(*u)) evaluated through the public star and d."""
    return sign * hodge(u.star().d_eval(x)).coeffs


def test_criterion_2_literal_codifferential_sign():
    # delta = (-1)^{nr+r+1} *d* taken literally; with the pinned star it differs
    # from the operator used everywhere else by (-1)^{n+r}
    worst = 0.0
    bad = set()
    for n, r, u, x in _operator_forms():
        if r < 1:
            continue
        lit = du_star_path(u, x, (-1) ** (n * r + r + 1))
        diff = float(np.max(np.abs(u.delta_eval(x).coeffs - lit)))
        if diff > 1e-12:
            bad.add((n, r))
        worst = max(worst, diff)
    ok = record_criterion(2, "literal sign (-1)^(nr+r+1)", worst <= 1e-12,
                          f"residual {worst:.2g} for (n, r) in {sorted(bad)}")
    assert ok


# 3 -----------------------------------------------------------------------------------

def interior_fields(n, rng):
    x = [Polynomial.coordinate(n, i) for i in range(1, n + 1)]
    if n == 3:
        grad = PolynomialForm.scalar(x[0] * x[0] - x[1] * x[1]).d()
        return [grad, PolynomialForm.constant(Covector.basis(3, (1,))),
                harmonic_polynomial_form(3, 1, rng, 4), harmonic_polynomial_form(3, 2, rng),
                harmonic_polynomial_form(3, 2, rng, 2)]
    grad = PolynomialForm.scalar(x[0] * x[1] * x[2] * x[3]).d()
    return [grad, PolynomialForm.constant(Covector.basis(4, (1, 3))), harmonic_polynomial_form(4, 1, rng),
            harmonic_polynomial_form(4, 2, rng), harmonic_polynomial_form(4, 3, rng)]


@pytest.mark.slow
def test_criterion_3_interior_reproduction():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst48, conv = 0.0, True
    table = []
    for n in (3, 4):
        for u in interior_fields(n, rng):
            X = ball_points(rng, n, 20, 0.0, 0.5)
            ref = u.eval_many(X)
            errs = [rel_sup(reproduce_many(u, sphere_surface(np.zeros(n), 1.0, o), X), ref) for o in (12, 24, 48)]
            table.append(errs)
            worst48 = max(worst48, errs[-1])
            conv &= convergence_ok(errs)
    dt = time.perf_counter() - t0
    ok = record_criterion(3, "interior reproduction", worst48 <= 1e-6 and conv and dt < 120,
                          f"max rel error {worst48:.1e} at order 48, 4x convergence {conv}, {dt:.1f}s")
    assert ok, table


# 4 -----------------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_4_exterior_and_pairs():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst48, conv = 0.0, True
    for n in (3, 4):
        for r in range(1, n):
            # exterior harmonic form generated from point potentials
            u = kernel_harmonic(n, r, rng, 0.2 * unit(rng.standard_normal(n)), 0.2 * unit(rng.standard_normal(n)))
            X = ball_points(rng, n, 20, 2.0, 3.0)
            ref = u.eval_many(X)
            errs = [rel_sup(reproduce_many(u, sphere_surface(np.zeros(n), 1.0, o), X, "exterior"), ref)
                    for o in (12, 24, 48)]
            worst48 = max(worst48, errs[-1])
            conv &= convergence_ok(errs)
            # pairs: source outside (interior formula) and inside (exterior formula)
            for orient, x0, pts in (("interior", 3.0 * unit(rng.standard_normal(n)), ball_points(rng, n, 20, 0.0, 0.5)),
                                    ("exterior", 0.2 * unit(rng.standard_normal(n)), ball_points(rng, n, 20, 2.0, 3.0))):
                w = point_pair(x0, random_covector(n, r, rng))
                ref_hi, ref_lo = w.w_hi.eval_many(pts), w.w_lo.eval_many(pts)
                errs = []
                for o in (12, 24, 48):
                    hi, lo = pair_cauchy_green_fields(w, sphere_surface(np.zeros(n), 1.0, o), orient)
                    errs.append(max(rel_sup(hi.eval_many(pts), ref_hi), rel_sup(lo.eval_many(pts), ref_lo)))
                worst48 = max(worst48, errs[-1])
                conv &= convergence_ok(errs)
    dt = time.perf_counter() - t0
    ok = record_criterion(4, "exterior and pair reproduction", worst48 <= 1e-6 and conv and dt < 120,
                          f"max rel error {worst48:.1e} at order 48, 4x convergence {conv}, {dt:.1f}s")
    assert ok


# 5 -----------------------------------------------------------------------------------

def test_criterion_5_lemma1():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = 0.0
    for k in range(10):
        n = (3, 4)[k % 2]
        r = int(rng.integers(1, n))
        u = harmonic_polynomial_form(n, r, rng)
        w = point_pair(rng.uniform(2.5, 4.0) * unit(rng.standard_normal(n)), random_covector(n, r, rng))
        worst = max(worst, du.lemma1_residual(u, w, du.default_surface(n), normalize=True))
    # negative control: the pair is singular inside the ball
    u = PolynomialForm.constant(Covector.basis(3, (1,)))
    neg = du.lemma1_residual(u, point_pair([0.1, 0.2, 0.0], Covector.basis(3, (1,))), du.default_surface(3),
                             normalize=True)
    dt = time.perf_counter() - t0
    ok = record_criterion(5, "pairing of regular fields vanishes", worst <= 1e-8 and neg > 1e-3 and dt < 60,
                          f"max normalized {worst:.1e}, negative control {neg:.2f}, {dt:.1f}s")
    assert ok


# 6 -----------------------------------------------------------------------------------

def test_criterion_6_pairings():
    t0 = time.perf_counter()
    ref = json.loads(FIXTURE.read_text())
    frozen = (abs(ref["kappa_theorem1"] - du.KAPPA_THEOREM1) <= 1e-12
              and abs(ref["kappa_theorem2"] - du.KAPPA_THEOREM2) <= 1e-12)
    rng = np.random.default_rng(6)
    contour = point = gauge = 0.0
    configs = [(n, r) for n in (3, 4) for r in range(1, n)]
    for k in range(20):
        n, r = configs[k % len(configs)]
        S1, S2 = du.default_surface(n, 1.2), du.default_surface(n, 1.6)
        # first pairing: u harmonic near the ball, pair singular at an interior point
        u = harmonic_polynomial_form(n, r, rng)
        x0, xi = rng.uniform(-0.3, 0.3, n), random_covector(n, r, rng)
        w = point_pair(x0, xi)
        a = du.pairing_theorem1(u, w, S1, check=False).value
        b = du.pairing_theorem1(u, w, S2, check=False).value
        e = du.expected_point_theorem1(u, x0, xi)
        contour = max(contour, abs(a - b) / max(abs(a), 1e-12))
        point = max(point, abs(a - e) / max(abs(e), 1e-12))
        # second pairing: u harmonic outside the ball, pair singular at an exterior point
        ue = kernel_harmonic(n, r, rng, 0.2 * unit(rng.standard_normal(n)), 0.2 * unit(rng.standard_normal(n)))
        y0, eta = 2.5 * unit(rng.standard_normal(n)), random_covector(n, r, rng)
        w2 = point_pair(y0, eta)
        a = du.pairing_theorem2(w2, ue, S1, check=False).value
        b = du.pairing_theorem2(w2, ue, S2, check=False).value
        e = du.expected_point_theorem2(ue, y0, eta)
        contour = max(contour, abs(a - b) / max(abs(a), 1e-12))
        point = max(point, abs(a - e) / max(abs(e), 1e-12))
        moved = du.pairing_theorem2(w2 + gauge_perturbation(n, r, rng), ue, S1, check=False).value
        gauge = max(gauge, abs(moved - a))
    dt = time.perf_counter() - t0
    ok = record_criterion(
        6, "pairings", frozen and contour <= 1e-7 and point <= 1e-6 and gauge <= 1e-8 and dt < 180,
        f"kappa frozen {frozen}, contour {contour:.1e}, point measure {point:.1e}, gauge {gauge:.1e}, {dt:.1f}s")
    assert ok


# 7 -----------------------------------------------------------------------------------

def decomposition_fields():
    rng = np.random.default_rng(7)
    monopole = KernelSum(3, 0, [np.zeros(3)], [[1.0]]).d()
    dipole = (KernelSum(3, 0, [[0.1, 0, 0]], [[1.0]]).d() + (-1.0) * KernelSum(3, 0, [[-0.1, 0, 0]], [[1.0]]).d())
    return [("n3 monopole grad(1/rho)", monopole, 48), ("n3 dipole", dipole, 48),
            ("n3 r=2", kernel_harmonic(3, 2, rng, np.zeros(3), np.zeros(3)), 48),
            ("n4 r=2", kernel_harmonic(4, 2, rng, np.zeros(4), np.zeros(4)), 20)]


def test_criterion_7_decomposition():
    t0 = time.perf_counter()
    rng = np.random.default_rng(70)
    recon = constraint = 0.0
    decay_fail = []
    for name, u, order in decomposition_fields():
        n = u.n
        S = sphere_surface(np.zeros(n), 1.0, order)
        D = decompose_exterior(u, S)
        res = D.residuals(ball_points(rng, n, 50, 1.5, 4.0))["relative"]
        recon = max(recon, res["reconstruction"])
        constraint = max(constraint, res["delta_u1"], res["d_u2"])
        dec = D.decay(100.0)
        ratio = max(dec["u1"], dec["u2"]) / dec["sup_u_surface"]
        if ratio > 1e-3:
            decay_fail.append(f"{name}: {ratio:.1e}")
    # Helmholtz form of the same statement (n = 3, vector language)
    for name, u, order in decomposition_fields()[:3]:
        if u.r != 1:
            continue
        H = helmholtz_decompose(VectorField3(u), sphere_surface(np.zeros(3), 1.0, order))
        rel = H.residuals(ball_points(rng, 3, 50, 1.5, 4.0))["relative"]
        recon = max(recon, rel["reconstruction"])
        constraint = max(constraint, rel["div_v"], rel["laplacian_f"], rel["laplacian_v"])
    dt = time.perf_counter() - t0
    core = recon <= 1e-5 and constraint <= 1e-5 and dt < 120
    record_criterion(7, "u = du1 + delta u2 and constraints", core,
                     f"reconstruction {recon:.1e}, constraints {constraint:.1e}, {dt:.1f}s")
    record_criterion(7, "decay at range 100 <= 1e-3", not decay_fail, "; ".join(decay_fail) or "all fields")
    assert core and not decay_fail, decay_fail


# 8 -----------------------------------------------------------------------------------

def test_criterion_8_vectorial():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    S = du.default_surface(3)
    eq = gauge = 0.0
    x = [Polynomial.coordinate(3, i) for i in (1, 2, 3)]
    h = PolynomialForm.scalar(x[0] * x[0] * x[1] * 3.0 - x[1] ** 3 + x[2] * x[0])
    for k in range(10):
        u = harmonic_polynomial_form(3, 1, rng)
        w = point_pair(rng.uniform(-0.3, 0.3, 3), random_covector(3, 1, rng))
        p = HolomorphicVectorPair.from_pair(w)
        a = pairing_vector_h(VectorField3(u), p.f, p.v, S)
        b = du.pairing_theorem1(u, w, S, check=False).value
        eq = max(eq, abs(a - b) / max(1.0, abs(b)))
        ue = KernelSum(3, 0, [0.2 * unit(rng.standard_normal(3))], [[rng.standard_normal()]]).d()
        w2 = point_pair(2.5 * unit(rng.standard_normal(3)), random_covector(3, 1, rng))
        p2 = HolomorphicVectorPair.from_pair(w2)
        a = pairing_vector_p(p2.f, p2.v, VectorField3(ue), S)
        b = du.pairing_theorem2(w2, ue, S, check=False).value
        eq = max(eq, abs(a - b) / max(1.0, abs(b)))
        moved = pairing_vector_p(p2.f, p2.v + VectorField3(h.d()), VectorField3(ue), S)
        gauge = max(gauge, abs(moved - a))
    dt = time.perf_counter() - t0
    ok = record_criterion(8, "vectorial equivalence", eq <= 1e-10 and gauge <= 1e-8 and dt < 60,
                          f"equivalence {eq:.1e}, N' gauge {gauge:.1e}, {dt:.1f}s")
    assert ok


# 9 -----------------------------------------------------------------------------------

def test_criterion_9_reciprocity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    worst = 0.0
    for k in range(20):
        n = (3, 4)[k % 2]
        r = int(rng.integers(1, n))
        a, b = reciprocity_check((rng.standard_normal(n), random_covector(n, r, rng)),
                                 (rng.standard_normal(n) + 2.0, random_covector(n, n - r, rng)))
        worst = max(worst, abs(a - (-1) ** (n * r + r) * b) / max(abs(a), 1e-300))
    dt = time.perf_counter() - t0
    ok = record_criterion(9, "reciprocity", worst <= 1e-12 and dt < 5, f"max rel {worst:.1e}, {dt:.2f}s")
    assert ok


# 10 ----------------------------------------------------------------------------------

def _cli(*args):
    return subprocess.run([sys.executable, "-m", "harmonic_duality.cli", *args], capture_output=True, cwd=ROOT)


def test_criterion_10_cli(tmp_path):
    full = str(ROOT / "configs" / "full_suite.json")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ra = _cli("run", full, "--seed", "2024", "--out", str(a))
    rb = _cli("run", full, "--seed", "2024", "--out", str(b))
    identical = a.read_bytes() == b.read_bytes()
    codes = {"full suite": (ra.returncode, 0), "full suite again": (rb.returncode, 0)}
    n2 = tmp_path / "n2.json"
    n2.write_text(json.dumps({"schema_version": "1.0", "cases": [
        {"id": "x", "mode": "identities", "suite": "algebra", "n": 2}]}))
    codes["n=2"] = (_cli("run", str(n2)).returncode, 2)
    fail = tmp_path / "fail.json"
    fail.write_text(json.dumps({"schema_version": "1.0", "cases": [
        {"id": "x", "mode": "reproduce", "n": 3, "r": 1, "field": {"family": "harmonic_polynomial"},
         "surface": {"kind": "sphere", "radius": 1.0, "order": 6}, "points": [[0.5, 0.0, 0.0]],
         "tolerance": 1e-14}]}))
    codes["failing case"] = (_cli("run", str(fail), "--out", str(tmp_path / "f.json")).returncode, 1)
    err = tmp_path / "err.json"
    err.write_text(json.dumps({"schema_version": "1.0", "cases": [
        {"id": "x", "mode": "reproduce", "n": 3, "r": 1, "field": {"family": "constant", "coeffs": [1, 0, 0]},
         "surface": {"kind": "sphere", "radius": 1.0, "order": 8}, "points": [[0.99, 0.0, 0.0]]}]}))
    codes["runtime error"] = (_cli("run", str(err), "--out", str(tmp_path / "e.json")).returncode, 3)
    codes["unknown flag"] = (_cli("list-suites", "--nope").returncode, 2)
    wrong = {k: v for k, v in codes.items() if v[0] != v[1]}
    ok = record_criterion(10, "CLI determinism and exit codes", identical and not wrong,
                          f"byte-identical {identical}, exit codes {'ok' if not wrong else wrong}")
    assert ok
