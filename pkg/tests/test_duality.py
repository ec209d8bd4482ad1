import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_duality import duality as du
from harmonic_duality.errors import DegreeError, UnsupportedDimensionError
from harmonic_duality.exterior import Covector
from harmonic_duality.experiments import gauge_perturbation
from harmonic_duality.fields import HolomorphicPair, ZeroForm, harmonic_polynomial_form, random_covector
from harmonic_duality.geometry import circle_cycle
from harmonic_duality.potentials import KernelSum, point_pair

FIXTURE = Path(__file__).parent / "fixtures" / "kappa_oracle.json"
ALL = [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]


def surf(n, radius=1.0, center=None):
    return du.default_surface(n, radius, center)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def exterior_harmonic(n, r, rng, center=None, center2=None):
    c = np.zeros(n) if center is None else center
    c2 = c if center2 is None else center2
    k1 = KernelSum(n, r, [c], [random_covector(n, r, rng).coeffs])
    k2 = KernelSum(n, r, [c2], [random_covector(n, r, rng).coeffs])
    return k1.delta().d() + k2.d().delta()


def test_kappa_frozen_from_oracle():
    ref = json.loads(FIXTURE.read_text())
    assert ref["kappa_theorem1"] == pytest.approx(du.KAPPA_THEOREM1, abs=1e-12)
    assert ref["kappa_theorem2"] == pytest.approx(du.KAPPA_THEOREM2, abs=1e-12)


def test_oracle_reference_configuration():
    # the package reproduces the oracle's own configuration
    ref = json.loads(FIXTURE.read_text())["reference"]
    xi = Covector(3, 1, ref["xi"])
    u = harmonic_polynomial_form(3, 1, np.random.default_rng(0))
    S = du.default_surface(3, ref["radius"])
    val = du.pairing_theorem1(u, point_pair(ref["x0_inside"], xi), S).value
    assert val == pytest.approx(du.expected_point_theorem1(u, ref["x0_inside"], xi), rel=1e-10)


def test_report_structure():
    rng = np.random.default_rng(1)
    u = harmonic_polynomial_form(3, 1, rng)
    rep = du.pairing_theorem1(u, point_pair([0.1, 0, 0], random_covector(3, 1, rng)), surf(3))
    assert rep.value == rep.term1 + rep.term2
    assert rep.order == 48 and rep.surface["kind"] == "sphere"
    d = rep.as_dict()
    assert set(d) >= {"value", "term1", "term2", "surface", "order", "diagnostics"}
    assert d["diagnostics"]["harmonic_residual"] <= 1e-9


@pytest.mark.parametrize("n,r", ALL)
def test_point_measure_theorem1(n, r, rng):
    S = surf(n)
    for _ in range(3):
        u = harmonic_polynomial_form(n, r, rng)
        x0 = rng.uniform(-0.3, 0.3, n)
        xi = random_covector(n, r, rng)
        val = du.pairing_theorem1(u, point_pair(x0, xi), S).value
        ref = du.expected_point_theorem1(u, x0, xi)
        assert abs(val - ref) <= 1e-6 * max(abs(ref), 1.0)


@pytest.mark.parametrize("n,r", ALL)
def test_point_measure_theorem2(n, r, rng):
    S = surf(n)
    for _ in range(3):
        u = exterior_harmonic(n, r, rng, center=0.2 * unit(rng.standard_normal(n)))
        x0 = 2.2 * unit(rng.standard_normal(n))
        xi = random_covector(n, r, rng)
        val = du.pairing_theorem2(point_pair(x0, xi), u, S).value
        ref = du.expected_point_theorem2(u, x0, xi)
        assert abs(val - ref) <= 1e-6 * max(abs(ref), 1e-3)


def test_theorem2_printed_first_sign_is_not_proportional(rng):
    # n=3, r=2: the alternative coefficient (-1)^{nr+r+1} differs from (-1)^{n+r+1}
    n, r = 3, 2
    assert (-1) ** (n * r + r + 1) != du.theorem2_coefficients(n, r)[0]
    ratios = []
    for _ in range(3):
        u = exterior_harmonic(n, r, rng, 0.2 * unit(rng.standard_normal(n)), 0.2 * unit(rng.standard_normal(n)))
        x0 = 2.2 * unit(rng.standard_normal(n))
        xi = random_covector(n, r, rng)
        alt = du.pairing_theorem2(point_pair(x0, xi), u, surf(n), first_coefficient=(-1) ** (n * r + r + 1)).value
        ratios.append(alt / du.expected_point_theorem2(u, x0, xi))
    assert max(ratios) - min(ratios) > 1e-2


@pytest.mark.parametrize("n,r", ALL)
def test_contour_independence(n, r, rng):
    u = harmonic_polynomial_form(n, r, rng)
    w = point_pair(0.2 * unit(rng.standard_normal(n)), random_covector(n, r, rng))
    a = du.pairing_theorem1(u, w, surf(n, 1.2)).value
    b = du.pairing_theorem1(u, w, surf(n, 1.6)).value
    assert abs(a - b) <= 1e-7 * max(abs(a), 1.0)
    ue = exterior_harmonic(n, r, rng)
    w2 = point_pair(2.5 * unit(rng.standard_normal(n)), random_covector(n, r, rng))
    a = du.pairing_theorem2(w2, ue, surf(n, 1.2)).value
    b = du.pairing_theorem2(w2, ue, surf(n, 1.6)).value
    assert abs(a - b) <= 1e-7 * max(abs(a), 1e-3)


@pytest.mark.parametrize("n,r", ALL)
def test_lemma1(n, r, rng):
    u = harmonic_polynomial_form(n, r, rng)
    w = point_pair(3.0 * unit(rng.standard_normal(n)), random_covector(n, r, rng))
    assert du.lemma1_residual(u, w, surf(n), normalize=True) <= 1e-8
    assert du.lemma1_residual(ZeroForm(n, r), w, surf(n)) == 0.0


def test_lemma1_negative_control():
    n, r = 3, 1
    u = harmonic_polynomial_form(n, r, np.random.default_rng(3))
    w = point_pair([0.1, 0.2, 0.0], Covector(3, 1, [1.0, 0.0, 0.0]))
    assert du.lemma1_residual(u, w, surf(n), normalize=True) > 1e-3


@given(st.sampled_from(ALL[:3]), st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=10)
def test_bilinearity(nr, seed, a, b):
    n, r = nr
    rng = np.random.default_rng(seed)
    S = surf(n)
    u, v = harmonic_polynomial_form(n, r, rng), harmonic_polynomial_form(n, r, rng)
    w1 = point_pair(rng.uniform(-0.3, 0.3, n), random_covector(n, r, rng))
    w2 = point_pair(rng.uniform(-0.3, 0.3, n), random_covector(n, r, rng))
    p = lambda uu, ww: du.pairing_theorem1(uu, ww, S, check=False).value
    lhs = p(a * u + b * v, w1)
    rhs = a * p(u, w1) + b * p(v, w1)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(a * p(u, w1)), abs(b * p(v, w1)))
    lhs = p(u, a * w1 + b * w2)
    rhs = a * p(u, w1) + b * p(u, w2)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(a * p(u, w1)), abs(b * p(u, w2)))


@pytest.mark.parametrize("n,r", ALL)
def test_gauge_invariance_theorem2(n, r, rng):
    ue = exterior_harmonic(n, r, rng)
    w = point_pair(2.5 * unit(rng.standard_normal(n)), random_covector(n, r, rng))
    S = surf(n, 1.2)
    base = du.pairing_theorem2(w, ue, S).value
    moved = du.pairing_theorem2(w + gauge_perturbation(n, r, rng), ue, S).value
    assert abs(moved - base) <= 1e-8


def test_continuity_bound(rng):
    S = surf(3)
    w = point_pair([0.1, -0.1, 0.2], random_covector(3, 1, rng))
    C = du.continuity_constant(w, S)
    for _ in range(5):
        u = harmonic_polynomial_form(3, 1, rng)
        sup = float(np.max(np.linalg.norm(u.eval_many(S.nodes), axis=1)))
        assert abs(du.pairing_theorem1(u, w, S, check=False).value) <= C * sup * (1 + 1e-12)


def test_pairing_zero_inputs():
    S = surf(3)
    w = point_pair([0.1, 0, 0], Covector.basis(3, (1,)))
    assert du.pairing_theorem1(ZeroForm(3, 1), w, S).value == 0.0
    assert du.pairing_theorem2(HolomorphicPair.zero(3, 1), ZeroForm(3, 1), S).value == 0.0


def test_pairing_degree_errors():
    with pytest.raises(DegreeError):
        du.pairing_theorem1(ZeroForm(3, 2), point_pair([0.1, 0, 0], Covector.basis(3, (1,))), surf(3))
    with pytest.raises(UnsupportedDimensionError):
        du.default_surface(5)


# periods (n = 3, r = 1) --------------------------------------------------------------

def test_period_closed_form_linking():
    xi = Covector.basis(3, (3,))
    w = point_pair([0.0, 0, 0], xi)
    for R in (0.5, 1.0, 2.0):
        C = circle_cycle([0.0, 0, 0], R, [0, 0, 1], 64)
        assert du.period_star_whi(C, w) == pytest.approx(2 * math.pi / R, rel=1e-10)
    # xi lying in the circle plane gives no period by symmetry
    C = circle_cycle([0.0, 0, 0], 1.0, [1, 0, 0], 64)
    assert abs(du.period_star_whi(C, w)) <= 1e-12


def test_period_decays_with_distance():
    w = point_pair([0.0, 0, 0], Covector.basis(3, (3,)))
    vals = [du.period_star_whi(circle_cycle([0.0, 0, 0], R, [0, 0, 1], 64), w) for R in (10.0, 20.0, 40.0)]
    assert vals[1] / vals[0] == pytest.approx(0.5, rel=1e-10)
    assert vals[2] / vals[1] == pytest.approx(0.5, rel=1e-10)


def test_period_zero_pair():
    C = circle_cycle([3.0, 0, 0], 1.0, [0, 0, 1], 32)
    assert du.period_star_whi(C, HolomorphicPair.zero(3, 1)) == 0.0


@pytest.mark.parametrize("center,axis", [([0.0, 0, 0], [0, 0, 1]), ([0.2, -0.1, 0.1], [1, 1, 0]),
                                         ([0.0, 0.3, 0], [0.3, -1, 2])])
def test_period_equals_pairing_of_curve_potential(center, axis, rng):
    w = point_pair(rng.uniform(-0.2, 0.2, 3), random_covector(3, 1, rng))
    C = circle_cycle(center, 2.5, axis, 256)
    lhs = du.period_star_whi(C, w)
    rhs = du.period_rhs(C, w, surf(3, 1.0))
    assert abs(lhs - rhs) <= 1e-6 * max(abs(lhs), 1.0)


def test_zero_cycle_period(rng):
    w = point_pair([0.1, 0.0, -0.1], random_covector(3, 1, rng))
    pts = [[2.0, 0.5, 0.0], [-1.5, 2.0, 1.0]]
    ch = [1.0, -1.0]
    lhs = du.period_w_lo(pts, ch, w)
    rhs = du.period_lo_rhs(pts, ch, w, surf(3))
    assert abs(lhs - rhs) <= 1e-6 * max(abs(lhs), 1.0)


def test_periods_require_n3_r1():
    w = point_pair([0.0, 0, 0], Covector.basis(3, (1, 2)))
    with pytest.raises(UnsupportedDimensionError):
        du.period_star_whi(circle_cycle([0.0, 0, 0], 1.0, [0, 0, 1], 16), w)
