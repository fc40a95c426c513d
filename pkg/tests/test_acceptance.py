"""Acceptance suite: one marker per criterion, summarized by conftest."""
import math
import time
from fractions import Fraction as Fr

import numpy as np
import pytest

from qrtmap import core, exact, grouplaw, periods, rotation, sensitivity
from qrtmap.cubic import CubicCurve, proj_distance
from qrtmap.errors import OutOfRangeError
from qrtmap.transform import gamma_residual, h_double_tilde, weierstrass_data

from helpers import random_curves

acc = pytest.mark.acceptance


@acc(1, "invariance of G along orbits")
def test_ac01_invariance():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    for d in (0.5, 1.05, 6.0, 20.0):
        M = tuple(rng.uniform(0.1, 10.0, 2))
        orb = core.orbit(d, M, 10_000, tol=1.0)
        assert orb.max_drift / orb.K <= 1e-10
    assert time.perf_counter() - t0 < 1.0


@acc(2, "equilibrium and trace consistency")
def test_ac02_equilibrium():
    assert abs(core.fixed_point(6) - 2) <= 1e-13
    assert core.k_min(6) == 6.5
    rng = np.random.default_rng(102)
    for d in rng.uniform(0.05, 50.0, 20):
        ell = core.fixed_point(d)
        tr = np.trace(core.jacobian_F(d, (ell, ell)))
        a = math.acos(tr / 2) / (2 * math.pi)
        assert abs(a - rotation.theta_m(d)) <= 1e-12


@acc(3, "rotation number against the winding estimate")
def test_ac03_rotation_oracle():
    rng = np.random.default_rng(103)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        d = float(rng.uniform(0.2, 20.0))
        K = core.k_min(d) + float(rng.uniform(0.5, 200.0))
        th = rotation.theta(d, K).theta
        w = rotation.winding_estimate(d, K, 100_000)
        worst = max(worst, abs(th - w.theta))
    assert worst <= 1e-4
    assert time.perf_counter() - t0 < 30.0


@acc(4, "limits of the rotation number")
def test_ac04_limits():
    gaps = [abs(rotation.theta(6, 10.0**j).theta - 3 / 7) for j in range(3, 8)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    for d in (0.5, 1.0, 6.0, 20.0):
        th = rotation.theta(d, core.k_min(d) + 1e-4).theta
        assert abs(th - rotation.theta_m(d)) <= 1e-3


@acc(5, "threshold parameter d0")
def test_ac05_closed_forms():
    d0, ell0 = rotation.d_zero()
    assert abs(rotation.theta_m(d0) - 3 / 7) <= 1e-12
    assert abs(ell0**2 - 2 * math.sin(5 * math.pi / 14)) <= 1e-12


@acc(5, "threshold parameter d0")
def test_ac05_x_m_stated_digits():
    # the stated digits 1.80193377 sit 4.0e-6 from the root 1.8019377358
    r = rotation.x_m()
    assert abs(((r - 1) * r - 2) * r + 1) <= 1e-14
    assert abs(r - 1.80193377) <= 1e-7


@acc(6, "seven-period locus")
def test_ac06_seven_locus():
    for d in (1.02, 1.05, 1.07):
        K = grouplaw.seven_locus(d)
        assert K > core.k_min(d)
        assert grouplaw.period_residual(CubicCurve(d, K), 7) <= 1e-8
    with pytest.raises(OutOfRangeError):
        grouplaw.seven_locus(1.2)


@acc(7, "non-periods 2, 3, 4, 6, 10")
def test_ac07_non_periods():
    worst = math.inf
    for d in np.geomspace(0.3, 20.0, 20):
        km = core.k_min(d)
        for K in km + np.geomspace(1.0, 60.0, 20):
            c = CubicCurve(float(d), float(K))
            for n in (2, 3, 4, 6, 10):
                worst = min(worst, grouplaw.minimal_period_residual(c, n))
    assert worst >= 1e-3


@acc(8, "orbit of (1, 1) is not globally 7-periodic")
def test_ac08_seven_not_global():
    r = rotation.seven_not_global()
    assert abs(r - 1.073) <= 1e-3
    assert abs(r - rotation.d_zero().d0) > 1e-3


@acc(9, "number theory of admissible periods")
def test_ac09_number_theory():
    t0 = time.perf_counter()
    assert periods.f_of_q(780) < 0 < periods.f_of_q(781)
    assert all(f > 0 for _, f in periods.f_scan(781, 2500))
    chain = periods.covering_chain(780)
    assert [x for _, _, x in chain[:2]] == [528, 360]
    assert periods.chain_coverage(chain) == 24
    table = {r.q: r.is_period for r in periods.period_table()}
    assert {q for q, ok in table.items() if ok} == {5, 7, 8, 9}
    assert {q for q, ok in table.items() if not ok} == {2, 3, 4, 6, 10}
    assert time.perf_counter() - t0 < 5.0


@acc(10, "group law: reflection of multiples of H")
def test_ac10_group_law():
    for c in random_curves(20, 110):
        for n in range(11):
            P = grouplaw.n_H(c, -n)
            Q = grouplaw.n_H(c, n + 1).swap()
            assert proj_distance(P, Q) <= 1e-8
    for d, K in [(Fr(6), Fr(10)), (Fr(1, 2), Fr(40, 3)), (Fr(7, 3), Fr(29, 2))]:
        assert grouplaw.n_H(CubicCurve(d, K), 2) == (-d, (d * d + K * d + 1) / d, 1)


@acc(11, "Weierstrass model checks")
def test_ac11_weierstrass():
    for c in [CubicCurve(6, 10)] + random_curves(20, 111):
        w = weierstrass_data(c)
        scale = max(abs(w.e1), abs(w.e3))
        assert abs(w.e1 + w.e2 + w.e3) <= 1e-9 * scale
        g2 = -4 * (w.e1 * w.e2 + w.e1 * w.e3 + w.e2 * w.e3)
        assert abs(w.g2 - g2) <= 1e-9 * abs(w.g2)
    w = weierstrass_data(CubicCurve(6, 10))
    w1, w2 = rotation.half_periods(6, 10)
    for z, e in [(w1, w.e1), (1j * w2, w.e3), (w1 + 1j * w2, w.e2)]:
        assert abs(rotation.weierstrass_p(6, 10, z, N=60).p - e) <= 1e-6
    assert gamma_residual(w, h_double_tilde(CubicCurve(6, 10))) <= 1e-8


@acc(12, "exact identity certificate")
def test_ac12_certificate():
    t0 = time.perf_counter()
    c = exact.certificate(2024, trials=100)
    assert c.passes == 100 and not c.counterexamples and c.skipped == 0
    U, V = exact.q6_example()
    F = exact.FieldElement.field(24, 2)
    assert U == Fr(25, 24)
    # -35 sqrt(6) / 144 with sqrt 6 = sqrt(24) / 2
    assert V == F(0, Fr(-35, 144) / 2)
    assert time.perf_counter() - t0 < 60.0


@acc(13, "sensitivity to initial conditions")
def test_ac13_sensitivity():
    rec = sensitivity.separation_experiment(6, (1, 1), 1e-3, 0.05, 20_000)
    n1, n2 = rec.count(10_000), rec.count(20_000)
    assert n1 > 0 and n2 >= n1
    first = sensitivity.separation_experiment(6, (1, 1), 1e-3, 0.05, 10_000)
    model = sensitivity.fibered_comparison(6, first)
    assert abs(len(model) - first.count()) <= 0.2 * first.count()
