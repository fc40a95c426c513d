import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrtmap.core import k_min
from qrtmap.cubic import (
    Branch,
    CubicCurve,
    ProjPoint,
    classify,
    curve_residual,
    diagonal_points,
    gradient,
    inflection_points,
    oval_probe,
    special_points,
    tangent_slope_at_B,
    ys_at,
)
from qrtmap.errors import DomainError

from helpers import random_curves

C10 = CubicCurve(6, 10)


def test_residual_examples():
    assert curve_residual(C10, (1, 1, 1)) == 0
    assert curve_residual(C10, (1, 0, 0)) == 0
    assert curve_residual(C10, (1, 2, 1)) > 1e-3


def test_residual_scale_invariant():
    a = curve_residual(C10, (1.0, 2.0, 1.0))
    b = curve_residual(C10, (1e5, 2e5, 1e5))
    assert a == pytest.approx(b, rel=1e-12)


def test_projpoint_normalization():
    assert ProjPoint(2.0, 4.0, 2.0).normalized() == (1.0, 2.0, 1.0)
    assert ProjPoint(-2.0, 1.0, 0.0).normalized() == (1.0, -0.5, 0.0)
    assert ProjPoint(Fr(3), Fr(6), Fr(3)).normalized() == (1, 2, 1)
    assert not ProjPoint(0, 1, 0).is_finite


def test_special_points():
    sp = special_points(C10)
    assert sp.A == (-6, 0, 1)
    assert sp.B == (0, -6, 1)
    assert sp.D == (1, -1, 0)
    for c in [C10] + random_curves(50, 1):
        for P in special_points(c):
            assert curve_residual(c, P) <= 1e-10


def test_diagonal_example():
    f1, f2, f3 = diagonal_points(C10)
    r7 = math.sqrt(7)
    assert (f1, f2, f3) == pytest.approx((2 - r7, 1, 2 + r7), rel=1e-14)


def test_diagonal_ordering_and_vieta():
    for c in random_curves(50, 2):
        f1, f2, f3 = diagonal_points(c)
        d, K = c.d, c.K
        assert -d / 2 < f1 < 0 < f2 < c.ell < f3 < K / 2
        assert abs(f1 * f2 * f3 + d / 2) <= 1e-10 * max(1, d)
        assert abs(f1 * f2 + f1 * f3 + f2 * f3 - 1) <= 1e-10 * max(1, K)
        assert abs(f1 + f2 + f3 - K / 2) <= 1e-10 * K
        for f in (f1, f2, f3):
            assert curve_residual(c, (f, f, 1)) <= 1e-10


def test_diagonal_asymptotics():
    a, b = [], []
    for K in (1e3, 1e4, 1e5):
        c = CubicCurve(6, K)
        f1, _, f3 = c.diagonal
        a.append(abs(f1 * math.sqrt(K / 6) + 1))
        b.append(abs(c.two_f3_minus_K * K + 4))
    assert a[0] > a[1] > a[2]
    assert b[0] > b[1] > b[2]
    assert a[2] < 1e-2 and b[2] < 1e-3


def test_domain_errors():
    with pytest.raises(DomainError):
        CubicCurve(6, 6.5)
    with pytest.raises(DomainError):
        CubicCurve(-1, 10)


def test_classify_examples():
    assert classify(C10, (1, 1)) is Branch.PositiveOval
    assert classify(C10, (-6, 0)) is Branch.S
    assert classify(C10, (Fr(-6), Fr(97, 6))) is Branch.SPlus
    assert classify(C10, (-6.0, 97 / 6)) is Branch.SPlus
    with pytest.raises(DomainError) as e:
        classify(C10, (1, 2))
    assert e.value.residual > 0


def _sample(c, rng, n):
    pts = []
    while len(pts) < n:
        x = rng.uniform(-3 * c.K, 3 * c.K)
        for y in ys_at(c, x):
            pts.append((x, y))
    return pts


def test_classify_swap_symmetry():
    swap = {Branch.SPlus: Branch.SMinus, Branch.SMinus: Branch.SPlus, Branch.S: Branch.S,
            Branch.PositiveOval: Branch.PositiveOval}
    rng = np.random.default_rng(5)
    seen = set()
    for c in random_curves(5, 3):
        for x, y in _sample(c, rng, 40):
            try:
                b = classify(c, (x, y))
            except DomainError:
                continue
            seen.add(b)
            assert classify(c, (y, x)) is swap[b]
    assert seen == set(Branch)


def test_branch_sign_conditions_exhaustive():
    rng = np.random.default_rng(8)
    c = CubicCurve(6, 10)
    for x, y in _sample(c, rng, 200):
        b = classify(c, (x, y))
        if x > 0 and y > 0:
            assert b is Branch.PositiveOval
        elif x + y > c.K:
            assert b in (Branch.SPlus, Branch.SMinus)
        else:
            # only the branch S lies outside the positive quadrant and below x + y = K
            assert b is Branch.S
            assert x + y < 0


def test_classify_axis_points():
    # the curve meets the sign boundaries only at A and B, both inside S
    for c in [C10] + random_curves(10, 9):
        d = float(c.d)
        assert classify(c, (-d, 0.0)) is Branch.S
        assert classify(c, (0.0, -d)) is Branch.S
        assert classify(c, (-d, 1e-12)) is Branch.S


def test_tangent_slope():
    assert tangent_slope_at_B(C10) == -97
    for c in random_curves(20, 4):
        assert tangent_slope_at_B(c) < -1
    # the tangent at B is orthogonal to the gradient there
    gx, gy, _ = gradient(C10, (0, -6, 1))
    assert gx + gy * tangent_slope_at_B(C10) == 0


def test_inflections():
    for c in [C10] + random_curves(10, 6):
        I, J = inflection_points(c)
        assert I.x < 0
        assert (J.x, J.y) == pytest.approx((I.y, I.x), rel=1e-8, abs=1e-10)
        assert classify(c, I) is Branch.S and classify(c, J) is Branch.S
        assert curve_residual(c, (I.x, I.y, 1)) <= 1e-9


def _hessian_det(c, P):
    x, y, t = P
    d, K = c.d, c.K
    H = np.array([
        [2 * y, 2 * x + 2 * y - K * t, 2 * t - K * y],
        [2 * x + 2 * y - K * t, 2 * x, 2 * t - K * x],
        [2 * t - K * y, 2 * t - K * x, 2 * (x + y) + 6 * d * t],
    ])
    return np.linalg.det(H)


def test_inflections_hessian_oracle():
    # independent characterisation: the Hessian determinant vanishes at flexes
    I, J = inflection_points(C10)
    for P in (I, J):
        scale = (abs(P.x) + abs(P.y) + 10) ** 3
        assert abs(_hessian_det(C10, (P.x, P.y, 1))) <= 1e-8 * scale


def test_oval_probe():
    for c in [C10] + random_curves(10, 7):
        P = oval_probe(c)
        assert P.x == c.ell and P.y > c.ell
        assert classify(c, P) is Branch.PositiveOval


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 30), st.floats(0.01, 500), st.floats(-50, 50))
def test_ys_at_on_curve(d, off, x):
    c = CubicCurve(d, k_min(d) + off)
    for y in ys_at(c, x):
        assert curve_residual(c, (x, y, 1)) <= 1e-9
