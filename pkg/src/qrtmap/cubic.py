"""The invariant cubic ``C_K``: ``xy(x+y) + (x+y)t^2 + d t^3 - K x y t = 0``.

Points are projective triples.  Every routine here is written with plain
arithmetic so that it runs unchanged on floats or on :class:`fractions.Fraction`
coordinates; with rational ``d``, ``K`` and rational points the results are
exact.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import NamedTuple

from scipy.optimize import brentq

from .core import PlanePoint, check_d, fixed_point
from .errors import DomainError, PrecisionError

__all__ = [
    "ProjPoint",
    "CubicCurve",
    "Branch",
    "SpecialPoints",
    "proj_distance",
    "form",
    "gradient",
    "curve_residual",
    "special_points",
    "diagonal_points",
    "classify",
    "tangent_slope_at_B",
    "inflection_points",
    "ys_at",
    "oval_probe",
    "ON_CURVE_TOL",
]

ON_CURVE_TOL = 1e-9
# |t| below this fraction of max(|x|, |y|) is read as a point at infinity
INFINITY_TOL = 1e-13


def _is_exact(*values):
    return all(isinstance(v, Rational) for v in values)


class ProjPoint(NamedTuple):
    x: float
    y: float
    t: float = 1

    def normalized(self):
        """Scale so that ``t = 1``, or for points at infinity the largest coordinate is 1."""
        x, y, t = self
        if _is_exact(x, y, t):
            if t != 0:
                return ProjPoint(Fraction(x) / t, Fraction(y) / t, Fraction(1))
            m = x if abs(x) >= abs(y) else y
            if m == 0:
                raise PrecisionError("the zero triple is not a projective point")
            return ProjPoint(Fraction(x) / m, Fraction(y) / m, Fraction(0))
        big = max(abs(x), abs(y))
        if abs(t) > INFINITY_TOL * big:
            return ProjPoint(x / t, y / t, 1.0)
        m = x if abs(x) >= abs(y) else y
        if m == 0 or not math.isfinite(m):
            raise PrecisionError(f"degenerate projective triple {tuple(self)!r}")
        return ProjPoint(x / m, y / m, 0.0)

    @property
    def is_finite(self):
        return self.normalized().t != 0

    def affine(self):
        P = self.normalized()
        if P.t == 0:
            raise DomainError(f"{tuple(self)!r} is a point at infinity")
        return PlanePoint(P.x, P.y)

    def swap(self):
        """Image under the diagonal reflection S."""
        return ProjPoint(self.y, self.x, self.t)


def as_proj(P):
    if isinstance(P, ProjPoint):
        return P
    if len(P) == 2:
        return ProjPoint(P[0], P[1], 1)
    return ProjPoint(*P)


def proj_distance(P, Q):
    """Distance between projective points, computed on the unit sphere modulo sign."""
    p = [float(v) for v in P]
    q = [float(v) for v in Q]
    npn = math.sqrt(sum(v * v for v in p))
    nqn = math.sqrt(sum(v * v for v in q))
    p = [v / npn for v in p]
    q = [v / nqn for v in q]
    minus = math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))
    plus = math.sqrt(sum((a + b) ** 2 for a, b in zip(p, q)))
    return min(minus, plus)


class Branch(enum.Enum):
    PositiveOval = "positive_oval"
    S = "S"
    SPlus = "S+"
    SMinus = "S-"


class SpecialPoints(NamedTuple):
    A: ProjPoint
    B: ProjPoint
    H: ProjPoint
    V: ProjPoint
    D: ProjPoint


@dataclass(frozen=True)
class CubicCurve:
    """The level curve ``G = K`` for parameter ``d``; requires ``K > K_m``."""

    d: float
    K: float

    def __post_init__(self):
        check_d(self.d)
        if not float(self.K) > self.k_min:
            raise DomainError(
                f"K = {float(self.K)!r} must exceed K_m = {self.k_min!r} for d = {float(self.d)!r}"
            )

    @cached_property
    def ell(self):
        return fixed_point(float(self.d))

    @cached_property
    def k_min(self):
        ell = self.ell
        return 3.0 * ell + 1.0 / ell

    @cached_property
    def diagonal(self):
        return _diagonal_roots(float(self.d), float(self.K))

    @property
    def f1(self):
        return self.diagonal[0]

    @property
    def f2(self):
        return self.diagonal[1]

    @property
    def f3(self):
        return self.diagonal[2]

    @cached_property
    def two_f3_minus_K(self):
        """``2 f3 - K`` without cancellation, from ``f1 + f2 = (1 + d/(2 f3)) / f3``."""
        f3 = self.f3
        return -2.0 * (1.0 + float(self.d) / (2.0 * f3)) / f3


def form(c, P):
    x, y, t = P
    d, K = c.d, c.K
    return x * y * (x + y) + (x + y) * t * t + d * t**3 - K * x * y * t


def gradient(c, P):
    x, y, t = P
    d, K = c.d, c.K
    return (
        2 * x * y + y * y + t * t - K * y * t,
        2 * x * y + x * x + t * t - K * x * t,
        2 * (x + y) * t + 3 * d * t * t - K * x * y,
    )


def _monomial_scale(c, P):
    x, y, t = (abs(v) for v in P)
    d, K = abs(c.d), abs(c.K)
    terms = x * x * y + x * y * y + x * t * t + y * t * t + d * t**3 + K * x * y * t
    return max(terms, max(x, y, t) ** 3)


def curve_residual(c, P):
    """Scaled value ``|f(P)| / max(sum |monomials|, |P|_inf**3)`` at the normalized P.

    The denominator makes the measure independent of the size of the
    coordinates.  For exact inputs the result is exact.
    """
    P = as_proj(P).normalized()
    value = form(c, P)
    scale = _monomial_scale(c, P)
    return abs(value) / scale


def require_on_curve(c, P, tol=ON_CURVE_TOL):
    P = as_proj(P).normalized()
    res = curve_residual(c, P)
    if res > tol:
        raise DomainError(f"{tuple(P)!r} is not on C_K (scaled residual {float(res):.3g})", residual=res)
    return P


def special_points(c):
    d = c.d
    one = 1 if _is_exact(d) else 1.0
    zero = 0 * one
    return SpecialPoints(
        A=ProjPoint(-d, zero, one),
        B=ProjPoint(zero, -d, one),
        H=ProjPoint(one, zero, zero),
        V=ProjPoint(zero, one, zero),
        D=ProjPoint(one, -one, zero),
    )


def _diag_poly(t, d, K):
    return ((2.0 * t - K) * t + 2.0) * t + d


def _diagonal_roots(d, K):
    """Roots ``f1 < f2 < f3`` of ``2t^3 - K t^2 + 2t + d``.

    f1 is bracketed in ``(-d/2, 0)`` and isolated there; the remaining
    quadratic factor is solved in the cancellation-free form.
    """
    f1 = brentq(_diag_poly, -d / 2.0, 0.0, args=(d, K), xtol=1e-300, rtol=1e-15, maxiter=500)
    # 2t^3 - K t^2 + 2t + d = (t - f1)(2t^2 + beta t + gamma)
    beta = 2.0 * f1 - K
    gamma = -d / f1
    disc = beta * beta - 8.0 * gamma
    if disc < 0:
        raise DomainError(f"K = {K!r} does not exceed K_m: diagonal roots are complex")
    f3 = (-beta + math.sqrt(disc)) / 4.0
    f2 = gamma / (2.0 * f3)
    return f1, f2, f3


def diagonal_points(c):
    """Abscissas of the three points of ``C_K`` on the diagonal, ascending."""
    return c.diagonal


def _branch(x, y, K):
    if x > 0 and y > 0:
        return Branch.PositiveOval
    s = x + y
    if x < 0 and s > K:
        return Branch.SPlus
    if y < 0 and s > K:
        return Branch.SMinus
    return Branch.S


def classify(c, P, tol=ON_CURVE_TOL):
    """Name the real affine component of ``C_K`` containing the finite point P."""
    P = require_on_curve(c, P)
    if P.t == 0:
        raise DomainError("classification is defined for finite points only")
    x, y = P.x, P.y
    if _is_exact(x, y):
        # float K converts to Fraction exactly
        return _branch(x, y, Fraction(c.K))
    xf, yf, K = float(x), float(y), float(c.K)
    guard = tol * (1.0 + abs(xf) + abs(yf) + abs(K))
    if any(abs(m) <= guard for m in (xf, yf, xf + yf - K)):
        # ambiguous only if nudging the point across a boundary changes the answer
        nudges = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
        seen = {_branch(xf + sx * 2 * guard, yf + sy * 2 * guard, K) for sx, sy in nudges}
        if len(seen) > 1:
            raise DomainError(f"point {tuple(P)!r} is too close to a branch boundary to classify")
    return _branch(xf, yf, K)


def tangent_slope_at_B(c):
    """Slope ``-(d^2 + K d + 1)`` of the tangent at ``B = (0, -d)``."""
    d, K = c.d, c.K
    return -(d * d + K * d + 1)


def ys_at(c, x):
    """The real ordinates y with ``(x, y)`` on ``C_K``, ascending.

    For fixed x the equation is ``x y^2 + (x^2 + 1 - K x) y + (x + d) = 0``.
    """
    d, K = float(c.d), float(c.K)
    a = x
    b = x * x + 1.0 - K * x
    cc = x + d
    if a == 0:
        return [-cc / b] if b != 0 else []
    disc = b * b - 4.0 * a * cc
    if disc < 0:
        return []
    r = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(r, b))
    roots = {q / a, cc / q} if q != 0 else {-b / (2 * a)}
    # for x near 0 one root runs off to infinity (towards H)
    return sorted(r for r in roots if math.isfinite(r))


def oval_probe(c, upper=True):
    """Point of the positive oval above (or below) the equilibrium abscissa."""
    ys = [y for y in ys_at(c, c.ell) if y > 0]
    if len(ys) != 2:
        raise PrecisionError("vertical line through the equilibrium missed the positive oval")
    return PlanePoint(c.ell, ys[1] if upper else ys[0])


def inflection_points(c):
    """The two real finite inflection points ``(I, J)`` of ``C_K``.

    They are pulled back from the inflections of the Weierstrass model, whose
    abscissa is the largest real root of ``h = 2 P P'' - P'^2`` with
    ``P = 4X^3 - g2 X - g3``.  I lies in the second quadrant, J = S(I).
    """
    from .transform import phi_inverse, weierstrass_data

    w = weierstrass_data(c)
    g2, g3 = w.g2, w.g3
    h = lambda X: ((48.0 * X * X - 24.0 * g2) * X - 48.0 * g3) * X - g2 * g2
    lo = w.e1
    if not h(lo) < 0:
        raise PrecisionError("h is not negative at e1")
    hi = 2.0 * abs(lo) + 1.0
    while h(hi) <= 0:
        hi *= 2.0
        if not math.isfinite(hi):
            raise PrecisionError("could not bracket the inflection abscissa")
    X = brentq(h, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=500)
    Y = math.sqrt(4.0 * (X - w.e1) * (X - w.e2) * (X - w.e3))
    pts = []
    for sign in (1.0, -1.0):
        P = phi_inverse(c, (X, sign * Y, 1.0)).normalized()
        pts.append(PlanePoint(float(P.x), float(P.y)))
    pts.sort(key=lambda p: p.x)
    return pts[0], pts[1]
