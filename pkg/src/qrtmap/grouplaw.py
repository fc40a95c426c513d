"""Chord-tangent law on the projective closure of ``C_K`` with zero element V.

The third intersection of a line with the cubic is obtained by polarization:
for ``P`` and ``Q`` on the curve, ``f(aP + bQ)`` factors as
``a b (a grad f(P).Q + b grad f(Q).P)``, so the third point is
``(grad f(Q).P) P - (grad f(P).Q) Q``.  The same identity with a second point
taken on the tangent line handles ``P = Q``.  No case analysis at infinity
is needed, and on rational input the arithmetic stays exact.
"""
from __future__ import annotations

import math
from math import gcd

import numpy as np

from .core import PlanePoint, apply_F, check_d, fixed_point
from .cubic import (
    ON_CURVE_TOL,
    CubicCurve,
    ProjPoint,
    _is_exact,
    as_proj,
    curve_residual,
    form,
    gradient,
    oval_probe,
    proj_distance,
    require_on_curve,
    special_points,
    ys_at,
)
from .errors import DomainError, OutOfRangeError, PrecisionError

__all__ = [
    "star",
    "add_V",
    "neg",
    "extended_F",
    "n_H",
    "period_residual",
    "minimal_period_residual",
    "is_q_periodic",
    "seven_locus",
    "random_curve_point",
    "TANGENT_DIST",
]

# distinct float points closer than this are treated as equal
TANGENT_DIST = 1e-10


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _unit(P):
    m = max(abs(v) for v in P)
    return tuple(v / m for v in P)


def _polish(c, P):
    """One Newton step towards the curve along the gradient."""
    g = gradient(c, P)
    gg = _dot(g, g)
    if gg == 0:
        return P
    s = form(c, P) / gg
    return ProjPoint(P[0] - s * g[0], P[1] - s * g[1], P[2] - s * g[2])


def _finish(c, R, scale, polish):
    if _is_exact(*R):
        return ProjPoint(*R).normalized()
    if not max(abs(v) for v in R) > 1e-13 * scale:
        raise PrecisionError("third intersection is numerically indeterminate")
    R = ProjPoint(*_unit(R))
    if polish:
        R = _polish(c, R)
    return R.normalized()


def star(c, P, Q, polish=False):
    """Third point of the curve on the line PQ (on the tangent when P = Q)."""
    P = require_on_curve(c, P)
    Q = require_on_curve(c, Q)
    exact = _is_exact(*P, *Q, c.d, c.K)
    if not exact:
        P = ProjPoint(*(float(v) for v in _unit(P)))
        Q = ProjPoint(*(float(v) for v in _unit(Q)))
    same = (P == Q) if exact else proj_distance(P, Q) < TANGENT_DIST
    if not same:
        a = _dot(gradient(c, Q), P)
        b = _dot(gradient(c, P), Q)
        R = tuple(a * p - b * q for p, q in zip(P, Q))
        scale = abs(a) + abs(b)
        return _finish(c, R, scale, polish)
    gP = gradient(c, P)
    T = _cross(gP, P)  # on the tangent line and distinct from P
    if not exact:
        if max(abs(v) for v in T) == 0:
            raise PrecisionError(f"curve is singular at {tuple(P)!r}")
        T = _unit(T)
    fT = form(c, T)
    b = _dot(gradient(c, T), P)
    R = tuple(fT * p - b * t for p, t in zip(P, T))
    return _finish(c, R, abs(fT) + abs(b), polish)


def add_V(c, P, Q, polish=True):
    """Group sum ``(P * Q) * V`` with zero element V.

    Float results are polished by default so that sums can be chained.
    """
    V = special_points(c).V
    return star(c, star(c, P, Q, polish), V, polish)


def neg(c, P, polish=True):
    """Opposite ``P * B`` for the law with zero V."""
    return star(c, P, special_points(c).B, polish)


def extended_F(c, P):
    """The projective extension of F, ``(t(y+dt)^2, x(dxy+yt+dt^2), xy(y+dt))``.

    It coincides with ``add_V(P, H)`` away from its base points V, H and B,
    where every coordinate vanishes.
    """
    P = require_on_curve(c, P)
    x, y, t = P
    d = c.d
    yd = y + d * t
    R = (t * yd * yd, x * (d * x * y + y * t + d * t * t), x * y * yd)
    if _is_exact(*R):
        if all(v == 0 for v in R):
            raise PrecisionError(f"extended F is undefined at {tuple(P)!r}")
        return ProjPoint(*R).normalized()
    scale = (1.0 + abs(float(d))) * max(abs(float(v)) for v in P) ** 3
    if max(abs(float(v)) for v in R) <= 1e-12 * scale:
        raise PrecisionError(f"extended F is undefined at {tuple(P)!r}")
    return ProjPoint(*(float(v) for v in R)).normalized()


def n_H(c, n, tol=1e-6):
    """The point ``n H`` of the group with zero V, by double-and-add.

    Float curves get a Newton polish after every operation; the final
    residual must stay below ``tol``.
    """
    n = int(n)
    if abs(n) > 10**6:
        raise DomainError("|n| must not exceed 10**6")
    sp = special_points(c)
    exact = _is_exact(c.d, c.K)
    polish = not exact
    acc = sp.V
    base = sp.H
    m = abs(n)
    while m:
        if m & 1:
            acc = add_V(c, acc, base, polish)
        m >>= 1
        if m:
            base = add_V(c, base, base, polish)
    if n < 0:
        acc = neg(c, acc, polish)
    if not exact:
        res = curve_residual(c, acc)
        if res > tol:
            raise PrecisionError(f"accumulated residual {res:.3g} for n = {n}")
    return acc


def _probes(c):
    up = oval_probe(c, True)
    lo = oval_probe(c, False)
    return [up, lo, PlanePoint(up.y, up.x), PlanePoint(lo.y, lo.x)]


def _orbit_dists(d, M, n):
    """``|F^k(M) - M|`` for k = 0..n."""
    out = [0.0]
    P = M
    for _ in range(n):
        P = apply_F(d, P)
        out.append(math.hypot(P.x - M.x, P.y - M.y))
    return out


def period_residual(c, n, M=None):
    """``|F^n(M) - M|`` at M (default: the upper oval point above x = ell)."""
    if M is None:
        M = oval_probe(c)
    return _orbit_dists(float(c.d), M, n)[n]


def minimal_period_residual(c, n, probes=None):
    """Smallest ratio ``|F^n M - M| / min_{k | n, k < n} |F^k M - M|`` over probes.

    A small value means the probes are close to having n as minimal period.
    When ``F^k M = M`` exactly for a proper divisor k the ratio is infinite.
    """
    if n < 2:
        raise DomainError("n must be at least 2")
    if probes is None:
        probes = _probes(c)
    divs = [k for k in range(1, n) if n % k == 0]
    best = math.inf
    for M in probes:
        r = _orbit_dists(float(c.d), M, n)
        den = min(r[k] for k in divs)
        val = r[n] / den if den > 0 else math.inf
        best = min(best, val)
    return best


def is_q_periodic(c, q, tol=1e-8, minimal=True):
    """Return ``(flag, residual)`` for period q on the oval of ``C_K``.

    The flag needs both ``|F^q M - M| <= tol`` at the oval probe and a
    rotation number within ``tol`` of a fraction with denominator q.  With
    ``minimal`` the probe must also move by more than ``tol`` under every
    ``F^k``, k a proper divisor of q.
    """
    from .rotation import theta

    if q < 1:
        raise DomainError("q must be positive")
    M = oval_probe(c)
    r = _orbit_dists(float(c.d), M, q)
    res = r[q]
    th = theta(float(c.d), float(c.K)).theta
    p = round(th * q)
    rational = abs(th - p / q) <= tol
    ok = res <= tol and rational
    if ok and minimal:
        ok = gcd(p, q) == 1 and all(r[k] > tol for k in range(1, q) if q % k == 0)
    return ok, res


def seven_locus(d):
    """Level ``K(d) = (d^4 - d^2 - 1) / (d (1 - d^2))`` carrying 7-periodic orbits.

    Defined for ``1 < d < d0``; d0 comes from its own closed form.
    """
    from .rotation import d_zero

    check_d(d)
    d0 = d_zero().d0
    if not 1.0 < d < d0:
        raise OutOfRangeError(f"the 7-period locus needs 1 < d < d0 = {d0:.10g}, got d = {d!r}")
    K = (d**4 - d * d - 1.0) / (d * (1.0 - d * d))
    ell = fixed_point(d)
    if not K > 3.0 * ell + 1.0 / ell:
        raise PrecisionError(f"K(d) = {K!r} does not exceed K_m")
    return K


def random_curve_point(c, rng, positive=False, tries=1000):
    """A random finite real point of ``C_K`` (on the positive oval if asked)."""
    K = float(c.K)
    for _ in range(tries):
        x = rng.uniform(0.0, K) if positive else rng.uniform(-2.0 * K, 2.0 * K)
        ys = ys_at(c, x)
        if positive:
            ys = [y for y in ys if y > 0 and x > 0]
        if ys:
            P = ProjPoint(x, ys[int(rng.integers(len(ys)))], 1.0)
            if curve_residual(c, P) <= ON_CURVE_TOL:
                return P
    raise PrecisionError("could not sample a curve point")
