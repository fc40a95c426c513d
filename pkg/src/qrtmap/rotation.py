"""Rotation number of F on the positive oval, from the Weierstrass model.

With ``g(u) = 1 / sqrt((1 + u^2)(1 + eps u^2))`` the rotation number is
``theta = N / (2 D)`` where ``N`` integrates g over ``[0, Ulim]`` and ``D``
over ``[0, inf)``.  ``D`` is a complete elliptic integral and is computed by
the arithmetic-geometric mean.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .core import apply_F, check_d, fixed_point, iterate, k_min
from .cubic import CubicCurve, oval_probe
from .errors import DomainError, InternalError, PrecisionError
from .transform import weierstrass_data

__all__ = [
    "RotationResult",
    "HalfPeriods",
    "WindingEstimate",
    "D0",
    "agm",
    "theta",
    "theta_m",
    "d_zero",
    "x_m",
    "winding_estimate",
    "find_K_for_theta",
    "half_periods",
    "weierstrass_p",
    "asymptotic_ratios",
    "seven_not_global",
    "n_integral",
    "d_integral",
]

# closest approach to K_m that is still computed
K_MIN_GAP = 1e-6


@dataclass(frozen=True)
class RotationResult:
    theta: float
    numerator_integral: float
    denominator_integral: float
    eps: float
    Ulim: float


class HalfPeriods(NamedTuple):
    omega1: float
    omega2: float


class WindingEstimate(NamedTuple):
    theta: float  # folded into (0, 1/2)
    signed: float  # raw fraction of a turn per step, in [0, 1)
    stderr: float  # batch-means standard error
    bound: float  # deterministic bound on |signed - true rotation number|


class D0(NamedTuple):
    d0: float
    ell0: float


def agm(a, b):
    a, b = float(a), float(b)
    for _ in range(100):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _g(u, eps):
    return 1.0 / math.sqrt((1.0 + u * u) * (1.0 + eps * u * u))


def d_integral(eps):
    """``int_0^inf g``, equal to ``pi / (2 AGM(1, sqrt(eps)))``."""
    return math.pi / (2.0 * agm(1.0, math.sqrt(eps)))


def n_integral(U, eps):
    """``int_0^U g``; beyond ``u = 1`` the variable ``u = e^s`` flattens the tail."""
    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=200)
    if U <= 1.0:
        return quad(_g, 0.0, U, args=(eps,), **opts)[0]
    head = quad(_g, 0.0, 1.0, args=(eps,), **opts)[0]
    h = lambda s: math.exp(s) * _g(math.exp(s), eps)
    tail = quad(h, 0.0, math.log(U), **opts)[0]
    return head + tail


def theta(d, K):
    """Rotation number ``theta_d(K)`` in ``(0, 1/2)`` with its two integrals."""
    check_d(d)
    km = k_min(d)
    if not K > km:
        raise DomainError(f"K = {K!r} must exceed K_m = {km!r}")
    if K - km < K_MIN_GAP:
        raise PrecisionError(f"K - K_m = {K - km:.3g} is too small for a reliable rotation number")
    w = weierstrass_data(CubicCurve(d, K))
    if not 0.0 < w.eps < 1.0:
        raise InternalError(f"eps = {w.eps!r} outside (0, 1)")
    D = d_integral(w.eps)
    N = n_integral(w.Ulim, w.eps)
    th = N / (2.0 * D)
    if not 0.0 < th < 0.5:
        raise InternalError(f"rotation number {th!r} outside (0, 1/2)")
    return RotationResult(theta=th, numerator_integral=N, denominator_integral=D, eps=w.eps, Ulim=w.Ulim)


def theta_m(d):
    """Limit of the rotation number at ``K_m``: ``arccos((ell^2 - 1)/(2 ell^2)) / pi``."""
    ell = fixed_point(d)
    return math.acos((ell * ell - 1.0) / (2.0 * ell * ell)) / math.pi


def d_zero():
    """The parameter with ``theta_m = 3/7`` and its equilibrium abscissa."""
    s = math.sin(math.pi / 14.0)
    return D0(d0=2.0 * s / (1.0 - 2.0 * s) ** 1.5, ell0=(1.0 - 2.0 * s) ** -0.5)


def x_m():
    """Largest root of ``x^3 - x^2 - 2x + 1``, i.e. ``ell_0^2``.

    Brackets ``[1.5, 2]`` and is polished by Newton's method.
    """
    p = lambda x: ((x - 1.0) * x - 2.0) * x + 1.0
    x = brentq(p, 1.5, 2.0, xtol=1e-15, rtol=1e-15)
    for _ in range(3):
        x -= p(x) / ((3.0 * x - 2.0) * x - 2.0)
    return x


def winding_estimate(d, K, n=100_000, batches=20):
    """Empirical rotation number from the winding of the orbit about L.

    Angle increments are taken modulo ``2 pi`` in ``[0, 2 pi)``; since the
    orbit turns monotonically about L this gives a continuous lift.
    """
    if n < 1000:
        raise DomainError("n must be at least 1000")
    c = CubicCurve(d, K)
    ell = c.ell
    M = oval_probe(c)
    try:
        pts = iterate(d, M, n)
    except PrecisionError as e:
        raise InternalError(f"orbit left the positive quadrant: {e}") from e
    ang = np.arctan2(pts[:, 1] - ell, pts[:, 0] - ell)
    inc = np.mod(np.diff(ang), 2.0 * math.pi)
    rho = float(inc.sum() / (2.0 * math.pi * n))
    per = inc / (2.0 * math.pi)
    size = n // batches
    means = per[: size * batches].reshape(batches, size).mean(axis=1)
    stderr = float(means.std(ddof=1) / math.sqrt(batches))
    folded = min(rho, 1.0 - rho)
    return WindingEstimate(theta=folded, signed=rho, stderr=stderr, bound=1.0 / n)


def find_K_for_theta(d, target, Kmax, grid=1000, tol=1e-10):
    """All K in ``(K_m, Kmax]`` with ``theta_d(K) = target``, ascending.

    Scans a grid whose offsets from K_m are log-spaced, then bisects each
    sign change.  An empty list means no crossing was bracketed.
    """
    target = float(target)
    if not 0.0 < target < 0.5:
        raise DomainError("target must lie in (0, 1/2)")
    km = k_min(d)
    if not Kmax > km:
        raise DomainError("Kmax must exceed K_m")
    lo = max(1e-4, 10 * K_MIN_GAP)
    offs = np.geomspace(lo, Kmax - km, grid)
    Ks = km + offs
    vals = np.array([theta(d, K).theta - target for K in Ks])
    roots = []
    for i in range(grid - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(Ks[i]))
        elif a * b < 0.0:
            f = lambda K: theta(d, K).theta - target
            r = brentq(f, Ks[i], Ks[i + 1], xtol=1e-14, rtol=1e-15, maxiter=200)
            if abs(f(r)) <= tol:
                roots.append(float(r))
    if vals[-1] == 0.0:
        roots.append(float(Ks[-1]))
    return roots


def half_periods(d, K):
    w = weierstrass_data(CubicCurve(d, K))
    s = math.sqrt(w.e13)
    w1 = d_integral(w.eps) / s
    w2 = math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - w.eps))) / s
    return HalfPeriods(w1, w2)


class WeierstrassValue(NamedTuple):
    p: complex
    dp: complex
    tail: float  # bound on the neglected rows


def _exp2i(w):
    """``E = exp(+-2iw)`` with the sign making ``|E| <= 1``, and that sign."""
    if w.imag >= 0:
        return cmath.exp(2j * w), 1.0
    return cmath.exp(-2j * w), -1.0


def _csc2(w):
    E, _ = _exp2i(w)
    return -4.0 * E / (1.0 - E) ** 2


def _cot(w):
    E, s = _exp2i(w)
    return s * 1j * (E + 1.0) / (E - 1.0)


def weierstrass_p(d, K, z, N=60):
    """``(wp(z), wp'(z))`` for the lattice generated by ``2 omega1`` and ``2i omega2``.

    Each horizontal row of the lattice is summed in closed form,
    ``sum_p (z - 2p omega1 - w)^-2 = c^2 csc^2(c (z - w))`` with
    ``c = pi / (2 omega1)``, leaving a sum over rows ``|q| <= N`` that
    converges geometrically; ``tail`` bounds the rows left out.
    """
    if N < 20:
        raise DomainError("N must be at least 20")
    w1, w2 = half_periods(d, K)
    z = complex(z)
    # distance to the nearest lattice point
    a = round(z.real / (2 * w1))
    b = round(z.imag / (2 * w2))
    if abs(z - (2 * a * w1 + 2j * b * w2)) < 1e-6:
        raise DomainError(f"z = {z!r} is at a pole")
    c = math.pi / (2.0 * w1)
    p = c * c * _csc2(c * z) - math.pi**2 / (12.0 * w1 * w1)
    dp = -2.0 * c**3 * _csc2(c * z) * _cot(c * z)
    last = 0.0
    for q in range(1, N + 1):
        for wq in (2j * q * w2, -2j * q * w2):
            u = c * (z - wq)
            s2 = _csc2(u)
            term = c * c * (s2 - _csc2(c * wq))
            p += term
            dp += -2.0 * c**3 * s2 * _cot(u)
            if q == N:
                last += abs(term) + abs(2.0 * c**3 * s2 * _cot(u))
    r = math.exp(-2.0 * math.pi * w2 / w1)
    tail = last * r / (1.0 - r)
    return WeierstrassValue(p, dp, tail)


def asymptotic_ratios(eps_list, beta):
    """Pairs ``(N / (beta ln(1/eps)), D / (ln(1/eps) / 2))`` with upper limit ``eps^-beta``."""
    if not 0.0 < beta < 0.5:
        raise DomainError("beta must lie in (0, 1/2)")
    out = []
    for eps in eps_list:
        if not 0.0 < eps < 1e-2:
            raise DomainError(f"eps = {eps!r} must lie in (0, 1e-2)")
        L = math.log(1.0 / eps)
        N = n_integral(eps**-beta, eps)
        D = d_integral(eps)
        out.append((N / (beta * L), D / (0.5 * L)))
    return out


def _orbit3_condition(d):
    P = (1.0, 1.0)
    for _ in range(3):
        P = apply_F(d, P)
    u3, v3 = P
    return u3 * v3 * v3 - v3 - d


def seven_not_global(d=None):
    """Root on ``(1, 1.2)`` of ``u3 v3^2 - v3 - d`` for the orbit of ``(1, 1)``.

    Here ``(u3, v3) = F^3(1, 1)``; the root must differ from d0.  The
    argument is accepted for interface symmetry and ignored.
    """
    lo, hi = 1.0, 1.2
    if not _orbit3_condition(lo) * _orbit3_condition(hi) < 0:
        raise InternalError("no sign change on (1, 1.2)")
    root = brentq(_orbit3_condition, lo, hi, xtol=1e-15, rtol=1e-15)
    if not abs(root - d_zero().d0) > 1e-3:
        raise InternalError(f"root {root!r} is within 1e-3 of d0")
    return root
