"""Projective change of variables sending ``C_K`` to a Weierstrass cubic.

The map is the product of three linear maps on homogeneous coordinates:

* ``T1``: ``X = (x + y)/2``, ``Y = (y - x)/2``, ``T = x + y - K t``;
* ``T2``: divide by ``(lam, lam**2, mu)`` with ``lam = K**-1.5`` and
  ``mu = 2 (K + d) K**-1.5``;
* ``T3``: the horizontal shift ``X -> X + (A/12) T`` with ``A = K^3 - 8K - 12d``.

The image is ``Gamma_K: Y^2 T = 4 X^3 - g2 X T^2 - g3 T^3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .cubic import ON_CURVE_TOL, CubicCurve, ProjPoint, as_proj, require_on_curve
from .errors import DomainError, InternalError

__all__ = [
    "WeierstrassData",
    "GammaPoint",
    "weierstrass_data",
    "phi_matrix",
    "phi_map",
    "phi_inverse",
    "gamma_residual",
    "h_double_tilde",
]


class GammaPoint(NamedTuple):
    X: float
    Y: float
    T: float = 1.0

    def normalized(self):
        X, Y, T = self
        if abs(T) > 1e-13 * max(abs(X), abs(Y)):
            return GammaPoint(X / T, Y / T, 1.0)
        m = X if abs(X) >= abs(Y) else Y
        return GammaPoint(X / m, Y / m, 0.0)


@dataclass(frozen=True)
class WeierstrassData:
    d: float
    K: float
    A: float
    lam: float
    mu: float
    g2: float
    g3: float
    e1: float
    e2: float
    e3: float
    e12: float  # e1 - e2, computed without cancellation
    e13: float  # e1 - e3, likewise
    XK: float
    nu: float
    eps: float
    Ulim: float
    K32: float


@lru_cache(maxsize=4096)
def _data(d, K):
    c = CubicCurve(d, K)
    f1, f2, f3 = c.diagonal
    K32 = K**1.5
    A = K**3 - 8.0 * K - 12.0 * d
    lam = 1.0 / K32
    mu = 2.0 * (K + d) / K32
    den = [2.0 * f1 - K, 2.0 * f2 - K, c.two_f3_minus_K]
    r = 2.0 * (K + d)
    e1, e2, e3 = (r * f / q + A / 12.0 for f, q in zip((f1, f2, f3), den))
    # e_i - e_j = -2K(K+d)(f_i - f_j) / ((2f_i - K)(2f_j - K))
    e12 = -2.0 * K * (K + d) * (f1 - f2) / (den[0] * den[1])
    e13 = -2.0 * K * (K + d) * (f1 - f3) / (den[0] * den[2])
    g2 = (K**6 - 16.0 * K**4 - 24.0 * d * K**3 + 16.0 * K**2) / 12.0
    g3 = 4.0 * e1 * e2 * e3
    XK = K**3 / 12.0 - 2.0 * K / 3.0
    # X(K) - A/12 = d exactly, so nu = d - 2(K+d) f1 / (2 f1 - K)
    nu = d - r * f1 / den[0]
    eps = e12 / e13
    # e1 and e2 agree to many digits at large K, so order via the differences
    if not (0 < e12 < e13 and nu > 0 and 0 < eps < 1):
        raise InternalError(f"Weierstrass constants out of order for d={d!r}, K={K!r}")
    return WeierstrassData(
        d=d, K=K, A=A, lam=lam, mu=mu, g2=g2, g3=g3, e1=e1, e2=e2, e3=e3,
        e12=e12, e13=e13, XK=XK, nu=nu, eps=eps, Ulim=math.sqrt(e13 / nu), K32=K32,
    )


def weierstrass_data(c):
    """All constants of the Weierstrass model of ``C_K`` (see :class:`WeierstrassData`)."""
    return _data(float(c.d), float(c.K))


@lru_cache(maxsize=4096)
def _matrices(d, K):
    w = _data(d, K)
    T1 = np.array([[0.5, 0.5, 0.0], [-0.5, 0.5, 0.0], [1.0, 1.0, -K]])
    T2 = np.diag([1.0 / w.lam, 1.0 / w.lam**2, 1.0 / w.mu])
    T3 = np.array([[1.0, 0.0, w.A / 12.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    M = T3 @ T2 @ T1
    # inverses written out to avoid a generic solve
    T1i = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [2.0 / K, 0.0, -1.0 / K]])
    T2i = np.diag([w.lam, w.lam**2, w.mu])
    T3i = np.array([[1.0, 0.0, -w.A / 12.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    Minv = T1i @ T2i @ T3i
    M.setflags(write=False)
    Minv.setflags(write=False)
    return M, Minv


def phi_matrix(c):
    """``(phi, phi^-1)`` as 3x3 arrays acting on column triples."""
    return _matrices(float(c.d), float(c.K))


def gamma_residual(w, Q):
    """Relative residual of ``Y^2 T = 4X^3 - g2 X T^2 - g3 T^3`` at Q."""
    X, Y, T = (float(v) for v in Q)
    terms = (Y * Y * T, -4.0 * X**3, w.g2 * X * T * T, w.g3 * T**3)
    scale = sum(abs(v) for v in terms)
    if scale == 0:
        return 0.0
    # sum the small pieces first: the leading pair cancels
    return abs((terms[0] + terms[1]) + (terms[2] + terms[3])) / scale


def phi_map(c, P):
    P = require_on_curve(c, as_proj(P))
    M, _ = phi_matrix(c)
    X, Y, T = M @ np.array([float(v) for v in P])
    return GammaPoint(X, Y, T).normalized()


def phi_inverse(c, Q, tol=ON_CURVE_TOL):
    Q = GammaPoint(*(float(v) for v in Q))
    res = gamma_residual(weierstrass_data(c), Q)
    if res > tol:
        raise DomainError(f"{tuple(Q)!r} is not on Gamma_K (residual {res:.3g})", residual=res)
    _, Minv = phi_matrix(c)
    x, y, t = Minv @ np.array(Q)
    return ProjPoint(float(x), float(y), float(t)).normalized()


def h_double_tilde(c):
    """Image of H under the change of zero element, ``(K^3/12 - 2K/3, d K^1.5, 1)``."""
    w = weierstrass_data(c)
    return GammaPoint(w.XK, float(c.d) * w.K32, 1.0)
