"""The homographic map F, its inverse, the first integral G and the equilibrium.

With c normalized to 1 the system reads::

    u[n+1] * u[n] = 1 + d / v[n]
    v[n+1] * v[n] = 1 + d / u[n+1]

and one step of it is the plane map ``F(x, y) = (X, Y)`` with
``X = (y + d) / (x y)`` and ``Y = (d x y + y + d) / (y (y + d))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PrecisionError

__all__ = [
    "PlanePoint",
    "Orbit",
    "normalize",
    "apply_F",
    "apply_F_inv",
    "invariant_G",
    "grad_G",
    "fixed_point",
    "k_min",
    "jacobian_F",
    "orbit",
    "check_d",
]

# coordinates this close to an axis make Y of F cancel catastrophically
AXIS_GUARD = 1e-12


class PlanePoint(NamedTuple):
    x: float
    y: float


def check_d(d):
    """Validate the system parameter and return it unchanged."""
    if not d > 0 or not math.isfinite(float(d)):
        raise DomainError(f"parameter d must be a finite positive real, got {d!r}")
    return d


def _check_point(M):
    x, y = M
    if not (x > AXIS_GUARD and y > AXIS_GUARD):
        raise DomainError(f"point {tuple(M)!r} is not in the open positive quadrant")
    return x, y


def normalize(c, d):
    """Return the parameter of the equivalent system with ``c = 1``.

    The rescaling ``u = u' sqrt(c)``, ``v = v' sqrt(c)`` turns the system with
    constants ``(c, d)`` into the one with ``(1, d c**-1.5)``.
    """
    if not c > 0:
        raise DomainError(f"c must be positive, got {c!r}")
    check_d(d)
    return d / c**1.5


def apply_F(d, M):
    x, y = _check_point(M)
    yd = y + d
    return PlanePoint(yd / (x * y), (d * x * y + yd) / (y * yd))


def apply_F_inv(d, M):
    """Inverse map, using ``F^-1 = S o F o S`` with S the diagonal reflection."""
    x, y = _check_point(M)
    X, Y = apply_F(d, (y, x))
    return PlanePoint(Y, X)


def invariant_G(d, M):
    x, y = _check_point(M)
    return x + y + 1.0 / x + 1.0 / y + d / (x * y)


def grad_G(d, M):
    x, y = _check_point(M)
    return np.array([1.0 - 1.0 / x**2 - d / (x * x * y), 1.0 - 1.0 / y**2 - d / (x * y * y)])


def fixed_point(d):
    """Positive root ``ell`` of ``t**3 - t - d``.

    The root is bracketed by ``(max(1, d**(1/3)), 1 + d/2)``; bisection narrows
    the bracket and Newton's method polishes the result.
    """
    check_d(d)
    lo = max(1.0, d ** (1.0 / 3.0))
    hi = 1.0 + d / 2.0
    p = lambda t: t * t * t - t - d
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if p(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-6 * hi:
            break
    t = 0.5 * (lo + hi)
    for _ in range(8):
        step = p(t) / (3.0 * t * t - 1.0)
        t -= step
        if abs(step) <= 1e-16 * t:
            break
    return t


def k_min(d):
    """Minimum value ``3 ell + 1/ell`` of G, attained only at the equilibrium."""
    ell = fixed_point(d)
    return 3.0 * ell + 1.0 / ell


def jacobian_F(d, M):
    """Closed-form Jacobian of F.

    Uses ``X = 1/x + d/(x y)`` and ``Y = 1/y + d x / (y + d)``.
    """
    x, y = _check_point(M)
    yd = y + d
    return np.array(
        [
            [-yd / (x * x * y), -d / (x * y * y)],
            [d / yd, -1.0 / (y * y) - d * x / (yd * yd)],
        ]
    )


@dataclass(frozen=True)
class Orbit:
    """Finite piece of an orbit together with its drift in G.

    ``drift[k]`` is ``|G(points[k]) - K|``; construction fails when any drift
    exceeds ``tol * max(1, K)``.
    """

    points: np.ndarray
    d: float
    K: float
    drift: np.ndarray
    tol: float = 1e-8

    def __post_init__(self):
        bad = np.flatnonzero(self.drift > self.tol * max(1.0, abs(self.K)))
        if bad.size:
            k = int(bad[0])
            raise PrecisionError(
                f"G drifted by {self.drift[k]:.3g} at iterate {k} (tolerance {self.tol:g})",
                index=k,
            )

    def __len__(self):
        return len(self.points)

    @property
    def max_drift(self):
        return float(self.drift.max()) if self.drift.size else 0.0

    @property
    def u(self):
        return self.points[:, 0]

    @property
    def v(self):
        return self.points[:, 1]


def iterate(d, M0, n):
    """Raw iteration of F returning an ``(n + 1, 2)`` array.

    Kept free of per-step validation; the loop only stops on overflow or
    underflow of a coordinate.
    """
    x, y = _check_point(M0)
    out = np.empty((n + 1, 2))
    out[0] = x, y
    for k in range(1, n + 1):
        yd = y + d
        x, y = yd / (x * y), (d * x * y + yd) / (y * yd)
        if not (AXIS_GUARD < x < 1e300 and AXIS_GUARD < y < 1e300):
            raise PrecisionError(f"coordinates left the representable range at iterate {k}", index=k)
        out[k] = x, y
    return out


def orbit(d, M0, n, tol=1e-8):
    """Return ``(M0, F(M0), ..., F^n(M0))`` as an :class:`Orbit`."""
    check_d(d)
    if n < 0:
        raise DomainError("n must be non-negative")
    pts = iterate(d, M0, n)
    x, y = pts[:, 0], pts[:, 1]
    G = x + y + 1.0 / x + 1.0 / y + d / (x * y)
    K = float(G[0])
    return Orbit(points=pts, d=d, K=K, drift=np.abs(G - K), tol=tol)
