"""Sensitivity to initial conditions away from the equilibrium.

Orbits on neighbouring ovals rotate at different speeds, so two nearby
starts drift apart in angle and come back only to part again.  The
experiment runs F on a pair of starts and compares the separations with
those of the fibred rotation ``(x, alpha) -> (x, alpha + theta(x))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import PlanePoint, _check_point, check_d, fixed_point, grad_G, invariant_G, iterate, k_min
from .errors import DomainError, PrecisionError
from .rotation import theta

__all__ = [
    "SeparationRecord",
    "fibered_step",
    "model_separations",
    "separation_experiment",
    "fibered_comparison",
    "annulus_bounds",
    "perturb",
]

L_EXCLUSION = 1e-6


@dataclass(frozen=True)
class SeparationRecord:
    delta: float
    indices: list
    max_dist: float
    theta_M: float
    theta_M_prime: float
    M: PlanePoint
    M_prime: PlanePoint
    dists: np.ndarray = field(repr=False)

    def count(self, upto=None):
        """Number of separation indices ``<= upto``."""
        if upto is None:
            return len(self.indices)
        return int(np.searchsorted(np.asarray(self.indices), upto, side="right"))


def fibered_step(theta_fn, state):
    """One step of ``(x, alpha) -> (x, alpha + theta(x) mod 1)``."""
    x, alpha = state
    return x, (alpha + theta_fn(x)) % 1.0


def _circle_dist(a):
    a = np.mod(a, 1.0)
    return np.minimum(a, 1.0 - a)


def model_separations(theta1, theta2, delta, n, alpha0=0.0):
    """Indices ``k <= n`` where the two fibred orbits are at circle distance >= delta."""
    k = np.arange(n + 1)
    gap = _circle_dist(alpha0 + k * (theta2 - theta1))
    return np.flatnonzero(gap >= delta).tolist()


def _exclude_L(d, M):
    ell = fixed_point(d)
    if math.hypot(M[0] - ell, M[1] - ell) <= L_EXCLUSION:
        raise DomainError("the point is at the equilibrium, where there is no separation")


def perturb(d, M, radius):
    """Move ``radius`` along the unit gradient of G, across the level curves."""
    g = grad_G(d, M)
    ng = float(np.hypot(*g))
    if ng == 0:
        raise DomainError("gradient of G vanishes")
    return PlanePoint(M[0] + radius * g[0] / ng, M[1] + radius * g[1] / ng)


def _signed_rotation(d, pts, th):
    """Rotation per step as a fraction of a turn in ``[0, 1)``, from the orbit's direction."""
    ell = fixed_point(d)
    ang = np.arctan2(pts[:, 1] - ell, pts[:, 0] - ell)
    inc = np.mod(np.diff(ang), 2.0 * math.pi)
    return th if inc.mean() < math.pi else 1.0 - th


def separation_experiment(d, M, radius, delta, n, M_prime=None, min_dtheta=1e-8):
    """Iterate M and a neighbour M' and record every n with ``|F^n M - F^n M'| >= delta``.

    M' defaults to :func:`perturb` of M by ``radius``; it must sit on a level
    whose rotation number differs from that of M by more than ``min_dtheta``.
    """
    check_d(d)
    _check_point(M)
    if not (radius > 0 and delta > 0 and n >= 1):
        raise DomainError("radius and delta must be positive and n >= 1")
    _exclude_L(d, M)
    M = PlanePoint(float(M[0]), float(M[1]))
    auto = M_prime is None
    Mp = perturb(d, M, radius) if auto else PlanePoint(float(M_prime[0]), float(M_prime[1]))
    _check_point(Mp)
    th = theta(d, invariant_G(d, M)).theta
    thp = theta(d, invariant_G(d, Mp)).theta
    if auto and not abs(thp - th) > min_dtheta:
        raise PrecisionError("rotation numbers of M and M' are too close; increase radius")
    a = iterate(d, M, n)
    b = a if Mp == M else iterate(d, Mp, n)
    dist = np.hypot(*(a - b).T)
    idx = np.flatnonzero(dist >= delta).tolist()
    return SeparationRecord(
        delta=delta, indices=idx, max_dist=float(dist.max()), theta_M=th, theta_M_prime=thp,
        M=M, M_prime=Mp, dists=dist,
    )


def fibered_comparison(d, record):
    """Separation indices predicted by the fibred rotation model.

    The conjugacy is sampled from the orbit of M itself: the k-th iterate
    sits at angle ``k rho`` on the model circle.  M' is placed at angle 0
    and advanced by its own rotation number; the prediction for
    ``F^n(M')`` is the orbit point interpolated at angle ``n rho'``.
    """
    n = len(record.dists) - 1
    pts = iterate(d, record.M, n)
    rho = _signed_rotation(d, pts, record.theta_M)
    rho_p = rho + (record.theta_M_prime - record.theta_M) * (1.0 if rho == record.theta_M else -1.0)
    k = np.arange(n + 1)
    alpha = np.mod(k * rho, 1.0)
    order = np.argsort(alpha)
    xp, xs, ys = alpha[order], pts[order, 0], pts[order, 1]
    target = np.mod(k * rho_p, 1.0)
    px = np.interp(target, xp, xs, period=1.0)
    py = np.interp(target, xp, ys, period=1.0)
    dist = np.hypot(pts[:, 0] - px, pts[:, 1] - py)
    return np.flatnonzero(dist >= record.delta).tolist()


def annulus_bounds(d, sample):
    """``(min G, max G)`` over a compact sample avoiding the equilibrium."""
    sample = list(sample)
    if not sample:
        raise DomainError("sample is empty")
    for M in sample:
        _exclude_L(d, M)
    Ks = [invariant_G(d, M) for M in sample]
    K1, K2 = min(Ks), max(Ks)
    if not K1 > k_min(d):
        raise DomainError("sample reaches the minimum of G")
    return K1, K2
