"""Which integers can be minimal periods: fractions with denominator q in (1/3, 1/2).

A level carries q-periodic orbits of minimal period q exactly when its
rotation number is an irreducible ``p/q``.  Every such fraction except 3/7 is
attained for some d, and 3/7 only on the 7-period locus.
"""
from __future__ import annotations

import math
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "FeasibilityReport",
    "feasible_fractions",
    "f_of_q",
    "f_scan",
    "covering_chain",
    "chain_coverage",
    "prime_sieve",
    "estimate_N",
    "period_table",
    "FEASIBLE",
    "INFEASIBLE",
    "SPECIAL_SEVEN",
]

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
SPECIAL_SEVEN = "special-seven"

# relative width of the exclusion band around irrational interval ends
GUARD = 1e-12


class FeasibilityReport(NamedTuple):
    q: int
    fractions: list
    status: str

    @property
    def is_period(self):
        return self.status != INFEASIBLE


def feasible_fractions(q):
    """Numerators p with ``1/3 < p/q < 1/2`` and ``gcd(p, q) = 1``."""
    q = int(q)
    if not 2 <= q <= 10**7:
        raise DomainError("q must lie in [2, 10**7]")
    # 3p > q and 2p < q, in integers
    ps = [p for p in range(q // 3 + 1, (q - 1) // 2 + 1) if gcd(p, q) == 1]
    if q == 7:
        status = SPECIAL_SEVEN
    elif ps:
        status = FEASIBLE
    else:
        status = INFEASIBLE
    return FeasibilityReport(q, ps, status)


def period_table():
    """Feasibility reports for ``q = 2..10``."""
    return [feasible_fractions(q) for q in range(2, 11)]


def f_of_q(q):
    """Lower bound, up to the unit offset, for the prime count in ``(q/3, q/2)``."""
    if q < 52:
        raise DomainError("f(q) is only used for q >= 52")
    h = q / 2.0 - 1.0
    t = q / 3.0
    lq = math.log(q)
    return h / math.log(h) - t * (1.0 + 1.5 / math.log(t)) / math.log(t) - 1.38402 * lq / math.log(lq) - 1.0


def f_scan(q_from, q_to):
    return [(q, f_of_q(q)) for q in range(q_from, q_to + 1)]


def prime_sieve(n):
    """Boolean array ``is_prime[0..n]``."""
    n = max(int(n), 1)
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if s[p]:
            s[p * p :: p] = False
    return s


def _next_prime_above(x, sieve):
    """Least prime ``p > x`` for a real x, growing the sieve if needed."""
    k = math.floor(x) + 1
    while True:
        if k >= len(sieve):
            sieve = prime_sieve(2 * len(sieve) + 10)
        if sieve[k]:
            return k, sieve
        k += 1


def covering_chain(start=780):
    """Triples ``(r, p, x)``: p is the least prime with ``3p > r``, ``x = 2(p + 1)``.

    Since ``r/3 < p < x/2``, p/q is an irreducible fraction in ``(1/3, 1/2)``
    for every q in ``[x, r]``.  The next triple starts at ``r = x - 1``; the
    chain ends when ``x > r``, where the inclusion no longer applies.
    """
    if start < 30:
        raise DomainError("start must be at least 30")
    sieve = prime_sieve(2 * start + 10)
    out = []
    r = int(start)
    while True:
        # 3p > r  <=>  p > r/3
        p, sieve = _next_prime_above(r / 3.0, sieve)
        x = 2 * (p + 1)
        if x > r:
            break
        out.append((r, p, x))
        r = x - 1
    return out


def chain_coverage(chain):
    """Smallest q such that every integer in ``[q, r_0]`` is served by some triple."""
    lo = chain[0][0] + 1
    for r, p, x in chain:
        if not (3 * p > r and 2 * p < x <= r) or r < lo - 1:
            break
        lo = x
    return lo


def estimate_N(d, qmax=10_000):
    """Upper-bound certificate for the threshold beyond which every q is a period.

    Uses the interval ``(a, b)`` between 3/7 and the limit rotation number at
    the equilibrium.  Returns ``1 + max{q <= qmax : no prime p with
    a < p/q < b}``; fractions within ``GUARD`` of an end are not counted.
    """
    from .rotation import theta_m

    if qmax < 100:
        raise DomainError("qmax must be at least 100")
    tm = theta_m(d)
    if abs(tm - 3.0 / 7.0) <= 1e-9:
        raise DomainError("the interval is empty at d = d0")
    a, b = sorted((3.0 / 7.0, tm))
    sieve = prime_sieve(qmax)
    pi = np.cumsum(sieve)
    q = np.arange(2, qmax + 1)
    lo = np.floor(q * (a + GUARD)).astype(np.int64)
    hi = np.ceil(q * (b - GUARD)).astype(np.int64) - 1
    hi = np.maximum(hi, lo)
    count = pi[hi] - pi[lo]
    bad = q[count == 0]
    return int(bad.max()) + 1 if bad.size else 2
