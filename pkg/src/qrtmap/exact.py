"""Exact check that ``R * omega = ((R * Z) * W) * Z`` on ``y^2 = 4x^3 + ax + b``.

Here ``omega`` is the point at infinity, ``Z = (u, v)`` a finite point and
``W = (Z * Z) * omega``.  The identity is polynomial in ``(a, b, u, x)`` and
the two square roots ``v`` and ``y``, so it is tested at random rational
``(a, b, u, x)`` with all arithmetic carried out exactly in the biquadratic
field ``Q(sqrt r1, sqrt r2)``, ``r1 = v^2`` and ``r2 = y^2``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "FieldElement",
    "WCurve",
    "DegenerateChord",
    "is_rational_square",
    "w_point",
    "verify_identity",
    "certificate",
    "q6_example",
]


class DegenerateChord(DomainError):
    """A division by zero in the chord formulas; the sample should be redrawn."""


def is_rational_square(r):
    r = Fraction(r)
    if r < 0:
        return False
    n, d = r.numerator, r.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


@dataclass(frozen=True)
class FieldElement:
    """``c00 + c10 sqrt(r1) + c01 sqrt(r2) + c11 sqrt(r1) sqrt(r2)``."""

    c00: Fraction
    c10: Fraction
    c01: Fraction
    c11: Fraction
    r1: Fraction
    r2: Fraction

    @classmethod
    def field(cls, r1, r2):
        r1, r2 = Fraction(r1), Fraction(r2)
        if not (r1 > 0 and r2 > 0):
            raise DomainError("radicands must be positive")
        if any(is_rational_square(r) for r in (r1, r2, r1 * r2)):
            raise DomainError(f"Q(sqrt {r1}, sqrt {r2}) is not a biquadratic field")
        return _Field(r1, r2)

    @property
    def coeffs(self):
        return (self.c00, self.c10, self.c01, self.c11)

    def _same(self, o):
        if (self.r1, self.r2) != (o.r1, o.r2):
            raise DomainError("elements of different fields")

    def _new(self, c):
        return FieldElement(*c, self.r1, self.r2)

    def _lift(self, o):
        if isinstance(o, FieldElement):
            self._same(o)
            return o
        o = Fraction(o)
        z = Fraction(0)
        return FieldElement(o, z, z, z, self.r1, self.r2)

    def __add__(self, o):
        o = self._lift(o)
        return self._new(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return self._new(tuple(-a for a in self.coeffs))

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        a0, a1, a2, a3 = self.coeffs
        b0, b1, b2, b3 = o.coeffs
        r1, r2 = self.r1, self.r2
        return self._new((
            a0 * b0 + r1 * a1 * b1 + r2 * a2 * b2 + r1 * r2 * a3 * b3,
            a0 * b1 + a1 * b0 + r2 * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 + r1 * (a1 * b3 + a3 * b1),
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        ))

    __rmul__ = __mul__

    def conj1(self):
        """Image under ``sqrt r1 -> -sqrt r1``."""
        a0, a1, a2, a3 = self.coeffs
        return self._new((a0, -a1, a2, -a3))

    def conj2(self):
        a0, a1, a2, a3 = self.coeffs
        return self._new((a0, a1, -a2, -a3))

    def norm(self):
        """Product of the four conjugates, a rational number."""
        g = self * self.conj2()  # lies in Q(sqrt r1)
        return (g * g.conj1()).c00

    def inverse(self):
        g = self * self.conj2()
        n = (g * g.conj1()).c00
        if n == 0:
            raise ZeroDivisionError("element has zero norm")
        return self.conj2() * g.conj1() * (1 / n)

    def __truediv__(self, o):
        o = self._lift(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self._lift(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return all(a == 0 for a in self.coeffs)

    def __eq__(self, o):
        if not isinstance(o, (FieldElement, int, Fraction)):
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash((self.coeffs, self.r1, self.r2))

    def to_float(self):
        return float(self.c00) + float(self.c10) * math.sqrt(self.r1) + float(self.c01) * math.sqrt(self.r2) + float(
            self.c11
        ) * math.sqrt(self.r1 * self.r2)

    def __repr__(self):
        return f"FieldElement({self.c00}, {self.c10}, {self.c01}, {self.c11}; r1={self.r1}, r2={self.r2})"


@dataclass(frozen=True)
class _Field:
    r1: Fraction
    r2: Fraction

    def __call__(self, c00=0, c10=0, c01=0, c11=0):
        return FieldElement(Fraction(c00), Fraction(c10), Fraction(c01), Fraction(c11), self.r1, self.r2)

    @property
    def s1(self):
        return self(0, 1)

    @property
    def s2(self):
        return self(0, 0, 1)


@dataclass(frozen=True)
class WCurve:
    """``y^2 = 4x^3 + a x + b`` with nonzero discriminant."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.discriminant == 0:
            raise DomainError("singular cubic")

    @property
    def discriminant(self):
        # of x^3 + (a/4) x + b/4
        p, q = self.a / 4, self.b / 4
        return -4 * p**3 - 27 * q**2

    def rhs(self, x):
        return 4 * x**3 + self.a * x + self.b

    def residual(self, P):
        x, y = P
        return y * y - self.rhs(x)


def _chord(P, Q):
    """Third intersection for the chord through distinct finite P and Q."""
    (x1, y1), (x2, y2) = P, Q
    dx = x2 - x1
    if _zero(dx):
        raise DegenerateChord("chord is vertical")
    p = (y2 - y1) / dx
    q = y1 - p * x1
    x3 = p * p / 4 - x1 - x2
    return x3, p * x3 + q


def _zero(e):
    return e.is_zero() if isinstance(e, FieldElement) else e == 0


def _tangent_slope(curve, u, v):
    return (12 * u * u + curve.a) / (2 * v)


def w_point(curve, Z):
    """``W = (Z * Z) * omega``, from the tangent at Z."""
    u, v = Z
    if _zero(v):
        raise DegenerateChord("tangent at a 2-torsion point is vertical")
    p = _tangent_slope(curve, u, v)
    q = v - p * u
    U = p * p / 4 - 2 * u
    V = -(p * U + q)
    return U, V


def verify_identity(curve, Z, R):
    """Run the chord chain ``R1 = R*Z, R2 = R1*W, R3 = R2*Z`` and test ``R3 = (x, -y)``.

    Raises :class:`DegenerateChord` when a chord is vertical.
    """
    x, y = R
    W = w_point(curve, Z)
    R1 = _chord(R, Z)
    R2 = _chord(R1, W)
    X, Y = _chord(R2, Z)
    return _zero(X - x) and _zero(Y + y)


def _rand_rational(rng, num=12, den=6):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


@dataclass
class Certificate:
    seed: object
    trials: int
    passes: int
    skipped: int
    resamples: int
    counterexamples: list

    def as_dict(self):
        return {
            "seed": self.seed,
            "trials": self.trials,
            "passes": self.passes,
            "skipped": self.skipped,
            "resamples": self.resamples,
            "counterexamples": self.counterexamples,
        }


def _draw(rng):
    while True:
        a, b = _rand_rational(rng), _rand_rational(rng)
        u, x = _rand_rational(rng), _rand_rational(rng)
        if u == x:
            continue
        try:
            curve = WCurve(a, b)
        except DomainError:
            continue
        r1, r2 = curve.rhs(u), curve.rhs(x)
        if r1 > 0 and r2 > 0 and not any(is_rational_square(r) for r in (r1, r2, r1 * r2)):
            return curve, u, x


def certificate(seed, trials=100, max_resamples=20):
    """Exact check of the identity on ``trials`` random samples, both signs of y.

    A sample counts as passed when both sign branches hold.  Degenerate
    chords trigger a redraw; after ``max_resamples`` redraws the trial is
    reported as skipped.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    rng = random.Random(seed)
    passes = skipped = resamples = 0
    bad = []
    for _ in range(trials):
        for attempt in range(max_resamples + 1):
            curve, u, x = _draw(rng)
            F = FieldElement.field(curve.rhs(u), curve.rhs(x))
            Z = (F(u), F.s1)
            try:
                ok = [verify_identity(curve, Z, (F(x), sign * F.s2)) for sign in (1, -1)]
            except DegenerateChord:
                resamples += 1
                continue
            if all(ok):
                passes += 1
            else:
                bad.append({"a": str(curve.a), "b": str(curve.b), "u": str(u), "x": str(x), "signs": ok})
            break
        else:
            skipped += 1
    return Certificate(seed, trials, passes, skipped, resamples, bad)


def q6_example():
    """``W`` for ``a = -4, b = 0, Z = (2, 2 sqrt 6)``, computed in ``Q(sqrt 24, sqrt 2)``."""
    curve = WCurve(-4, 0)
    F = FieldElement.field(24, 2)
    return w_point(curve, (F(2), F.s1))
