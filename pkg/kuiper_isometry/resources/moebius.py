"""
Fractional-linear functions t -> (a*t + b) / (c*t + d) with rational coefficients.

They serve both as CDF pieces of a Distribution and as pieces of a MonotoneMap. Coefficients are kept normalised
(c = 1 when c != 0, else d = 1) so that structural equality is functional equality.
"""
from fractions import Fraction
from typing import List

import numpy as np
from attrs import frozen, field

from kuiper_isometry.kuiper_exception import RepresentationError, ValidationError
from kuiper_isometry.resources.scalars import ExtReal, Number, NEG_INF, POS_INF, Root, is_finite, solve_quadratic


def _normalise(a, b, c, d):
    a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
    if c == 0 and d == 0:
        raise ValidationError("Moebius denominator is identically zero")
    if a * d - b * c == 0:
        # constant function
        value = a / c if c != 0 else b / d
        return Fraction(0), value, Fraction(0), Fraction(1)
    if c != 0:
        return a / c, b / c, Fraction(1), d / c
    return a / d, b / d, Fraction(0), Fraction(1)


@frozen
class Moebius:
    """(a*t + b) / (c*t + d), normalised on construction."""

    a: Fraction = field(converter=Fraction)
    b: Fraction = field(converter=Fraction)
    c: Fraction = field(converter=Fraction)
    d: Fraction = field(converter=Fraction)

    def __attrs_post_init__(self):
        a, b, c, d = _normalise(self.a, self.b, self.c, self.d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def constant(cls, value) -> "Moebius":
        return cls(0, value, 0, 1)

    @classmethod
    def linear(cls, slope, intercept) -> "Moebius":
        return cls(slope, intercept, 0, 1)

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1, 0, 0, 1)

    @property
    def determinant(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def is_constant(self) -> bool:
        return self.determinant == 0

    @property
    def is_linear(self) -> bool:
        return self.c == 0

    @property
    def is_identity(self) -> bool:
        return self == Moebius.identity()

    @property
    def increasing(self) -> bool:
        return self.determinant > 0

    @property
    def pole(self):
        """The real pole -d/c, or None for affine functions."""
        if self.c == 0:
            return None
        return -self.d / self.c

    def __call__(self, t: Number) -> Number:
        if not is_finite(t):
            return self.limit(t)
        den = self.c * t + self.d
        if den == 0:
            raise ValidationError(f"Moebius evaluated at its pole {t}")
        return (self.a * t + self.b) / den

    def evaluate_float(self, t):
        """Double-precision evaluation, works elementwise on numpy arrays."""
        if self.is_constant:
            return np.full(np.shape(t), float(self.b)) if np.ndim(t) else float(self.b)
        if self.c == 0:
            return float(self.a) * t + float(self.b)
        return (float(self.a) * t + float(self.b)) / (float(self.c) * t + float(self.d))

    def limit(self, t: ExtReal, side: str = "right") -> ExtReal:
        """Limit of the function as the argument approaches ``t`` from ``side`` ('left' or 'right').

        Infinite arguments are approached from inside the real line; at the pole the result is a signed infinity.
        """
        if not is_finite(t):
            if self.c != 0:
                return self.a / self.c
            if self.a == 0:
                return self.b / self.d
            sign = 1 if (self.a / self.d > 0) == (t > 0) else -1
            return POS_INF if sign > 0 else NEG_INF
        pole = self.pole
        if pole is not None and t == pole:
            numerator = self.a * t + self.b
            # near the pole the function behaves like numerator / (c * (s - pole))
            approach = 1 if side == "right" else -1
            sign = (1 if numerator > 0 else -1) * (1 if self.c > 0 else -1) * approach
            return POS_INF if sign > 0 else NEG_INF
        return self(t)

    def compose(self, inner: "Moebius") -> "Moebius":
        """self o inner, i.e. t -> self(inner(t))."""
        return Moebius(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
        )

    def inverse(self) -> "Moebius":
        if self.is_constant:
            raise ValidationError("a constant Moebius function has no inverse")
        return Moebius(self.d, -self.b, -self.c, self.a)

    def affine(self, scale, shift) -> "Moebius":
        """t -> scale * self(t) + shift."""
        scale, shift = Fraction(scale), Fraction(shift)
        return Moebius(
            scale * self.a + shift * self.c,
            scale * self.b + shift * self.d,
            self.c,
            self.d,
        )

    def add(self, other: "Moebius") -> "Moebius":
        """Pointwise sum, provided it is again fractional-linear.

        Raises
        ------
        RepresentationError
            When the sum is a genuine degree-two rational function.
        """
        if self.is_constant:
            return other.affine(1, self.b)
        if other.is_constant:
            return self.affine(1, other.b)
        if self.c == other.c and self.d == other.d:
            return Moebius(self.a + other.a, self.b + other.b, self.c, self.d)
        raise RepresentationError(f"the sum of {self} and {other} is not fractional-linear")

    def scale(self, weight) -> "Moebius":
        return self.affine(weight, 0)

    def pole_in(self, lo: ExtReal, hi: ExtReal, closed: bool = True) -> bool:
        """Whether the pole lies in [lo, hi] (or in (lo, hi) when ``closed`` is False)."""
        pole = self.pole
        if pole is None:
            return False
        if closed:
            return lo <= pole <= hi
        return lo < pole < hi

    def derivative_crossings(self, other: "Moebius") -> List[Root]:
        """Real t where self'(t) == other'(t).

        With D1 = det(self), D2 = det(other) the condition is D1 (c2 t + d2)^2 = D2 (c1 t + d1)^2. An empty list is
        returned when the two derivatives coincide identically.
        """
        d1, d2 = self.determinant, other.determinant
        c1, e1 = self.c, self.d
        c2, e2 = other.c, other.d
        qa = d1 * c2 * c2 - d2 * c1 * c1
        qb = 2 * (d1 * c2 * e2 - d2 * c1 * e1)
        qc = d1 * e2 * e2 - d2 * e1 * e1
        if qa == 0 and qb == 0 and qc == 0:
            return []
        return solve_quadratic(qa, qb, qc)

    def __str__(self):
        return f"({self.a}*t + {self.b})/({self.c}*t + {self.d})"

