"""
Exact scalars: rationals, extended reals and closed-form quadratic roots.

Rationals are ``fractions.Fraction``. An extended real is either a ``Fraction`` or one of the two float infinities.
Values computed through an approximate root are plain ``float`` objects, so the "approximate" flag travels through
arithmetic on its own: ``Fraction + float`` is a ``float``.
"""
import math
from fractions import Fraction
from typing import List, Union

from attrs import frozen

from kuiper_isometry.kuiper_exception import IdenticallyZeroError, ValidationError

ExtReal = Union[Fraction, float]
Number = Union[Fraction, float]

NEG_INF = -math.inf
POS_INF = math.inf


def is_finite(x: ExtReal) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


def is_exact(x) -> bool:
    """True when ``x`` was computed without any approximate step."""
    return isinstance(x, (Fraction, int))


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and numeric strings to a Fraction.

    Floats are accepted and converted exactly (binary expansion), strings may be ``"p/q"`` or decimals.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationError(f"not a finite rational: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational: {value!r}")
    raise ValidationError(f"not a rational: {value!r}")


def to_ext_real(value) -> ExtReal:
    """Like :func:`to_rational` but also accepts ``"-inf"``, ``"+inf"``, ``"inf"`` and float infinities."""
    if isinstance(value, str) and value.strip().lower() in ("-inf", "+inf", "inf", "-infinity", "+infinity"):
        return NEG_INF if value.strip().startswith("-") else POS_INF
    if isinstance(value, float) and math.isinf(value):
        return value
    return to_rational(value)


def format_ext_real(x: ExtReal) -> str:
    if not is_finite(x):
        return "-inf" if x < 0 else "+inf"
    return str(x)


def format_number(x: Number) -> str:
    """``"p/q"`` for exact values, a 17-digit decimal otherwise."""
    if is_exact(x):
        return str(Fraction(x))
    return repr(float(x))


def _exact_sqrt(q: Fraction):
    """Rational square root of a non-negative rational, or None when irrational."""
    num_root = math.isqrt(q.numerator)
    den_root = math.isqrt(q.denominator)
    if num_root * num_root == q.numerator and den_root * den_root == q.denominator:
        return Fraction(num_root, den_root)
    return None


@frozen
class Root:
    """A real root of a quadratic. ``value`` is a Fraction when ``exact`` and a float otherwise."""

    value: Number
    exact: bool


def solve_quadratic(a, b, c) -> List[Root]:
    """Real roots of a*t^2 + b*t + c in ascending order.

    Parameters
    ----------
    a, b, c : Fraction
        Coefficients.

    Returns
    -------
    list of Root
        Exact roots whenever the discriminant is the square of a rational, else double-precision roots computed
        with the cancellation-free formula.

    Raises
    ------
    IdenticallyZeroError
        All three coefficients vanish.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a == 0:
        if b == 0:
            if c == 0:
                raise IdenticallyZeroError("identically zero")
            return []
        return [Root(-c / b, True)]

    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        return [Root(-b / (2 * a), True)]

    root = _exact_sqrt(disc)
    if root is not None:
        r1 = (-b - root) / (2 * a)
        r2 = (-b + root) / (2 * a)
        return [Root(r, True) for r in sorted((r1, r2))]

    # q = -(b + sign(b) sqrt(disc)) / 2 avoids subtracting nearly equal numbers
    sqrt_disc = math.sqrt(disc)
    bf = float(b)
    q = -0.5 * (bf + math.copysign(sqrt_disc, bf))
    r1 = q / float(a)
    r2 = float(c) / q if q != 0 else -r1
    return [Root(r, False) for r in sorted((r1, r2))]
