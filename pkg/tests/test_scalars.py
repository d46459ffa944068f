import math
from fractions import Fraction

import numpy as np
import pytest

from kuiper_isometry.kuiper_exception import IdenticallyZeroError, RepresentationError, ValidationError
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.scalars import (
    NEG_INF, POS_INF, format_ext_real, format_number, is_exact, is_finite, solve_quadratic, to_ext_real, to_rational,
)


def test_rational_parsing():
    assert to_rational("1/2") == Fraction(1, 2)
    assert to_rational("0.25") == Fraction(1, 4)
    assert to_rational(3) == Fraction(3)
    assert to_rational(0.5) == Fraction(1, 2)
    with pytest.raises(ValidationError):
        to_rational("one half")
    with pytest.raises(ValidationError):
        to_rational(True)
    with pytest.raises(ValidationError):
        to_rational(math.inf)


def test_extended_reals():
    assert to_ext_real("-inf") == NEG_INF
    assert to_ext_real("+inf") == POS_INF
    assert to_ext_real("inf") == POS_INF
    assert to_ext_real("2/3") == Fraction(2, 3)
    assert not is_finite(NEG_INF)
    assert is_finite(Fraction(5))
    assert NEG_INF < Fraction(-10 ** 9) < POS_INF
    assert format_ext_real(POS_INF) == "+inf"
    assert format_ext_real(Fraction(-1, 3)) == "-1/3"


def test_exactness_flag_travels_through_arithmetic():
    assert is_exact(Fraction(1, 3))
    assert not is_exact(Fraction(1, 3) + 0.5)
    assert format_number(Fraction(2, 3)) == "2/3"
    assert format_number(Fraction(0)) == "0"
    assert format_number(0.5) == "0.5"


def test_quadratic_rational_roots():
    roots = solve_quadratic(1, -3, 2)
    assert [r.value for r in roots] == [1, 2]
    assert all(r.exact for r in roots)
    assert [r.value for r in solve_quadratic(0, 2, -1)] == [Fraction(1, 2)]
    assert [r.value for r in solve_quadratic(4, -4, 1)] == [Fraction(1, 2)]
    assert solve_quadratic(1, 0, 1) == []
    assert solve_quadratic(0, 0, 5) == []


def test_quadratic_irrational_roots():
    roots = solve_quadratic(1, 0, -2)
    assert not any(r.exact for r in roots)
    assert roots[0].value == pytest.approx(-math.sqrt(2))
    assert roots[1].value == pytest.approx(math.sqrt(2))


def test_quadratic_identically_zero():
    with pytest.raises(IdenticallyZeroError):
        solve_quadratic(0, 0, 0)


def test_moebius_normalisation():
    assert Moebius(2, 4, 2, 2) == Moebius(1, 2, 1, 1)
    assert Moebius(1, 2, 2, 4) == Moebius.constant(Fraction(1, 2))
    assert Moebius(3, 6, 0, 3) == Moebius.linear(1, 2)
    assert Moebius.identity().is_identity
    with pytest.raises(ValidationError):
        Moebius(1, 1, 0, 0)


def test_moebius_evaluation_and_limits():
    inversion = Moebius(0, 1, 1, 0)
    assert inversion.pole == 0
    assert not inversion.increasing
    assert inversion(Fraction(4)) == Fraction(1, 4)
    assert inversion.limit(0, "right") == POS_INF
    assert inversion.limit(0, "left") == NEG_INF
    assert inversion.limit(POS_INF) == 0
    assert Moebius.linear(2, 0).limit(POS_INF) == POS_INF
    assert Moebius.linear(-2, 0).limit(POS_INF) == NEG_INF
    assert Moebius.constant(Fraction(1, 3)).limit(NEG_INF) == Fraction(1, 3)
    with pytest.raises(ValidationError):
        inversion(Fraction(0))


def test_moebius_algebra():
    inversion = Moebius(0, 1, 1, 0)
    assert inversion.compose(inversion).is_identity
    m = Moebius(2, 1, 1, 3)
    assert m.inverse().compose(m).is_identity
    assert m.compose(m.inverse()).is_identity
    assert m.affine(2, 1)(Fraction(1)) == 2 * m(Fraction(1)) + 1
    assert Moebius.linear(1, 0).add(Moebius.linear(2, 1)) == Moebius.linear(3, 1)
    assert Moebius.constant(1).add(m) == m.affine(1, 1)
    with pytest.raises(RepresentationError):
        Moebius(0, 1, 1, 0).add(Moebius(0, 1, 1, 1))


def test_pole_location():
    m = Moebius(0, 1, 1, -2)
    assert m.pole_in(0, 2)
    assert not m.pole_in(0, 2, closed=False)
    assert not m.pole_in(3, POS_INF)
    assert not Moebius.linear(1, 0).pole_in(NEG_INF, POS_INF)


def test_derivative_crossings():
    assert Moebius.linear(1, 0).derivative_crossings(Moebius.linear(2, 0)) == []
    # (1 - 1/t) has derivative 1/t^2, equal to the slope 1/4 at t = 2 and t = -2
    roots = Moebius(1, -1, 1, 0).derivative_crossings(Moebius.linear(Fraction(1, 4), 0))
    assert [r.value for r in roots] == [-2, 2]
    assert all(r.exact for r in roots)


def test_float_evaluation_handles_infinities():
    values = Moebius.linear(2, 1).evaluate_float(np.array([0.0, 1.0, np.inf]))
    assert values[0] == 1.0 and values[1] == 3.0 and values[2] == np.inf
    constant = Moebius.constant(Fraction(1, 2)).evaluate_float(np.array([-np.inf, 0.0]))
    assert list(constant) == [0.5, 0.5]
