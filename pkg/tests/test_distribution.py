from fractions import Fraction

import numpy as np
import pytest

from kuiper_isometry.kuiper_exception import NullIntervalError, ValidationError
from kuiper_isometry.resources.distribution import Distribution, Node, from_atoms, make_dirac, make_uniform, mix
from kuiper_isometry.resources.interval import Interval, merge_intervals
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF
from kuiper_isometry.resources.support import (
    closed_support, co_interval_support, condition_on_interval, is_absolutely_continuous_wrt, quantize,
)
from kuiper_isometry.services.metric_service import kuiper_distance
from kuiper_isometry.utils.generators import random_distribution, random_rational, trial_generators

half = Fraction(1, 2)


def test_interval_construction():
    assert Interval.closed(0, POS_INF) == Interval(0, POS_INF, True, False)
    assert Interval.singleton(3).is_degenerate
    assert not Interval.real_line().is_bounded
    with pytest.raises(ValidationError):
        Interval(2, 1)
    with pytest.raises(ValidationError):
        Interval(1, 1, False, True)
    with pytest.raises(ValidationError):
        Interval(NEG_INF, 0, True, True)


def test_interval_set_operations():
    assert Interval.closed(0, 2).intersect(Interval.open(1, 3)) == Interval(1, 2, False, True)
    assert str(Interval(1, 2, False, True)) == "(1,2]"
    assert Interval.closed(0, 1).intersect(Interval.closed(2, 3)) is None
    assert Interval.closed(0, 1).intersect(Interval.open(1, 2)) is None
    assert Interval.closed(0, 1).complement() == [Interval.open(NEG_INF, 0), Interval.open(1, POS_INF)]
    assert Interval.real_line().complement() == []
    assert Interval.open(0, 1).contains(half)
    assert not Interval.open(0, 1).contains(1)


def test_merge_intervals():
    merged = merge_intervals([Interval.singleton(5), Interval.open(1, 2), Interval.closed(0, 1)])
    assert merged == [Interval(0, 2, True, False), Interval.singleton(5)]
    assert merge_intervals([Interval.open(0, 1), Interval.open(1, 2)]) == [Interval.open(0, 1), Interval.open(1, 2)]


def test_uniform_and_dirac():
    assert make_uniform(0, 1).cdf(half) == half
    assert make_uniform(0, 2).cdf(1) == half
    with pytest.raises(ValidationError):
        make_uniform(1, 1)
    dirac = make_dirac(0)
    assert dirac.cdf_left(0) == 0
    assert dirac.cdf(0) == 1
    assert dirac.is_dirac and dirac.dirac_point == 0
    assert make_dirac(3).interval_mass(Interval.singleton(3)) == 1
    assert make_dirac(3).interval_mass(Interval.closed(4, 5)) == 0


def test_moebius_tail():
    # CDF 1 - 1/t on [1, +inf)
    mu = Distribution([Node(1, 0, 0)], [Moebius.constant(0), Moebius(1, -1, 1, 0)])
    assert mu.cdf(2) == half
    assert mu.interval_mass(Interval.open(3, POS_INF)) == Fraction(1, 3)
    assert not mu.is_piecewise_linear
    assert mu.is_continuous


def test_invalid_distributions():
    with pytest.raises(ValidationError):
        Distribution([Node(0, 0, half)], [Moebius.constant(0), Moebius.constant(half)])
    with pytest.raises(ValidationError):
        Distribution([Node(1, 0, half), Node(0, half, 1)], [Moebius.constant(0), Moebius.constant(half),
                                                          Moebius.constant(1)])
    with pytest.raises(ValidationError):
        from_atoms([(0, half), (1, Fraction(1, 3))])


def test_interval_mass():
    u01 = make_uniform(0, 1)
    assert u01.interval_mass(Interval.closed(0, half)) == half
    assert u01.interval_mass(Interval(1, 5, False, True)) == 0
    assert u01.interval_mass(Interval.real_line()) == 1
    mixed = mix([(half, make_dirac(0)), (half, make_uniform(0, 2))])
    assert mixed.interval_mass(Interval.singleton(0)) == half
    assert mixed.interval_mass(Interval.open(0, 1)) == Fraction(1, 4)


def test_interval_mass_is_additive():
    for rng in trial_generators(3, 20):
        mu = random_distribution(rng, 6)
        a, b = sorted([random_rational(rng), random_rational(rng)])
        if a == b:
            continue
        cut = (a + b) / 2
        whole = Interval.closed(a, b)
        left, right = Interval(a, cut, True, False), Interval(cut, b, True, True)
        assert mu.interval_mass(whole) == mu.interval_mass(left) + mu.interval_mass(right)
        assert mu.interval_mass(Interval.real_line()) == 1


def test_mix():
    u01 = make_uniform(0, 1)
    assert mix([(1, u01)]) == u01
    assert mix([(half, u01), (half, u01)]) == u01
    assert mix([(half, make_dirac(0)), (half, make_dirac(1))]).atoms == [(0, half), (1, half)]
    with pytest.raises(ValidationError):
        mix([(half, u01), (Fraction(1, 3), u01)])
    with pytest.raises(ValidationError):
        mix([])


def test_cdf_float():
    values = make_uniform(0, 1).cdf_float(np.array([-np.inf, 0.5, 2.0, np.inf]))
    assert list(values) == [0.0, 0.5, 1.0, 1.0]
    assert make_dirac(0).cdf_float(np.array([0.0]))[0] == 1.0


def test_closed_support():
    assert closed_support(make_uniform(0, 1)) == [Interval.closed(0, 1)]
    assert closed_support(mix([(half, make_dirac(0)), (half, make_uniform(2, 3))])) == [
        Interval.singleton(0), Interval.closed(2, 3)]
    assert closed_support(make_dirac(4)) == [Interval.singleton(4)]


def test_co_interval_support():
    support = co_interval_support(make_uniform(0, 1))
    assert support.components == [Interval.open(0, 1)]
    assert support.conv_hull == Interval.open(0, 1)
    assert support.bounded_gaps == []
    assert not support.contains(1)

    support = co_interval_support(mix([(half, make_uniform(0, 1)), (half, make_uniform(2, 3))]))
    assert support.conv_hull == Interval.open(0, 3)
    assert support.bounded_gaps == [Interval.closed(1, 2)]
    assert support.outer == [Interval(NEG_INF, 0, False, True), Interval(3, POS_INF, True, False)]

    assert co_interval_support(make_dirac(0)).components == [Interval.singleton(0)]


def test_co_interval_support_closure_matches_closed_support():
    for rng in trial_generators(11, 20):
        mu = random_distribution(rng, 6)
        support = co_interval_support(mu)
        closure = merge_intervals(Interval.closed(c.lo, c.hi) for c in support.components)
        assert closure == closed_support(mu)
        for gap in support.bounded_gaps:
            assert mu.interval_mass(gap) == 0


def test_condition_on_interval():
    assert condition_on_interval(make_uniform(0, 2), Interval.closed(0, 1)) == make_uniform(0, 1)
    assert condition_on_interval(make_dirac(0), Interval.closed(-1, 1)) == make_dirac(0)
    with pytest.raises(NullIntervalError):
        condition_on_interval(make_uniform(0, 1), Interval.closed(2, 3))


def test_conditioning_keeps_measures_atom_free():
    for rng in trial_generators(9, 15):
        mu = random_distribution(rng, 6, atoms=False)
        interval = Interval.closed(random_rational(rng, -10, 0), random_rational(rng, 0, 10))
        if mu.interval_mass(interval) > 0:
            assert condition_on_interval(mu, interval).is_continuous


def test_condition_scales_masses():
    for rng in trial_generators(5, 20):
        mu = random_distribution(rng, 6)
        a, b = sorted([random_rational(rng), random_rational(rng)])
        interval = Interval.closed(a, b)
        if mu.interval_mass(interval) == 0:
            continue
        conditioned = condition_on_interval(mu, interval)
        c, d = sorted([random_rational(rng), random_rational(rng)])
        probe = Interval.closed(c, d)
        overlap = probe.intersect(interval)
        expected = mu.interval_mass(overlap) if overlap is not None else 0
        assert conditioned.interval_mass(probe) * mu.interval_mass(interval) == expected


def test_quantize():
    quarter = Fraction(1, 4)
    u01 = make_uniform(0, 1)
    atomic = quantize(u01, 4)
    assert atomic == from_atoms([(0, quarter), (quarter, quarter), (half, quarter), (3 * quarter, quarter)])
    assert atomic.is_purely_atomic
    assert kuiper_distance(u01, atomic) == quarter
    assert quantize(make_dirac(5), 7) == make_dirac(5)
    with pytest.raises(ValidationError):
        quantize(u01, 0)


def test_quantize_bound():
    for rng in trial_generators(17, 10):
        mu = random_distribution(rng, 5)
        for n in (1, 3, 8):
            assert kuiper_distance(mu, quantize(mu, n)) <= Fraction(2, n) + 1e-12


def test_absolute_continuity():
    u01 = make_uniform(0, 1)
    assert is_absolutely_continuous_wrt(u01, make_uniform(0, 2))
    assert not is_absolutely_continuous_wrt(make_dirac(0), u01)
    assert is_absolutely_continuous_wrt(u01, mix([(half, make_dirac(0)), (half, u01)]))
    assert not is_absolutely_continuous_wrt(make_uniform(0, 2), u01)
