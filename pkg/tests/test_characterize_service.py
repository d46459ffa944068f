from fractions import Fraction

import numpy as np
import pytest

from kuiper_isometry.kuiper import Kuiper
from kuiper_isometry.kuiper_exception import DiracInputError, PreconditionError
from kuiper_isometry.kuiper_profiles import KuiperProfiles
from kuiper_isometry.kuiper_services import KuiperServices as Services
from kuiper_isometry.resources.distribution import make_dirac, make_uniform, mix
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF
from kuiper_isometry.services.characterize_service import (
    absolute_continuity_polar_check, is_unit_distant, polar, polar_by_distance, unit_distance_probes,
    unit_distance_regions,
)
from kuiper_isometry.services.metric_service import kuiper_distance
from kuiper_isometry.utils.generators import random_pwl_distribution, trial_generators

half = Fraction(1, 2)
u01 = make_uniform(0, 1)
two_blocks = mix([(half, u01), (half, make_uniform(2, 3))])


def test_unit_distance_regions():
    regions = unit_distance_regions(two_blocks)
    assert regions.outer == [Interval(NEG_INF, 0, False, True), Interval(3, POS_INF, True, False)]
    assert regions.gaps == [Interval.closed(1, 2)]
    assert regions.dirac_excluded_points == []

    regions = unit_distance_regions(u01)
    assert regions.outer == [Interval(NEG_INF, 0, False, True), Interval(1, POS_INF, True, False)]
    assert regions.gaps == []
    assert str(regions) == "outer=(-inf,0] u [1,+inf) gaps=none"

    with pytest.raises(DiracInputError):
        unit_distance_regions(make_dirac(0))


def test_atoms_are_reported():
    mu = mix([(half, make_dirac(0)), (half, make_uniform(2, 3))])
    regions = unit_distance_regions(mu)
    assert regions.dirac_excluded_points == [0]
    # the atom belongs to C_mu, the left end of the open block does not
    assert regions.gaps == [Interval(0, 2, False, True)]


def test_is_unit_distant():
    inside_gap = make_uniform(Fraction(6, 5), Fraction(9, 5))
    assert is_unit_distant(two_blocks, inside_gap)
    assert kuiper_distance(two_blocks, inside_gap) == 1
    assert not is_unit_distant(u01, make_uniform(half, Fraction(3, 2)))
    assert kuiper_distance(u01, make_uniform(half, Fraction(3, 2))) == half
    assert is_unit_distant(make_dirac(0), u01)
    assert is_unit_distant(u01, make_dirac(0))
    assert not is_unit_distant(mix([(half, make_dirac(0)), (half, u01)]), make_dirac(0))


def test_both_outer_parts_together():
    outside = mix([(half, make_uniform(-2, -1)), (half, make_uniform(4, 5))])
    assert is_unit_distant(two_blocks, outside)
    assert kuiper_distance(two_blocks, outside) == 1
    split = mix([(half, make_uniform(-2, -1)), (half, make_uniform(Fraction(5, 4), Fraction(7, 4)))])
    assert not is_unit_distant(two_blocks, split)


def test_unit_distance_matches_metric():
    for rng in trial_generators(47, 30):
        mu, nu = random_pwl_distribution(rng, 5), random_pwl_distribution(rng, 5)
        assert is_unit_distant(mu, nu) == (kuiper_distance(mu, nu) == 1)
        for probe in unit_distance_probes(mu, rng):
            assert is_unit_distant(mu, probe)
            assert kuiper_distance(mu, probe) == 1


def test_polar():
    universe = [make_dirac(1), u01, make_uniform(2, 3), make_dirac(0)]
    assert polar([make_dirac(0)], universe) == universe[:3]
    assert polar([], universe) == universe
    assert polar([u01], [u01]) == []
    assert polar_by_distance([make_dirac(0)], universe) == polar([make_dirac(0)], universe)


def test_absolute_continuity_polar_check():
    u02 = make_uniform(0, 2)
    probes = unit_distance_probes(u02, np.random.default_rng(3))
    assert absolute_continuity_polar_check(u02, u01, probes)
    assert absolute_continuity_polar_check(u01, u01, [make_dirac(5), make_uniform(-3, -1)])
    with pytest.raises(PreconditionError):
        absolute_continuity_polar_check(u01, make_dirac(5), probes)


def test_dirac_probes():
    probes = unit_distance_probes(make_dirac(2), np.random.default_rng(0))
    assert probes[0] == make_uniform(3, 4)
    assert all(kuiper_distance(make_dirac(2), probe) == 1 for probe in probes)


def test_characterize_service():
    service = Kuiper(KuiperProfiles.QUICK).client(Services.CHARACTERIZE_SERVICE)
    assert service.is_unit_distant(two_blocks, make_uniform(Fraction(5, 4), Fraction(7, 4)))
    assert service.unit_distance_regions(two_blocks).gaps == [Interval.closed(1, 2)]
    assert service.polar([u01], [u01, make_uniform(2, 3)]) == [make_uniform(2, 3)]
    assert service.unit_distance_probes(two_blocks) == service.unit_distance_probes(two_blocks)
    assert service.absolute_continuity_polar_check(u01, u01, service.unit_distance_probes(u01))
