"""
Deciding Kuiper distance 1 from supports, finite polars and the Dirac ingredients of the polar characterisation.
"""
import logging
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from kuiper_isometry.kuiper_exception import DiracInputError, PreconditionError
from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.resources.distribution import Distribution, from_atoms, make_uniform, mix
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.scalars import is_finite
from kuiper_isometry.resources.support import co_interval_support, is_absolutely_continuous_wrt
from kuiper_isometry.resources.unit_distance_regions import UnitDistanceRegions
from kuiper_isometry.services.metric_service import kuiper_distance

logger = logging.getLogger(__name__)


def unit_distance_regions(mu: Distribution) -> UnitDistanceRegions:
    """The outer region R minus conv(C_mu) and the bounded gaps of C_mu.

    Raises
    ------
    DiracInputError
        mu is a Dirac measure; use the atom formula d(delta_x, nu) = 1 - nu({x}) instead.
    """
    if mu.is_dirac:
        raise DiracInputError(f"{mu} is a Dirac measure, its unit-distance set is {{nu : nu({{x}}) = 0}}")
    support = co_interval_support(mu)
    return UnitDistanceRegions(
        outer=support.outer,
        gaps=list(support.bounded_gaps),
        dirac_excluded_points=[t for t, _ in mu.atoms],
    )


def is_unit_distant(mu: Distribution, nu: Distribution) -> bool:
    """Whether d_Ku(mu, nu) = 1, decided without evaluating the metric.

    A Dirac argument reduces to an atom test. Otherwise nu must put all its mass on the outer region of mu or on a
    single bounded gap.
    """
    if mu.is_dirac:
        return nu.atom_at(mu.dirac_point) == 0
    if nu.is_dirac:
        return mu.atom_at(nu.dirac_point) == 0
    regions = unit_distance_regions(mu)
    if sum((nu.interval_mass(part) for part in regions.outer), Fraction(0)) == 1:
        return True
    return any(nu.interval_mass(gap) == 1 for gap in regions.gaps)


def polar(members: Sequence[Distribution], universe: Sequence[Distribution]) -> List[Distribution]:
    """{nu in universe : d_Ku(mu, nu) = 1 for every mu in members}."""
    return [nu for nu in universe if all(is_unit_distant(mu, nu) for mu in members)]


def polar_by_distance(members: Sequence[Distribution], universe: Sequence[Distribution]) -> List[Distribution]:
    """Same filter as :func:`polar`, evaluated through the metric."""
    return [nu for nu in universe if all(kuiper_distance(mu, nu) == 1 for mu in members)]


def absolute_continuity_polar_check(mu: Distribution, nu: Distribution, probes: Sequence[Distribution]) -> bool:
    """For nu << mu, check that every probe at distance 1 from mu is at distance 1 from nu.

    Raises
    ------
    PreconditionError
        nu is not absolutely continuous with respect to mu.
    """
    if not is_absolutely_continuous_wrt(nu, mu):
        raise PreconditionError(f"{nu} is not absolutely continuous with respect to {mu}")
    for theta in probes:
        if is_unit_distant(mu, theta) and not is_unit_distant(theta, nu):
            logger.warning("probe %s is unit distant from %s but not from %s", theta, mu, nu)
            return False
    return True


def _inner_points(region: Interval, rng: np.random.Generator, count: int) -> List[Fraction]:
    """Distinct rational points inside the interior of ``region``."""
    if is_finite(region.lo) and is_finite(region.hi):
        lo, width = region.lo, region.hi - region.lo
    elif is_finite(region.hi):
        lo, width = region.hi - 2, Fraction(2)
    elif is_finite(region.lo):
        lo, width = region.lo, Fraction(2)
    else:
        lo, width = Fraction(-1), Fraction(2)
    slots = sorted(rng.choice(np.arange(1, 16), size=count, replace=False))
    return [lo + width * Fraction(int(k), 16) for k in slots]


def unit_distance_probes(mu: Distribution, rng: np.random.Generator) -> List[Distribution]:
    """Probe measures from {mu}^1: a uniform and a two-point atomic measure inside every region.

    Both outer parts are also charged together, which is the only way a measure that is not carried by one interval
    reaches distance 1.
    """
    if mu.is_dirac:
        x = mu.dirac_point
        return [make_uniform(x + 1, x + 2), from_atoms([(x - 1, Fraction(1, 2)), (x + 1, Fraction(1, 2))])]
    regions = unit_distance_regions(mu)
    probes = []
    for region in regions.regions:
        a, b = _inner_points(region, rng, 2)
        probes.append(make_uniform(a, b))
        probes.append(from_atoms([(a, Fraction(1, 3)), (b, Fraction(2, 3))]))
    if len(regions.outer) == 2:
        left = _inner_points(regions.outer[0], rng, 2)
        right = _inner_points(regions.outer[1], rng, 2)
        probes.append(mix([(Fraction(1, 2), make_uniform(*left)), (Fraction(1, 2), make_uniform(*right))]))
    return probes


class CharacterizeService(object):
    """
    The CharacterizeService class answers unit-distance questions about distributions.
    """

    def __init__(self, session: KuiperSession):
        self._session = session

    def unit_distance_regions(self, mu: Distribution) -> UnitDistanceRegions:
        return unit_distance_regions(mu)

    def is_unit_distant(self, mu: Distribution, nu: Distribution) -> bool:
        return is_unit_distant(mu, nu)

    def polar(self, members: Sequence[Distribution], universe: Sequence[Distribution]) -> List[Distribution]:
        result = polar(members, universe)
        logger.debug("polar of %d members keeps %d of %d", len(members), len(result), len(universe))
        return result

    def absolute_continuity_polar_check(self, mu: Distribution, nu: Distribution,
                                        probes: Sequence[Distribution]) -> bool:
        return absolute_continuity_polar_check(mu, nu, probes)

    def unit_distance_probes(self, mu: Distribution, seed: int = None) -> List[Distribution]:
        if seed is None:
            seed = self._session.get_int("seed")
        return unit_distance_probes(mu, np.random.default_rng(seed))
