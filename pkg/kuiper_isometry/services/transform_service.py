"""
Pullback of distributions along monotone maps and the isometry families built from it.

The pullback follows the set convention (mu o g)(B) = mu(g(B)), which is the classical pushforward along g^-1.
"""
import logging
from fractions import Fraction
from typing import List

import numpy as np
from attrs import frozen

from kuiper_isometry.kuiper_exception import AtomicInputError, MassDeficiencyError, ValidationError
from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.resources.distribution import Distribution, Node, segment_probe
from kuiper_isometry.resources.monotone_map import MapOracle, MonotoneMap, compose, r_map
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF, is_finite
from kuiper_isometry.utils.interpolation import certified_grid, piecewise_linear_distribution

logger = logging.getLogger(__name__)


def pullback(mu: Distribution, g: MonotoneMap) -> Distribution:
    """mu o g, the measure B -> mu(g(B)).

    On each segment between consecutive result nodes the map is a single Moebius piece m whose image meets no node
    of mu, so the result CDF there is C + s * (Q(m(t)) - Q(m(lo+))) with Q the CDF piece of mu over the image and s the
    orientation sign. Nodes carry the atoms mu({g(t)}).

    Raises
    ------
    MassDeficiencyError
        mu has an atom at an exceptional range point of g, which no point of R maps to.
    """
    for p in sorted(g.exceptional_range):
        mass = mu.atom_at(p)
        if mass > 0:
            raise MassDeficiencyError(p, mass)

    ts = set(g.breaks)
    for y in mu.breakpoints:
        t = g.preimage(y)
        if t is not None:
            ts.add(t)
    ts = sorted(ts)
    bounds = [NEG_INF] + ts + [POS_INF]
    sign = 1 if g.increasing else -1

    nodes: List[Node] = []
    pieces = []
    running = Fraction(0)
    for i, (lo, hi) in enumerate(zip(bounds[:-1], bounds[1:])):
        probe = segment_probe(lo, hi)
        m = g.piece_at(probe)
        q = mu.piece_at(m(probe))
        y_lo, y_hi = m.limit(lo, "right"), m.limit(hi, "left")
        start = q.limit(y_lo)
        pieces.append(q.compose(m).affine(sign, running - sign * start))
        running += sign * (q.limit(y_hi) - start)
        if is_finite(hi):
            atom = Fraction(0) if hi in g.exceptional_domain else mu.atom_at(g(hi))
            nodes.append(Node(hi, running, running + atom))
            running += atom
    if running != 1:
        raise ValidationError(f"pullback along {g} has total mass {running}")
    return Distribution(nodes, pieces)


@frozen
class Isometry:
    """A transformation mu -> mu o map, optionally restricted to atom-free measures."""

    map: MonotoneMap
    continuous_only: bool
    description: str

    def __call__(self, mu: Distribution) -> Distribution:
        if self.continuous_only and not mu.is_continuous:
            raise AtomicInputError(f"the {self.description} family is defined on continuous measures")
        return pullback(mu, self.map)

    def __str__(self):
        return f"{self.description}: {self.map}"


def continuous_isometry(g: MonotoneMap, x) -> Isometry:
    """mu -> mu o (g o r_x) on atom-free measures."""
    if not g.is_whole_line:
        raise ValidationError("g must be a bijection of R without exceptional points")
    return Isometry(compose(g, r_map(x)), True, "continuous-measure (g o r_x)")


def general_isometry(g: MonotoneMap) -> Isometry:
    """mu -> mu o g on all distributions."""
    if not g.is_whole_line:
        raise ValidationError("g must be a bijection of R without exceptional points")
    return Isometry(g, False, "whole-line (g)")


def certified_pushforward(mu: Distribution, oracle: MapOracle, epsilon: float) -> Distribution:
    """Piecewise-linear nu with d_Ku(mu o o, nu) <= epsilon for a map oracle o outside the exact class.

    The transported CDF is F(t) = s * (F_mu(o(t)) - F_mu(o(-inf))) + [t > pole], evaluated in double precision and
    interpolated on a certified grid.

    Raises
    ------
    AtomicInputError
        mu has atoms.
    OracleError
        The oracle fails its inverse or orientation probe.
    ValidationError
        epsilon is not positive.
    """
    if not epsilon > 0:
        raise ValidationError(f"tolerance must be positive, got {epsilon!r}")
    if not mu.is_continuous:
        raise AtomicInputError("certified pushforward is defined on continuous measures")
    probes = np.concatenate([np.linspace(-50.0, 50.0, 201), [float(t) for t in mu.breakpoints]])
    oracle.check(probes)

    sign = 1.0 if oracle.increasing else -1.0
    base = float(mu.cdf_float(np.array([oracle.limit]))[0])
    if oracle.pole is None:
        at_pole = None
    else:
        # left limit at the pole, where o runs off to -inf (decreasing) or +inf (increasing)
        at_pole = sign * ((1.0 if oracle.increasing else 0.0) - base)

    def transported(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            images = np.asarray(oracle.forward(t), dtype=float)
        values = sign * (mu.cdf_float(images) - base)
        if oracle.pole is not None:
            values = values + (t > oracle.pole)
            values = np.where(t == oracle.pole, at_pole, values)
        return values

    ts, values = certified_grid(transported, epsilon)
    logger.info("certified pushforward with %d knots at tolerance %g", ts.size, epsilon)
    return piecewise_linear_distribution(ts, values)


class TransformService(object):
    """
    The TransformService class applies monotone maps and the isometry families to distributions.
    """

    def __init__(self, session: KuiperSession):
        self._session = session

    def pullback(self, mu: Distribution, g: MonotoneMap) -> Distribution:
        logger.debug("pullback of %s along %s", mu, g)
        return pullback(mu, g)

    def continuous_isometry(self, g: MonotoneMap, x) -> Isometry:
        return continuous_isometry(g, x)

    def general_isometry(self, g: MonotoneMap) -> Isometry:
        return general_isometry(g)

    def certified_pushforward(self, mu: Distribution, oracle: MapOracle, epsilon: float = None) -> Distribution:
        if epsilon is None:
            epsilon = self._session.get_float("circle_epsilon")
        return certified_pushforward(mu, oracle, epsilon)
