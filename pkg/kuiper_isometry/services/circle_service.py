"""
Arc masses, the arc-maximum metric, rotations and the tau transport between the line and the circle.

tau(t) = 2 * arctan(t) identifies R with the circle minus the angle pi; a line CDF F becomes the circle CDF
theta -> F(tan(theta / 2)) measured from the base point -pi.
"""
import logging
import math
from typing import List

import numpy as np

from kuiper_isometry.kuiper_exception import AtomicInputError, ValidationError
from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.resources.circle_distribution import (
    TWO_PI, Arc, CircleDistribution, from_parts, wrap_angle,
)
from kuiper_isometry.resources.distribution import Distribution
from kuiper_isometry.utils.interpolation import convex_knots, find_tails, piecewise_linear_distribution

logger = logging.getLogger(__name__)

CARRIED_TOLERANCE = 1e-12


def arc_mass(c: CircleDistribution, arc: Arc) -> float:
    """c(A), honouring wraparound and endpoint flags."""
    if arc.full:
        return 1.0
    below_start = c.lifted(arc.start, not arc.start_closed)
    up_to_end = c.lifted(arc.end, arc.end_closed)
    return up_to_end - below_start


def circle_kuiper(c1: CircleDistribution, c2: CircleDistribution) -> float:
    """max |c1(A) - c2(A)| over arcs.

    Arc differences are differences of the lifted CDF difference at two cut positions, so the maximum is the
    spread max D - min D over knot values and left limits of both distributions.
    """
    knots = np.union1d(c1.theta, c2.theta)
    left1, right1 = c1.cdf_values(knots)
    left2, right2 = c2.cdf_values(knots)
    diffs = np.concatenate([left1 - left2, right1 - right2, [0.0]])
    return float(diffs.max() - diffs.min())


def rotate(c: CircleDistribution, theta: float) -> CircleDistribution:
    """Shift every angle by ``theta`` modulo 2pi.

    The shifted atoms and arcs are reassembled with ``from_parts``, which merges knots that wrapping moved within
    float noise of each other.
    """
    theta = wrap_angle(theta)
    if theta == 0:
        return c
    lengths = c.ends - c.theta
    charged = np.flatnonzero(c.seg > 0)
    return from_parts(
        atoms=[(t + theta, m) for t, m in zip(c.theta, c.atoms) if m > 0],
        arcs=[(c.theta[i] + theta, lengths[i], c.seg[i]) for i in charged],
    )


def _piece_on_circle(coefficients: np.ndarray):
    """theta -> m(tan(theta / 2)) and its derivative for rows (a, b, c, d) of fractional-linear pieces m."""

    def value(theta, owner):
        a, b, c, d = coefficients[owner].T
        s, co = np.sin(theta / 2), np.cos(theta / 2)
        return (a * s + b * co) / (c * s + d * co)

    def slope(theta, owner):
        a, b, c, d = coefficients[owner].T
        s, co = np.sin(theta / 2), np.cos(theta / 2)
        return (a * d - b * c) / (2 * (c * s + d * co) ** 2)

    return value, slope


def tau_transport(mu: Distribution, epsilon: float) -> CircleDistribution:
    """Circle image of an atom-free distribution within circle-Kuiper distance ``epsilon``.

    On a segment with CDF piece (at + b) / (ct + d) the circle CDF is (a sin(theta/2) + b cos(theta/2)) /
    (c sin(theta/2) + d cos(theta/2)), which only changes convexity at tan(theta/2) = c/d. Chords on the convex and
    concave parts are refined to within epsilon / 2, and the circle metric is at most twice the sup distance.

    Raises
    ------
    AtomicInputError
        mu has atoms.
    """
    if not epsilon > 0:
        raise ValidationError(f"tolerance must be positive, got {epsilon!r}")
    if not mu.is_continuous:
        raise AtomicInputError("tau transport is defined on continuous measures")

    def circle_cdf(theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            values = mu.cdf_float(np.tan(theta / 2))
        values = np.where(theta <= -math.pi, 0.0, values)
        return np.where(theta >= math.pi, 1.0, values)

    cells, coefficients = [], []
    for lo, hi, piece in mu.segments():
        if piece.is_constant:
            continue
        a, b, c, d = (float(x) for x in (piece.a, piece.b, piece.c, piece.d))
        cuts = [2 * math.atan(float(lo)), 2 * math.atan(float(hi))]
        if d != 0 and cuts[0] < 2 * math.atan(c / d) < cuts[1]:
            cuts.insert(1, 2 * math.atan(c / d))
        for start, end in zip(cuts, cuts[1:]):
            cells.append((start, end))
            coefficients.append((a, b, c, d))
    cells = np.array(cells)
    value, slope = _piece_on_circle(np.array(coefficients))
    knots = convex_knots(value, slope, cells[:, 0], cells[:, 1], epsilon / 2)

    theta = np.unique(np.concatenate([[-math.pi], knots]))
    theta = theta[theta < math.pi]
    values = np.maximum.accumulate(np.clip(circle_cdf(np.append(theta, math.pi)), 0.0, 1.0))
    values[0], values[-1] = 0.0, 1.0
    seg = np.diff(values)
    logger.debug("tau transport with %d knots at tolerance %g", theta.size, epsilon)
    return CircleDistribution(theta, np.zeros(seg.size), seg)


def tau_inverse_transport(c: CircleDistribution, epsilon: float) -> Distribution:
    """Line distribution t -> c([-pi, 2 arctan t]) within Kuiper distance ``epsilon``.

    On an arc of uniform density the line CDF is affine in arctan t, convex for t < 0 and concave for t > 0. Tails
    beyond epsilon / 4 are cut and chords are refined to within epsilon / 4.

    Raises
    ------
    AtomicInputError
        c has atoms.
    """
    if not (epsilon > 0) or math.isinf(epsilon):
        raise ValidationError(f"tolerance must be a positive number, got {epsilon!r}")
    if not c.is_continuous:
        raise AtomicInputError("tau inverse transport is defined on continuous measures")

    def line_cdf(t, owner=None):
        _, right = c.cdf_values(2 * np.arctan(np.asarray(t, dtype=float)))
        return right

    delta = epsilon / 4
    lo, hi = find_tails(line_cdf, delta)
    cuts = np.unique(np.concatenate([[lo, 0.0, hi], np.tan(c.theta[1:] / 2)]))
    cuts = cuts[(cuts >= lo) & (cuts <= hi)]
    starts, ends = cuts[:-1], cuts[1:]
    arc = np.clip(np.searchsorted(c.theta, 2 * np.arctan(0.5 * (starts + ends)), side="right") - 1,
                  0, c.theta.size - 1)
    rate = c.seg / (c.ends - c.theta)

    def slope(t, owner):
        return 2 * rate[arc[owner]] / (1 + t * t)

    knots = convex_knots(line_cdf, slope, starts, ends, delta)
    values = np.maximum.accumulate(np.clip(line_cdf(knots), 0.0, 1.0))
    values[0], values[-1] = 0.0, 1.0
    return piecewise_linear_distribution(knots, values)


def circle_null_arcs(c: CircleDistribution) -> List[Arc]:
    """Connected components of the circle minus the closed support, as open arcs."""
    n = c.theta.size
    # elements in cyclic order: knot 0, arc 0, knot 1, arc 1, ..., arc n-1
    null = np.empty(2 * n, dtype=bool)
    null[0::2] = c.atoms == 0
    null[1::2] = c.seg == 0
    if null.all():
        raise ValidationError("a probability measure cannot be null everywhere")
    first_positive = int(np.flatnonzero(~null)[0])
    arcs = []
    run: List[int] = []
    for step in range(1, 2 * n + 1):
        k = (first_positive + step) % (2 * n)
        if null[k]:
            run.append(k)
            continue
        arcs.extend(_run_to_arc(c, run))
        run = []
    return arcs


def _run_to_arc(c: CircleDistribution, run: List[int]) -> List[Arc]:
    # knots next to charged elements belong to the support closure
    while run and run[0] % 2 == 0:
        run = run[1:]
    while run and run[-1] % 2 == 0:
        run = run[:-1]
    if not run:
        return []
    start = c.theta[run[0] // 2]
    end = c.ends[run[-1] // 2]
    extent = float(np.mod(end - start, TWO_PI))
    if extent == 0:
        extent = TWO_PI
    return [Arc(start, extent, False, False)]


def is_carried_by(c: CircleDistribution, arc: Arc) -> bool:
    """c(arc) = 1 up to floating point."""
    return arc_mass(c, arc) >= 1 - CARRIED_TOLERANCE


def circle_unit_distance_by_components(c: CircleDistribution, other: CircleDistribution) -> bool:
    """Whether ``other`` is carried by a single component of the circle minus the support of ``c``."""
    return any(is_carried_by(other, arc) for arc in circle_null_arcs(c))


class CircleService(object):
    """
    The CircleService class wraps the circle operations with the profile tolerance for tau transport.
    """

    def __init__(self, session: KuiperSession):
        self._session = session
        self.epsilon = session.get_float("circle_epsilon")

    def arc_mass(self, c: CircleDistribution, arc: Arc) -> float:
        return arc_mass(c, arc)

    def circle_kuiper(self, c1: CircleDistribution, c2: CircleDistribution) -> float:
        return circle_kuiper(c1, c2)

    def rotate(self, c: CircleDistribution, theta: float) -> CircleDistribution:
        return rotate(c, theta)

    def tau_transport(self, mu: Distribution, epsilon: float = None) -> CircleDistribution:
        return tau_transport(mu, self.epsilon if epsilon is None else epsilon)

    def tau_inverse_transport(self, c: CircleDistribution, epsilon: float = None) -> Distribution:
        return tau_inverse_transport(c, self.epsilon if epsilon is None else epsilon)

    def null_arcs(self, c: CircleDistribution) -> List[Arc]:
        return circle_null_arcs(c)

    def from_parts(self, atoms=(), arcs=()) -> CircleDistribution:
        return from_parts(atoms, arcs)
