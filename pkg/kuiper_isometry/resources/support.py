"""
Support structure, conditioning and quantization of a Distribution.
"""
import logging
from fractions import Fraction
from typing import List

from attrs import frozen

from kuiper_isometry.kuiper_exception import NullIntervalError, ValidationError
from kuiper_isometry.resources.distribution import Distribution, Node, from_atoms, segment_probe
from kuiper_isometry.resources.interval import Interval, merge_intervals
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF, is_finite

logger = logging.getLogger(__name__)


@frozen
class CoIntervalSupport:
    """C_mu with its convex hull and the bounded components of its complement.

    Attributes
    ----------
    components : list of Interval
        Disjoint, non-touching pieces of C_mu in ascending order; single points appear as degenerate intervals.
    conv_hull : Interval
        Smallest interval containing C_mu, endpoints open exactly when not attained.
    bounded_gaps : list of Interval
        Bounded connected components of R minus C_mu, each of mass zero.
    """

    components: List[Interval]
    conv_hull: Interval
    bounded_gaps: List[Interval]

    @property
    def outer(self) -> List[Interval]:
        return self.conv_hull.complement()

    def contains(self, t) -> bool:
        return any(c.contains(t) for c in self.components)


def _positive_segments(mu: Distribution):
    for lo, hi, piece in mu.segments():
        if not piece.is_constant:
            yield lo, hi


def closed_support(mu: Distribution) -> List[Interval]:
    """S_mu as a sorted list of disjoint closed intervals and singletons."""
    parts = [Interval.closed(lo, hi) for lo, hi in _positive_segments(mu)]
    parts.extend(Interval.singleton(t) for t, _ in mu.atoms)
    return merge_intervals(parts)


def co_interval_support(mu: Distribution) -> CoIntervalSupport:
    """R minus the union of all maximal nondegenerate null intervals.

    A segment point belongs to C_mu when its CDF piece is strictly increasing; a node belongs to C_mu when it carries
    an atom or both neighbouring pieces are strictly increasing.
    """
    parts = [Interval.open(lo, hi) for lo, hi in _positive_segments(mu)]
    pieces = mu.pieces
    for i, node in enumerate(mu.nodes):
        if node.atom > 0 or (not pieces[i].is_constant and not pieces[i + 1].is_constant):
            parts.append(Interval.singleton(node.t))
    components = merge_intervals(parts)

    first, last = components[0], components[-1]
    conv_hull = Interval(first.lo, last.hi, first.lo_closed, last.hi_closed)
    gaps = [
        Interval(left.hi, right.lo, not left.hi_closed, not right.lo_closed)
        for left, right in zip(components[:-1], components[1:])
    ]
    logger.debug("co-interval support of %s: %d components, %d bounded gaps", mu, len(components), len(gaps))
    return CoIntervalSupport(components, conv_hull, gaps)


def condition_on_interval(mu: Distribution, interval: Interval) -> Distribution:
    """The conditional measure A -> mu(A n I) / mu(I).

    Raises
    ------
    NullIntervalError
        mu(I) = 0.
    """
    mass = mu.interval_mass(interval)
    if mass == 0:
        raise NullIntervalError(f"conditioning on null interval {interval}")

    closure = Interval.closed(interval.lo, interval.hi)
    ts = {t for t in mu.breakpoints if closure.contains(t)}
    ts.update(t for t in (interval.lo, interval.hi) if is_finite(t))
    ts = sorted(ts)

    def restricted(upper: Interval) -> Fraction:
        part = interval.intersect(upper)
        return mu.interval_mass(part) / mass if part is not None else Fraction(0)

    nodes = [
        Node(t, restricted(Interval(NEG_INF, t, False, False)), restricted(Interval(NEG_INF, t, False, True)))
        for t in ts
    ]

    if not is_finite(interval.lo):
        below = Fraction(0)
    elif interval.lo_closed:
        below = mu.cdf_left(interval.lo)
    else:
        below = mu.cdf(interval.lo)

    bounds = [NEG_INF] + ts + [POS_INF]
    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        probe = segment_probe(lo, hi)
        if interval.contains(probe):
            pieces.append(mu.piece_at(probe).affine(1 / mass, -below / mass))
        else:
            pieces.append(Moebius.constant(0 if probe < interval.lo else 1))
    return Distribution(nodes, pieces)


def quantile_above(mu: Distribution, p) -> object:
    """inf{t : F(t) > p} for p in [0, 1); may be -inf when the support is unbounded below."""
    p = Fraction(p)
    segments = list(mu.segments())
    for i, (lo, hi, piece) in enumerate(segments):
        if piece.limit(hi, "left") > p:
            if p <= piece.limit(lo, "right"):
                return lo
            return piece.inverse()(p)
        if i < len(mu.nodes) and mu.nodes[i].right > p:
            return mu.nodes[i].t
    raise ValidationError(f"quantile level {p} outside [0, 1)")


def quantize(mu: Distribution, n: int) -> Distribution:
    """Purely atomic approximation with n atoms of mass 1/n at the left ends of the quantile cells.

    When the support is unbounded below the first cell has no left end; its atom is put on the next quantile point
    (or on the first node when n = 1).
    """
    if n < 1:
        raise ValidationError(f"quantization needs n >= 1, got {n}")
    points = [quantile_above(mu, Fraction(i, n)) for i in range(n)]
    if not is_finite(points[0]):
        points[0] = points[1] if n >= 2 else mu.breakpoints[0]
    return from_atoms((t, Fraction(1, n)) for t in points)


def is_absolutely_continuous_wrt(nu: Distribution, mu: Distribution) -> bool:
    """Whether every mu-null set is nu-null within the representable class.

    Atoms of nu must sit on atoms of mu and every increasing segment of nu must lie inside the closure of a run of
    increasing segments of mu.
    """
    if any(mu.atom_at(t) == 0 for t, _ in nu.atoms):
        return False
    hulls = merge_intervals(Interval.closed(lo, hi) for lo, hi in _positive_segments(mu))
    for lo, hi in _positive_segments(nu):
        segment = Interval.open(lo, hi)
        if not any(h.contains_interval(segment) for h in hulls):
            return False
    return True
