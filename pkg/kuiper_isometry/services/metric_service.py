"""
Kolmogorov-Smirnov, Kuiper and total-variation distances on piecewise-Moebius distributions.

All three are evaluated on the signed CDF difference D = F_mu - F_nu. D is right-continuous with left limits at the
merged nodes and smooth in between, so its extremes sit at node values, node left limits, the two vanishing tails and
the interior critical points of each piece difference. A "cut" below is one of these candidate positions, standing for
the half-line (-inf, t] or (-inf, t) whose mass difference is D at that position.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from attrs import frozen

from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.resources.distribution import Distribution, segment_probe
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF, Number, is_exact, is_finite
from kuiper_isometry.resources.witness import Witness

logger = logging.getLogger(__name__)

# rank of a cut among cuts at the same abscissa
_LEFT, _POINT, _RIGHT = 0, 1, 2

_SAMPLES_PER_SEGMENT = 64


@frozen
class _Cut:
    t: object
    rank: int
    value: Number

    @property
    def key(self):
        return self.t, self.rank


def _merged_nodes(mu: Distribution, nu: Distribution) -> List[Fraction]:
    return sorted(set(mu.breakpoints) | set(nu.breakpoints))


def _merged_segments(ts: Sequence[Fraction]):
    bounds = [NEG_INF] + list(ts) + [POS_INF]
    return zip(bounds[:-1], bounds[1:])


def _cuts(mu: Distribution, nu: Distribution) -> List[_Cut]:
    ts = _merged_nodes(mu, nu)
    cuts = [_Cut(NEG_INF, _RIGHT, Fraction(0)), _Cut(POS_INF, _LEFT, Fraction(0))]
    for t in ts:
        cuts.append(_Cut(t, _LEFT, mu.cdf_left(t) - nu.cdf_left(t)))
        cuts.append(_Cut(t, _RIGHT, mu.cdf(t) - nu.cdf(t)))
    for lo, hi in _merged_segments(ts):
        probe = segment_probe(lo, hi)
        p, q = mu.piece_at(probe), nu.piece_at(probe)
        for root in p.derivative_crossings(q):
            if lo < root.value < hi:
                cuts.append(_Cut(root.value, _POINT, p(root.value) - q(root.value)))
    cuts.sort(key=lambda c: c.key)
    logger.debug("%d candidate cuts over %d merged nodes", len(cuts), len(ts))
    return cuts


def _one_sided_sups(cuts: List[_Cut]) -> Tuple[Number, Number]:
    upper = max((c.value for c in cuts), default=Fraction(0))
    lower = min((c.value for c in cuts), default=Fraction(0))
    return max(upper, Fraction(0)), max(-lower, Fraction(0))


def ks_distance(mu: Distribution, nu: Distribution) -> Number:
    """sup_t |F_mu(t) - F_nu(t)|."""
    s_plus, s_minus = _one_sided_sups(_cuts(mu, nu))
    return max(s_plus, s_minus)


def kuiper_distance(mu: Distribution, nu: Distribution) -> Number:
    """sup(F_mu - F_nu) + sup(F_nu - F_mu), each one-sided sup being at least 0."""
    s_plus, s_minus = _one_sided_sups(_cuts(mu, nu))
    return s_plus + s_minus


def _interval_between(lower: _Cut, upper: _Cut) -> Interval:
    """H(upper) minus H(lower) for half-lines H(lower) strictly inside H(upper)."""
    if not is_finite(lower.t):
        lo, lo_closed = NEG_INF, False
    else:
        lo, lo_closed = lower.t, lower.rank == _LEFT or lower.rank == _POINT
    if not is_finite(upper.t):
        hi, hi_closed = POS_INF, False
    else:
        hi, hi_closed = upper.t, upper.rank != _LEFT
    return Interval(lo, hi, lo_closed, hi_closed)


def _witness_rank(interval: Interval):
    open_ends = (not interval.lo_closed) + (not interval.hi_closed)
    return open_ends, interval.lo, interval.hi


def kuiper_witness(mu: Distribution, nu: Distribution) -> Tuple[Witness, Number]:
    """An interval I with |mu(I) - nu(I)| equal to the Kuiper distance, and that distance.

    Among maximising intervals the one with fewest open endpoints wins, then the smallest (lo, hi). At distance 0 a
    singleton of mass zero under both measures is returned.
    """
    cuts = _cuts(mu, nu)
    s_plus, s_minus = _one_sided_sups(cuts)
    distance = s_plus + s_minus
    if distance == 0:
        x = min(_merged_nodes(mu, nu)) - 1
        return Witness(Interval.singleton(x), Fraction(0)), distance

    tops = [c for c in cuts if c.value == s_plus]
    bottoms = [c for c in cuts if c.value == -s_minus]

    best: Optional[Witness] = None
    for top in tops:
        for bottom in bottoms:
            if top.key == bottom.key:
                continue
            if bottom.key < top.key:
                interval, value = _interval_between(bottom, top), top.value - bottom.value
            else:
                interval, value = _interval_between(top, bottom), bottom.value - top.value
            if best is None or _witness_rank(interval) < _witness_rank(best.interval):
                best = Witness(interval, value)
    return best, distance


def tv_distance(mu: Distribution, nu: Distribution) -> Number:
    """sup_B |mu(B) - nu(B)|, the total positive part of the signed measure mu - nu.

    Atoms contribute their positive mass differences. On each merged segment the continuous part is split at the sign
    changes of the density difference, and the CDF pieces themselves serve as closed-form antiderivatives.
    """
    ts = _merged_nodes(mu, nu)
    total: Number = Fraction(0)
    for t in ts:
        total += max(mu.atom_at(t) - nu.atom_at(t), Fraction(0))
    for lo, hi in _merged_segments(ts):
        probe = segment_probe(lo, hi)
        p, q = mu.piece_at(probe), nu.piece_at(probe)
        stops = [lo] + sorted(r.value for r in p.derivative_crossings(q) if lo < r.value < hi) + [hi]
        for a, b in zip(stops[:-1], stops[1:]):
            increase = (p.limit(b, "left") - q.limit(b, "left")) - (p.limit(a, "right") - q.limit(a, "right"))
            if increase > 0:
                total += increase
    return total


def _segment_samples(lo, hi) -> List[Fraction]:
    if is_finite(lo) and is_finite(hi):
        step = (hi - lo) / (_SAMPLES_PER_SEGMENT + 1)
        return [lo + k * step for k in range(1, _SAMPLES_PER_SEGMENT + 1)]
    if not is_finite(lo) and not is_finite(hi):
        return [Fraction(k - _SAMPLES_PER_SEGMENT // 2) for k in range(_SAMPLES_PER_SEGMENT)]
    spread = [Fraction(k * k, 4) for k in range(1, _SAMPLES_PER_SEGMENT + 1)]
    return [hi - s for s in spread] if is_finite(hi) else [lo + s for s in spread]


def _endpoints(points: List[Fraction], bounded: bool):
    finite = [(t, closed) for t in points for closed in (True, False)]
    if bounded:
        return finite, finite
    return [(NEG_INF, False)] + finite, finite + [(POS_INF, False)]


def _signed_mass(mu: Distribution, nu: Distribution, half_line: Optional[Interval]) -> Fraction:
    if half_line is None:
        return Fraction(0)
    return mu.interval_mass(half_line) - nu.interval_mass(half_line)


def _enumerate_sup(mu: Distribution, nu: Distribution, bounded: bool) -> Number:
    ts = _merged_nodes(mu, nu)
    approximate = not (mu.is_piecewise_linear and nu.is_piecewise_linear)
    points = list(ts)
    if approximate:
        for lo, hi in _merged_segments(ts):
            points.extend(_segment_samples(lo, hi))
        points = sorted(set(points))
    if bounded:
        # finite stand-ins for the infinite ends; exact whenever both supports are compact
        points = [points[0] - 1] + points + [points[-1] + 1]
    lowers, uppers = _endpoints(points, bounded)

    # mu(I) - nu(I) = (signed mass up to the upper end) - (signed mass strictly below the lower end)
    below = [
        _signed_mass(mu, nu, Interval(NEG_INF, t, False, not closed) if is_finite(t) else None)
        for t, closed in lowers
    ]
    upto = [
        _signed_mass(mu, nu, Interval(NEG_INF, t, False, closed) if is_finite(t) else None)
        for t, closed in uppers
    ]

    if approximate:
        lower_t = np.array([float(t) for t, _ in lowers])
        lower_closed = np.array([closed for _, closed in lowers])
        upper_t = np.array([float(t) for t, _ in uppers])
        upper_closed = np.array([closed for _, closed in uppers])
        valid = (upper_t[None, :] > lower_t[:, None]) | (
            (upper_t[None, :] == lower_t[:, None]) & lower_closed[:, None] & upper_closed[None, :]
        )
        gaps = np.abs(np.array([float(v) for v in upto])[None, :] - np.array([float(v) for v in below])[:, None])
        return float(np.max(np.where(valid, gaps, 0.0)))

    best = Fraction(0)
    for (lo, lo_closed), low_value in zip(lowers, below):
        for (hi, hi_closed), up_value in zip(uppers, upto):
            if hi < lo or (hi == lo and not (lo_closed and hi_closed)):
                continue
            value = abs(up_value - low_value)
            if value > best:
                best = value
    return best


def brute_force_interval_sup(mu: Distribution, nu: Distribution) -> Number:
    """max |mu(I) - nu(I)| over every interval with endpoints among the merged nodes and the infinite ends.

    All four openness combinations and the degenerate singletons are enumerated. When a Moebius piece is present the
    endpoint set is enlarged by sample points on every segment and the result is returned as a float to mark it
    approximate.
    """
    return _enumerate_sup(mu, nu, bounded=False)


def bounded_interval_sup(mu: Distribution, nu: Distribution) -> Number:
    """Like :func:`brute_force_interval_sup` restricted to bounded intervals."""
    return _enumerate_sup(mu, nu, bounded=True)


def dirac_distance(mu: Distribution, x) -> Number:
    """d_Ku(mu, delta_x) = 1 - mu({x})."""
    return 1 - mu.interval_mass(Interval.singleton(x))


METRICS = {
    "kuiper": kuiper_distance,
    "ks": ks_distance,
    "tv": tv_distance,
}


class MetricService(object):
    """
    Session-aware access to the distance computations.

    The service reads the comparison tolerances from the active profile so that approximate results (those computed
    through irrational critical points) can be compared consistently by callers and by the verification suites.
    """

    def __init__(self, session: KuiperSession):
        self._session = session
        self.exact_tolerance = session.get_float("exact_tolerance")

    def distance(self, metric: str, mu: Distribution, nu: Distribution) -> Number:
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric!r}, expected one of {sorted(METRICS)}")
        value = METRICS[metric](mu, nu)
        if not is_exact(value):
            logger.info("%s distance computed through approximate roots: %r", metric, value)
        return value

    def ks_distance(self, mu: Distribution, nu: Distribution) -> Number:
        return self.distance("ks", mu, nu)

    def kuiper_distance(self, mu: Distribution, nu: Distribution) -> Number:
        return self.distance("kuiper", mu, nu)

    def tv_distance(self, mu: Distribution, nu: Distribution) -> Number:
        return self.distance("tv", mu, nu)

    def kuiper_witness(self, mu: Distribution, nu: Distribution) -> Tuple[Witness, Number]:
        witness, value = kuiper_witness(mu, nu)
        logger.debug("kuiper witness %s for distance %s", witness, value)
        return witness, value

    def dirac_distance(self, mu: Distribution, x) -> Number:
        return dirac_distance(mu, x)

    def distance_matrix(self, metric: str, distributions: Sequence[Distribution]) -> List[List[Number]]:
        """Symmetric matrix of pairwise distances."""
        n = len(distributions)
        matrix: List[List[Number]] = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                matrix[i][j] = matrix[j][i] = self.distance(metric, distributions[i], distributions[j])
        return matrix

    def agrees(self, left: Number, right: Number) -> bool:
        """Exact equality for exact values, else agreement within the configured tolerance."""
        if is_exact(left) and is_exact(right):
            return left == right
        return abs(float(left) - float(right)) <= self.exact_tolerance
