"""
Certified piecewise-linear interpolation of continuous CDFs evaluated in double precision.

Two certificates are used. For a black-box CDF F the grid is refined until consecutive increments are at most delta,
and monotonicity of F bounds the error of any interpolant between grid points. When F is known to be convex or
concave on each of a few cells, as for the tau images of fractional-linear pieces, the chord error follows from the
endpoint slopes alone and the knots only need to resolve the curvature.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, Tuple

import numpy as np

from kuiper_isometry.kuiper_exception import ValidationError
from kuiper_isometry.resources.distribution import Distribution, Node
from kuiper_isometry.resources.moebius import Moebius

logger = logging.getLogger(__name__)

CdfFunction = Callable[[np.ndarray], np.ndarray]
CellFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

_MAX_ABSCISSA = 1e300
_MAX_SPLIT = 64


def find_tails(cdf: CdfFunction, delta: float, start: float = 1.0) -> Tuple[float, float]:
    """Points lo < hi with F(lo) <= delta and F(hi) >= 1 - delta, found by doubling."""
    lo, hi = -abs(start), abs(start)
    while cdf(np.array([lo]))[0] > delta:
        lo *= 2
        if -lo > _MAX_ABSCISSA:
            raise ValidationError("left tail of the CDF never drops below the requested tolerance")
    while cdf(np.array([hi]))[0] < 1 - delta:
        hi *= 2
        if hi > _MAX_ABSCISSA:
            raise ValidationError("right tail of the CDF never reaches the requested tolerance")
    return lo, hi


def refine_grid(cdf: CdfFunction, lo: float, hi: float, max_increment: float,
                initial_points: int = 1025, max_rounds: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """Split grid cells of [lo, hi] until every CDF increment is at most ``max_increment``.

    A wide cell is cut into as many equal parts as its increment asks for, at most 64 per round.

    Raises
    ------
    ValidationError
        A cell shrank to adjacent floats without meeting the bound, i.e. the CDF jumps there.
    """
    ts = np.linspace(lo, hi, initial_points)
    values = np.asarray(cdf(ts), dtype=float)
    for round_number in range(max_rounds):
        increments = np.diff(values)
        wide = np.flatnonzero(increments > max_increment)
        if wide.size == 0:
            logger.debug("grid certified after %d rounds with %d points", round_number, ts.size)
            return ts, np.maximum.accumulate(values)
        mids = 0.5 * (ts[wide] + ts[wide + 1])
        if np.any((mids <= ts[wide]) | (mids >= ts[wide + 1])):
            raise ValidationError(f"CDF jumps near t={ts[wide][0]!r}, it cannot be interpolated continuously")
        parts = np.clip(np.ceil(increments[wide] / max_increment), 2, _MAX_SPLIT).astype(np.int64)
        counts = parts - 1
        cell = np.repeat(wide, counts)
        step = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts) + 1
        new_ts = ts[cell] + (ts[cell + 1] - ts[cell]) * (step / np.repeat(parts, counts))
        ts = np.concatenate([ts, new_ts])
        values = np.concatenate([values, np.asarray(cdf(new_ts), dtype=float)])
        ts, first = np.unique(ts, return_index=True)
        values = values[first]
    raise ValidationError(f"grid refinement did not converge in {max_rounds} rounds")


def thin_knots(ts: np.ndarray, values: np.ndarray, tolerance: float) -> np.ndarray:
    """Indices of a subset of knots, ends included, whose interpolant stays within ``tolerance`` of every value.

    Each round splits every offending span at its worst point.
    """
    keep = np.array([0, ts.size - 1])
    while True:
        error = np.abs(values - np.interp(ts, ts[keep], values[keep]))
        bad = np.flatnonzero(error > tolerance)
        if bad.size == 0:
            return keep
        span = np.searchsorted(keep, bad, side="right") - 1
        order = np.lexsort((-error[bad], span))
        _, first = np.unique(span[order], return_index=True)
        keep = np.union1d(keep, bad[order][first])


def certified_grid(cdf: CdfFunction, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    """Knots of a piecewise-linear CDF within Kuiper distance ``epsilon`` of ``cdf``.

    Tail masses and grid increments are at most epsilon / 8 and thinning moves the interpolant by at most epsilon / 8
    at the grid points, so the sup distance is at most 3 epsilon / 8 and the Kuiper distance, at most twice that,
    stays below epsilon. The returned values start at 0 and end at 1.
    """
    if not (epsilon > 0) or math.isinf(epsilon):
        raise ValidationError(f"tolerance must be a positive number, got {epsilon!r}")
    delta = epsilon / 8
    lo, hi = find_tails(cdf, delta)
    ts, values = refine_grid(cdf, lo, hi, delta)
    values = np.clip(values, 0.0, 1.0)
    values[0], values[-1] = 0.0, 1.0
    keep = thin_knots(ts, values, delta)
    logger.debug("thinned %d grid points to %d knots", ts.size, keep.size)
    return ts[keep], values[keep]


def convex_knots(value: CellFunction, slope: CellFunction, lo, hi, tolerance: float,
                 max_rounds: int = 100) -> np.ndarray:
    """Knots refining the cells [lo[k], hi[k]] until every chord is within ``tolerance`` of the function.

    ``value(x, owner)`` and ``slope(x, owner)`` evaluate f and f' at points x of the initial cells ``owner``; f must
    be convex or concave on each initial cell. Such an f lies between its chord over [a, b] and the two endpoint
    tangents, which bounds the chord error by (b - a) (s - f'(a)) (f'(b) - s) / (f'(b) - f'(a)) for chord slope s.

    Raises
    ------
    ValidationError
        A cell shrank to adjacent floats without meeting the bound.
    """
    a, b = np.atleast_1d(np.asarray(lo, dtype=float)), np.atleast_1d(np.asarray(hi, dtype=float))
    owner = np.arange(a.size)
    knots = [a, b]
    for round_number in range(max_rounds):
        if a.size == 0:
            result = np.unique(np.concatenate(knots))
            logger.debug("chord tolerance met after %d rounds with %d knots", round_number, result.size)
            return result
        width = b - a
        da, db = slope(a, owner), slope(b, owner)
        chord = (value(b, owner) - value(a, owner)) / width
        spread = db - da
        flat = spread == 0
        gap = np.where(flat, 0.0, np.abs((chord - da) * (db - chord) / np.where(flat, 1.0, spread))) * width
        wide = gap > tolerance
        a, b, owner = a[wide], b[wide], owner[wide]
        mids = 0.5 * (a + b)
        if np.any((mids <= a) | (mids >= b)):
            raise ValidationError(f"chord tolerance {tolerance!r} is out of reach near t={a[0]!r}")
        knots.append(mids)
        a, b, owner = np.concatenate([a, mids]), np.concatenate([mids, b]), np.concatenate([owner, owner])
    raise ValidationError(f"chord refinement did not converge in {max_rounds} rounds")


def piecewise_linear_distribution(ts: np.ndarray, values: np.ndarray) -> Distribution:
    """The continuous distribution whose CDF interpolates (ts, values) linearly.

    ``values`` must be nondecreasing from 0 to 1; knots are converted to rationals exactly.
    """
    knots = [Fraction(float(t)) for t in ts]
    levels = [Fraction(float(v)) for v in values]
    if levels[0] != 0 or levels[-1] != 1:
        raise ValidationError("interpolated CDF must run from 0 to 1")
    nodes = [Node(t, v, v) for t, v in zip(knots, levels)]
    pieces = [Moebius.constant(0)]
    for (t0, v0), (t1, v1) in zip(zip(knots, levels), zip(knots[1:], levels[1:])):
        slope = (v1 - v0) / (t1 - t0)
        pieces.append(Moebius.linear(slope, v0 - slope * t0))
    pieces.append(Moebius.constant(1))
    return Distribution(nodes, pieces)
