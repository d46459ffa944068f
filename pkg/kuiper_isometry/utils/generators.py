"""
Seeded random distributions and maps.

Every draw is an integer draw from a numpy Generator, so generated objects are exact. Trial generators are spawned
from one SeedSequence, which keeps trial ``i`` reproducible regardless of how trials are scheduled.
"""
import math
from fractions import Fraction
from typing import List, Optional

import numpy as np

from kuiper_isometry.resources.circle_distribution import TWO_PI, CircleDistribution, from_parts
from kuiper_isometry.resources.distribution import Distribution, Node, make_dirac
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.monotone_map import MonotoneMap, compose, linear_map, pwl_map, r_map
from kuiper_isometry.resources.scalars import is_finite

GRID_DENOMINATOR = 4
GRID_HALF_WIDTH = 10
WARPS = (Fraction(1, 3), Fraction(1, 2), Fraction(2), Fraction(3))


def trial_generators(seed: int, count: int) -> List[np.random.Generator]:
    """One independent Generator per trial index."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def random_rational(rng: np.random.Generator, lo=-GRID_HALF_WIDTH, hi=GRID_HALF_WIDTH,
                    denominator: int = GRID_DENOMINATOR) -> Fraction:
    lo, hi = Fraction(lo), Fraction(hi)
    steps = int((hi - lo) * denominator)
    return lo + Fraction(int(rng.integers(0, steps + 1)), denominator)


def random_points(rng: np.random.Generator, count: int, lo=None, hi=None) -> List[Fraction]:
    """``count`` distinct sorted rationals on a grid over [lo, hi]."""
    lo = Fraction(-GRID_HALF_WIDTH) if lo is None else Fraction(lo)
    hi = Fraction(GRID_HALF_WIDTH) if hi is None else Fraction(hi)
    slots = max(int((hi - lo) * GRID_DENOMINATOR), 1)
    count = min(count, slots + 1)
    chosen = np.sort(rng.choice(slots + 1, size=count, replace=False))
    return [lo + (hi - lo) * Fraction(int(k), slots) for k in chosen]


def random_weights(rng: np.random.Generator, count: int) -> List[Fraction]:
    """Positive rationals summing to exactly 1."""
    raw = [int(w) for w in rng.integers(1, 10, size=count)]
    total = sum(raw)
    return [Fraction(w, total) for w in raw]


def _window(within: Optional[Interval]):
    if within is None:
        return None, None
    lo, hi = within.lo, within.hi
    if not is_finite(lo) and not is_finite(hi):
        return None, None
    if not is_finite(lo):
        return hi - 2 * GRID_HALF_WIDTH, hi
    if not is_finite(hi):
        return lo, lo + 2 * GRID_HALF_WIDTH
    return lo, hi


def random_distribution(rng: np.random.Generator, max_nodes: int = 6, atoms: bool = True, segments: bool = True,
                        tails: bool = True, within: Optional[Interval] = None) -> Distribution:
    """A distribution mixing atoms, uniform segments, null gaps and Moebius tails.

    ``within`` confines the support to a closed interval, in which case there are no tails. With ``atoms`` off the
    result is atom-free; with ``segments`` and ``tails`` off it is purely atomic.
    """
    if within is not None and within.is_degenerate:
        return make_dirac(within.lo)
    lo, hi = _window(within)
    tails = tails and within is None
    count = int(rng.integers(1 if atoms else 2, max(max_nodes, 2) + 1))
    points = random_points(rng, count, lo, hi)

    # charged elements: ("atom", i), ("seg", i) for (p_i, p_i+1), ("left",) and ("right",) tails
    elements = []
    if atoms:
        elements += [("atom", i) for i in range(len(points)) if rng.integers(0, 2)]
    if segments:
        elements += [("seg", i) for i in range(len(points) - 1) if rng.integers(0, 3)]
    if tails:
        elements += [(side, 0) for side in ("left", "right") if rng.integers(0, 3) == 0]
    if not elements:
        elements = [("seg", 0)] if segments and len(points) > 1 else [("atom", int(rng.integers(0, len(points))))]
    weights = dict(zip(elements, random_weights(rng, len(elements))))

    first, last = points[0], points[-1]
    left_mass = weights.get(("left", 0), Fraction(0))
    right_mass = weights.get(("right", 0), Fraction(0))
    pieces = [Moebius(0, left_mass, -1, 1 + first) if left_mass else Moebius.constant(0)]
    nodes = []
    running = left_mass
    for i, t in enumerate(points):
        atom = weights.get(("atom", i), Fraction(0))
        nodes.append(Node(t, running, running + atom))
        running += atom
        if i + 1 < len(points):
            mass = weights.get(("seg", i), Fraction(0))
            slope = mass / (points[i + 1] - t)
            pieces.append(Moebius.linear(slope, running - slope * t))
            running += mass
    if right_mass:
        pieces.append(Moebius(1, 1 - last - right_mass, 1, 1 - last))
    else:
        pieces.append(Moebius.constant(1))
    return Distribution(nodes, pieces)


def random_pwl_distribution(rng: np.random.Generator, max_nodes: int = 6, atoms: bool = True) -> Distribution:
    """Piecewise-linear CDF with optional atoms, the class on which every metric is exact."""
    return random_distribution(rng, max_nodes, atoms=atoms, tails=False)


def _random_slope(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5)))


def random_pwl_map(rng: np.random.Generator, max_pieces: int = 5, increasing: Optional[bool] = None) -> MonotoneMap:
    """Piecewise-linear homeomorphism of R with at most ``max_pieces`` pieces."""
    if increasing is None:
        increasing = bool(rng.integers(0, 2))
    count = int(rng.integers(1, max(max_pieces, 2)))
    ts = random_points(rng, count)
    y = random_rational(rng)
    knots = []
    for t in ts:
        knots.append((t, y))
        y += Fraction(int(rng.integers(1, 9)), GRID_DENOMINATOR)
    if not increasing:
        knots = [(t, -y) for t, y in knots]
    sign = 1 if increasing else -1
    return pwl_map(knots, sign * _random_slope(rng), sign * _random_slope(rng))


def _warp(k: Fraction) -> Moebius:
    """s -> s / ((1 - k) s + k), an increasing Moebius self-map of [0, 1] for k > 0."""
    return Moebius(1, 0, 1 - k, k)


def random_moebius_map(rng: np.random.Generator, max_pieces: int = 5,
                       increasing: Optional[bool] = None) -> MonotoneMap:
    """Piecewise-Moebius homeomorphism of R: a piecewise-linear map whose bounded pieces are randomly warped."""
    base = random_pwl_map(rng, max_pieces, increasing=True)
    pieces = list(base.pieces)
    bounds = list(base.breaks)
    for i in range(1, len(pieces) - 1):
        if not rng.integers(0, 2):
            continue
        lo, hi = bounds[i - 1], bounds[i]
        y_lo, y_hi = base(lo), base(hi)
        to_unit = Moebius.linear(1 / (hi - lo), -lo / (hi - lo))
        from_unit = Moebius.linear(y_hi - y_lo, y_lo)
        pieces[i] = from_unit.compose(_warp(WARPS[int(rng.integers(0, len(WARPS)))])).compose(to_unit)
    g = MonotoneMap(bounds, pieces)
    if increasing is None:
        increasing = bool(rng.integers(0, 2))
    return g if increasing else compose(linear_map(-1), g)


def random_circle_distribution(rng: np.random.Generator, max_nodes: int = 6, atoms: bool = True,
                               slots: int = 32) -> CircleDistribution:
    """Atoms and uniform arcs between consecutive grid angles; uncharged arcs leave null gaps."""
    count = int(rng.integers(2, max(max_nodes, 2) + 1))
    angles = [-math.pi + TWO_PI * int(k) / slots for k in np.sort(rng.choice(slots, size=count, replace=False))]
    elements = []
    if atoms:
        elements += [("atom", i) for i in range(count) if rng.integers(0, 2)]
    elements += [("arc", i) for i in range(count) if rng.integers(0, 3)]
    if not any(kind == "arc" for kind, _ in elements) and not atoms:
        elements.append(("arc", int(rng.integers(0, count))))
    if not elements:
        elements.append(("atom", int(rng.integers(0, count))))
    weights = random_weights(rng, len(elements))
    parts_atoms, parts_arcs = [], []
    for (kind, i), w in zip(elements, weights):
        if kind == "atom":
            parts_atoms.append((angles[i], float(w)))
        else:
            extent = (angles[(i + 1) % count] - angles[i]) % TWO_PI
            parts_arcs.append((angles[i], extent, float(w)))
    return from_parts(parts_atoms, parts_arcs)


def random_map(rng: np.random.Generator, max_pieces: int = 5) -> MonotoneMap:
    """A piecewise-linear or piecewise-Moebius homeomorphism, composed with an r-pole half of the time."""
    g = random_moebius_map(rng, max_pieces) if rng.integers(0, 2) else random_pwl_map(rng, max_pieces)
    if rng.integers(0, 2):
        return compose(g, r_map(random_rational(rng)))
    return g
