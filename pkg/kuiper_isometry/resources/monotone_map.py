"""
Piecewise-Moebius bijections of the line and map oracles.

A MonotoneMap is defined on R minus a finite set of exceptional domain points and maps it bijectively onto R minus a
finite set of exceptional range points. Every piece has the same orientation; the map itself need not be globally
monotone (t -> 1/t jumps from -inf to +inf at 0), which is why exceptional points exist at all.
"""
import bisect
import math
from fractions import Fraction
from typing import Callable, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from attrs import frozen, field

from kuiper_isometry.kuiper_exception import OracleError, ValidationError
from kuiper_isometry.resources.distribution import segment_probe
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.scalars import ExtReal, NEG_INF, POS_INF, is_finite, to_ext_real, to_rational


def _uncovered_points(tiles: List[Interval]) -> List[Fraction]:
    """Finite points of R missed by a family of intervals that must otherwise tile R without overlap."""
    tiles = sorted(tiles, key=lambda i: (i.lo, not i.lo_closed))
    missing = []
    cursor, covered = NEG_INF, True
    for tile in tiles:
        if tile.lo < cursor or (tile.lo == cursor and is_finite(cursor) and covered and tile.lo_closed):
            raise ValidationError(f"piece ranges overlap near {tile}")
        if tile.lo > cursor:
            raise ValidationError(f"map is not onto: nothing maps into ({cursor}, {tile.lo})")
        if is_finite(cursor) and not covered and not tile.lo_closed:
            missing.append(cursor)
        cursor, covered = tile.hi, tile.hi_closed
    if cursor != POS_INF:
        raise ValidationError(f"map is not onto: nothing maps above {cursor}")
    return missing


@frozen
class MonotoneMap:
    """A piecewise-Moebius bijection R minus exceptional_domain -> R minus exceptional_range.

    ``pieces[i]`` acts on the open segment between ``breaks[i-1]`` and ``breaks[i]`` (unbounded at both ends). A
    non-exceptional break is mapped by continuity.
    """

    breaks: Tuple[Fraction, ...] = field(converter=lambda bs: tuple(to_rational(b) for b in bs))
    pieces: Tuple[Moebius, ...] = field(converter=tuple)
    exceptional_domain: FrozenSet[Fraction] = field(
        factory=frozenset, converter=lambda ps: frozenset(to_rational(p) for p in ps)
    )
    increasing: bool = field()
    exceptional_range: FrozenSet[Fraction] = field(init=False, eq=False, repr=False)

    @increasing.default
    def _increasing_default(self):
        return self.pieces[0].increasing if self.pieces else True

    def __attrs_post_init__(self):
        if len(self.pieces) != len(self.breaks) + 1:
            raise ValidationError(f"expected {len(self.breaks) + 1} pieces for {len(self.breaks)} breaks")
        if any(b >= c for b, c in zip(self.breaks, self.breaks[1:])):
            raise ValidationError("map breaks must be strictly increasing")
        if not self.exceptional_domain <= set(self.breaks):
            raise ValidationError("exceptional domain points must be breaks")
        self._canonicalise()
        for lo, hi, piece in self.segments():
            if piece.is_constant:
                raise ValidationError(f"constant map piece {piece} on ({lo}, {hi})")
            if piece.increasing != self.increasing:
                raise ValidationError(f"map piece {piece} on ({lo}, {hi}) has the wrong orientation")
            if piece.pole_in(lo, hi, closed=False):
                raise ValidationError(f"map piece {piece} has its pole inside ({lo}, {hi})")
        for i, b in enumerate(self.breaks):
            if b in self.exceptional_domain:
                continue
            left = self.pieces[i].limit(b, "left")
            right = self.pieces[i + 1].limit(b, "right")
            if left != right or not is_finite(left):
                raise ValidationError(f"map is discontinuous at the non-exceptional break {b}")
        object.__setattr__(self, "exceptional_range", frozenset(_uncovered_points(self._range_tiles())))

    def _canonicalise(self):
        breaks, pieces = [], [self.pieces[0]]
        for b, piece in zip(self.breaks, self.pieces[1:]):
            if b not in self.exceptional_domain and piece == pieces[-1]:
                continue
            breaks.append(b)
            pieces.append(piece)
        object.__setattr__(self, "breaks", tuple(breaks))
        object.__setattr__(self, "pieces", tuple(pieces))

    def _range_tiles(self) -> List[Interval]:
        tiles = []
        for lo, hi, piece in self.segments():
            ends = sorted((piece.limit(lo, "right"), piece.limit(hi, "left")))
            tiles.append(Interval.open(ends[0], ends[1]))
        for i, b in enumerate(self.breaks):
            if b not in self.exceptional_domain:
                tiles.append(Interval.singleton(self.pieces[i].limit(b, "left")))
        return tiles

    # -- structure ---------------------------------------------------------------------------------------------

    @classmethod
    def identity(cls) -> "MonotoneMap":
        return cls((), (Moebius.identity(),))

    def segments(self) -> Iterator[Tuple[ExtReal, ExtReal, Moebius]]:
        bounds = [NEG_INF] + list(self.breaks) + [POS_INF]
        for i, piece in enumerate(self.pieces):
            yield bounds[i], bounds[i + 1], piece

    def piece_at(self, t) -> Moebius:
        """Piece acting on the open segment containing the non-break point ``t``."""
        return self.pieces[bisect.bisect_right(self.breaks, t)]

    @property
    def is_whole_line(self) -> bool:
        return not self.exceptional_domain and not self.exceptional_range

    @property
    def is_identity(self) -> bool:
        """Identity on R minus the exceptional points."""
        return all(p.is_identity for p in self.pieces)

    @property
    def is_piecewise_linear(self) -> bool:
        return all(p.is_linear for p in self.pieces)

    # -- evaluation --------------------------------------------------------------------------------------------

    def __call__(self, t):
        if not is_finite(t):
            return self.limit(t)
        i = bisect.bisect_left(self.breaks, t)
        if i < len(self.breaks) and self.breaks[i] == t:
            if t in self.exceptional_domain:
                raise ValidationError(f"{t} is an exceptional point of the map")
            return self.pieces[i].limit(t, "left")
        return self.pieces[i](t)

    def limit(self, t: ExtReal, side: str = "right") -> ExtReal:
        """One-sided limit of the map at ``t`` (the side is ignored at the infinite ends)."""
        if t == NEG_INF:
            return self.pieces[0].limit(t)
        if t == POS_INF:
            return self.pieces[-1].limit(t)
        i = bisect.bisect_left(self.breaks, t)
        if i < len(self.breaks) and self.breaks[i] == t:
            return self.pieces[i + 1 if side == "right" else i].limit(t, side)
        return self.pieces[i].limit(t, side)

    def preimage(self, y) -> Optional[Fraction]:
        """The unique t with g(t) = y, or None when y is an exceptional range point."""
        if y in self.exceptional_range:
            return None
        for i, b in enumerate(self.breaks):
            if b not in self.exceptional_domain and self.pieces[i].limit(b, "left") == y:
                return b
        for lo, hi, piece in self.segments():
            ends = sorted((piece.limit(lo, "right"), piece.limit(hi, "left")))
            if ends[0] < y < ends[1]:
                return piece.inverse()(y)
        return None

    def evaluate_float(self, t):
        """Vectorised double-precision evaluation; a break is evaluated with the piece on its left."""
        t = np.asarray(t, dtype=float)
        breaks = np.array([float(b) for b in self.breaks])
        index = np.searchsorted(breaks, t, side="left")
        out = np.empty_like(t)
        for i, piece in enumerate(self.pieces):
            mask = index == i
            if mask.any():
                with np.errstate(divide="ignore", invalid="ignore"):
                    values = piece.evaluate_float(t[mask])
                if not piece.is_linear:
                    values = np.where(np.isinf(t[mask]), float(piece.a / piece.c), values)
                out[mask] = values
        return out

    def __str__(self):
        parts = []
        for lo, hi, piece in self.segments():
            parts.append(f"({lo},{hi}): {piece}")
        orientation = "inc" if self.increasing else "dec"
        return f"MonotoneMap[{orientation}]({'; '.join(parts)})"


# -- constructors ------------------------------------------------------------------------------------------------

def r_map(x) -> MonotoneMap:
    """t -> 1/(t - x) with exceptional domain point x and range point 0; the identity for x = inf."""
    x = to_ext_real(x)
    if not is_finite(x):
        return MonotoneMap.identity()
    piece = Moebius(0, 1, 1, -x)
    return MonotoneMap((x,), (piece, piece), {x})


def linear_map(slope, intercept=0) -> MonotoneMap:
    slope = to_rational(slope)
    if slope == 0:
        raise ValidationError("a linear map needs a nonzero slope")
    return MonotoneMap((), (Moebius.linear(slope, intercept),))


def pwl_map(knots: Sequence[Tuple[object, object]], left_slope=1, right_slope=1) -> MonotoneMap:
    """Piecewise-linear homeomorphism of R through the given knots, extended linearly beyond them.

    Raises
    ------
    ValidationError
        Knots not strictly monotone in both coordinates, or tail slopes that are zero or of the wrong sign.
    """
    knots = [(to_rational(t), to_rational(y)) for t, y in knots]
    if not knots:
        raise ValidationError("a piecewise-linear map needs at least one knot")
    left_slope, right_slope = to_rational(left_slope), to_rational(right_slope)
    if left_slope == 0 or right_slope == 0:
        raise ValidationError("tail slopes must be nonzero")
    if len(knots) >= 2:
        increasing = knots[1][1] > knots[0][1]
    else:
        increasing = left_slope > 0
    for (t0, y0), (t1, y1) in zip(knots, knots[1:]):
        if t1 <= t0:
            raise ValidationError(f"knot abscissae must be strictly increasing: {t0}, {t1}")
        if (y1 > y0) != increasing or y1 == y0:
            raise ValidationError(f"knot values are not strictly monotone at {t1}")
    if (left_slope > 0) != increasing or (right_slope > 0) != increasing:
        raise ValidationError("tail slopes disagree with the knot orientation")

    t0, y0 = knots[0]
    pieces = [Moebius.linear(left_slope, y0 - left_slope * t0)]
    for (ta, ya), (tb, yb) in zip(knots, knots[1:]):
        slope = (yb - ya) / (tb - ta)
        pieces.append(Moebius.linear(slope, ya - slope * ta))
    tn, yn = knots[-1]
    pieces.append(Moebius.linear(right_slope, yn - right_slope * tn))
    return MonotoneMap([t for t, _ in knots], pieces)


# -- algebra -----------------------------------------------------------------------------------------------------

def compose(g: MonotoneMap, h: MonotoneMap) -> MonotoneMap:
    """g o h, i.e. t -> g(h(t))."""
    breaks = set(h.breaks)
    for b in g.breaks:
        t = h.preimage(b)
        if t is not None:
            breaks.add(t)
    exceptional = set(h.exceptional_domain)
    for e in g.exceptional_domain:
        t = h.preimage(e)
        if t is not None:
            exceptional.add(t)
    breaks = sorted(breaks)
    bounds = [NEG_INF] + breaks + [POS_INF]
    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        probe = segment_probe(lo, hi)
        inner = h.piece_at(probe)
        pieces.append(g.piece_at(inner(probe)).compose(inner))
    return MonotoneMap(breaks, pieces, exceptional, g.increasing == h.increasing)


def invert(g: MonotoneMap) -> MonotoneMap:
    """The inverse bijection, with the roles of exceptional domain and range points swapped."""
    images = []
    for lo, hi, piece in g.segments():
        ends = sorted((piece.limit(lo, "right"), piece.limit(hi, "left")))
        images.append((ends[0], ends[1], piece.inverse()))
    images.sort(key=lambda image: image[0])
    breaks = [lo for lo, _, _ in images[1:]]
    return MonotoneMap(breaks, [piece for _, _, piece in images], g.exceptional_range, g.increasing)


def compose_all(maps: Sequence[MonotoneMap]) -> MonotoneMap:
    """maps[0] o maps[1] o ... o maps[-1]."""
    result = MonotoneMap.identity()
    for m in reversed(maps):
        result = compose(m, result)
    return result


# -- oracles -----------------------------------------------------------------------------------------------------

@frozen
class MapOracle:
    """A strictly monotone map given by evaluable double-precision functions.

    Attributes
    ----------
    forward : callable
        Vectorised map t -> o(t).
    inverse : callable
        Vectorised inverse y -> o^-1(y).
    increasing : bool
        Orientation of the map on each side of ``pole``.
    pole : float, optional
        Domain point where the map jumps between -inf and +inf, as t -> 1/t does at 0.
    limit : float
        o(-inf). Defaults to -inf for increasing and +inf for decreasing maps without a pole.
    """

    forward: Callable = field()
    inverse: Callable = field()
    increasing: bool = True
    pole: Optional[float] = None
    limit: float = field()

    @limit.default
    def _limit_default(self):
        return -math.inf if self.increasing else math.inf

    @classmethod
    def from_map(cls, g: MonotoneMap) -> "MapOracle":
        """Oracle evaluating a MonotoneMap in double precision.

        Raises
        ------
        OracleError
            The map jumps at more than one exceptional point.
        """
        inverse_map = invert(g)
        jumps = [e for e in sorted(g.exceptional_domain) if g.limit(e, "left") != g.limit(e, "right")]
        if len(jumps) > 1:
            raise OracleError(f"map {g} jumps at {len(jumps)} points, an oracle supports at most one")
        return cls(
            forward=g.evaluate_float,
            inverse=inverse_map.evaluate_float,
            increasing=g.increasing,
            pole=float(jumps[0]) if jumps else None,
            limit=float(g.limit(NEG_INF)),
        )

    def check(self, probes: Sequence[float], tolerance: float = 1e-12):
        """Probe inverse(forward(t)) = t and the orientation on the given points.

        Raises
        ------
        OracleError
            The inverse round trip or the orientation check fails.
        """
        probes = np.unique(np.asarray(probes, dtype=float))
        if self.pole is not None:
            probes = probes[probes != self.pole]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            images = np.asarray(self.forward(probes), dtype=float)
            back = np.asarray(self.inverse(images), dtype=float)
        finite = np.isfinite(images)
        scale = np.maximum(1.0, np.abs(probes[finite]))
        if np.any(np.abs(back[finite] - probes[finite]) > tolerance * scale):
            worst = probes[finite][np.argmax(np.abs(back[finite] - probes[finite]) / scale)]
            raise OracleError(f"oracle inverse check failed at t={worst!r}")
        sides = [probes < self.pole, probes > self.pole] if self.pole is not None else [np.ones_like(probes, bool)]
        for side in sides:
            steps = np.diff(images[side & finite])
            if steps.size and (np.any(steps <= 0) if self.increasing else np.any(steps >= 0)):
                raise OracleError("oracle orientation check failed")
