"""
Measures on the unit circle in the angle coordinate theta in [-pi, pi).

Angles are binary floating point, so everything here carries tolerances instead of exactness claims.
"""
import math
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from attrs import frozen, field

from kuiper_isometry.kuiper_exception import ValidationError

TWO_PI = 2 * math.pi
MASS_TOLERANCE = 1e-12
KNOT_TOLERANCE = 1e-14


def wrap_angle(theta):
    """Representative of theta in [-pi, pi); works on scalars and arrays."""
    wrapped = np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi
    wrapped = np.where(wrapped >= math.pi, wrapped - TWO_PI, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


@frozen
class Arc:
    """The arc from ``start`` running counter-clockwise over ``extent`` radians.

    A degenerate arc (extent 0) has both endpoints closed. An extent of 2pi is only allowed with both endpoints open
    and then means the circle minus the point ``start``. The whole circle is the canonical ``Arc.full_circle()``.
    """

    start: float = field(converter=float)
    extent: float = field(converter=float)
    start_closed: bool = True
    end_closed: bool = True
    full: bool = False

    def __attrs_post_init__(self):
        if self.full:
            return
        object.__setattr__(self, "start", wrap_angle(self.start))
        if not (0 <= self.extent <= TWO_PI):
            raise ValidationError(f"arc extent must lie in [0, 2pi], got {self.extent!r}")
        if self.extent == TWO_PI and (self.start_closed or self.end_closed):
            raise ValidationError("an arc of extent 2pi must be open at both ends")
        if self.extent == 0 and not (self.start_closed and self.end_closed):
            raise ValidationError("a degenerate arc must be closed")

    @classmethod
    def full_circle(cls) -> "Arc":
        return cls(-math.pi, 0.0, True, True, True)

    @classmethod
    def point(cls, theta) -> "Arc":
        return cls(theta, 0.0)

    @classmethod
    def between(cls, start, end, start_closed=True, end_closed=True) -> "Arc":
        """Counter-clockwise arc from ``start`` to ``end``."""
        extent = float(np.mod(float(end) - float(start), TWO_PI))
        return cls(start, extent, start_closed, end_closed)

    @property
    def end(self) -> float:
        return self.start + self.extent

    def complement(self) -> "Arc":
        """The circle minus this arc, again an arc."""
        if self.full:
            raise ValidationError("the full circle has an empty complement")
        return Arc(self.end, TWO_PI - self.extent, not self.end_closed, not self.start_closed)

    def rotated(self, theta) -> "Arc":
        if self.full:
            return self
        return Arc(self.start + float(theta), self.extent, self.start_closed, self.end_closed)

    def __str__(self):
        if self.full:
            return "T"
        left = "[" if self.start_closed else "("
        right = "]" if self.end_closed else ")"
        return f"{left}{self.start!r},{self.end!r}{right}"


@frozen(eq=False)
class CircleDistribution:
    """Atoms at knots plus uniform mass on the open arcs between consecutive knots.

    Attributes
    ----------
    theta : ndarray
        Strictly increasing knots with ``theta[0] == -pi`` and all knots below pi.
    atoms : ndarray
        Mass of each knot.
    seg : ndarray
        Mass of the open arc from each knot to the next one (the last arc ends at pi).
    """

    theta: np.ndarray = field(converter=lambda a: np.asarray(a, dtype=float), eq=False)
    atoms: np.ndarray = field(converter=lambda a: np.asarray(a, dtype=float), eq=False)
    seg: np.ndarray = field(converter=lambda a: np.asarray(a, dtype=float), eq=False)
    cum_left: np.ndarray = field(init=False, eq=False, repr=False)
    ends: np.ndarray = field(init=False, eq=False, repr=False)

    def __attrs_post_init__(self):
        n = self.theta.size
        if n == 0 or self.atoms.size != n or self.seg.size != n:
            raise ValidationError("circle distribution arrays must be non-empty and of equal length")
        if self.theta[0] != -math.pi or self.theta[-1] >= math.pi or np.any(np.diff(self.theta) <= 0):
            raise ValidationError("circle knots must increase strictly from -pi and stay below pi")
        if np.any(self.atoms < 0) or np.any(self.seg < 0):
            raise ValidationError("circle masses must be non-negative")
        total = float(self.atoms.sum() + self.seg.sum())
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(f"circle masses must sum to 1, got {total!r}")
        steps = self.atoms + self.seg
        object.__setattr__(self, "cum_left", np.concatenate([[0.0], np.cumsum(steps)[:-1]]))
        object.__setattr__(self, "ends", np.append(self.theta[1:], math.pi))

    @property
    def is_continuous(self) -> bool:
        return not np.any(self.atoms > 0)

    def cdf_values(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """Masses of [-pi, x) and [-pi, x] for angles x in [-pi, pi]."""
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self.theta, x, side="right") - 1, 0, self.theta.size - 1)
        at_knot = self.theta[idx] == x
        start = self.theta[idx]
        width = self.ends[idx] - start
        fraction = np.clip((x - start) / width, 0.0, 1.0)
        inside = self.cum_left[idx] + self.atoms[idx] + self.seg[idx] * fraction
        left = np.where(at_knot, self.cum_left[idx], inside)
        right = np.where(at_knot, self.cum_left[idx] + self.atoms[idx], inside)
        at_end = x >= math.pi
        left = np.where(at_end, 1.0, left)
        right = np.where(at_end, 1.0, right)
        return left, right

    def lifted(self, x: float, closed: bool) -> float:
        """Mass of [-pi, x] (``closed``) or [-pi, x) on the universal cover, one unit per turn."""
        turns = math.floor((x + math.pi) / TWO_PI)
        r = x - turns * TWO_PI
        if r >= math.pi:
            r, turns = r - TWO_PI, turns + 1
        left, right = self.cdf_values(np.array([r]))
        return (float(right[0]) if closed else float(left[0])) + turns

    def __eq__(self, other):
        if not isinstance(other, CircleDistribution):
            return NotImplemented
        return (
            np.array_equal(self.theta, other.theta)
            and np.array_equal(self.atoms, other.atoms)
            and np.array_equal(self.seg, other.seg)
        )

    __hash__ = None

    def __str__(self):
        return f"CircleDistribution({self.theta.size} knots, {int(np.count_nonzero(self.atoms))} atoms)"


def _knots(points: Iterable[float]) -> np.ndarray:
    """Sorted knots from -pi, merging runs of points closer than KNOT_TOLERANCE into their first point.

    Points within the tolerance below pi are the base point seen from the other side and add no knot.
    """
    points = np.sort(np.asarray(list(points), dtype=float))
    points = points[(points >= -math.pi) & (points < math.pi - KNOT_TOLERANCE)]
    points = np.concatenate([[-math.pi], points])
    keep = np.concatenate([[True], np.diff(points) > KNOT_TOLERANCE])
    return points[keep]


def _snap(knots: np.ndarray, x: float, at_pi: int) -> int:
    """Index of the knot standing for angle x; ``at_pi`` is returned for angles within tolerance of pi."""
    if x >= math.pi - KNOT_TOLERANCE:
        return at_pi
    return int(np.searchsorted(knots, x + KNOT_TOLERANCE, side="right") - 1)


def _is_near_knot(knots: np.ndarray, x: float) -> bool:
    if x >= math.pi - KNOT_TOLERANCE:
        return True
    i = _snap(knots, x, 0)
    return abs(x - knots[i]) <= KNOT_TOLERANCE


def from_parts(atoms: Iterable[Tuple[float, float]] = (),
               arcs: Iterable[Tuple[float, float, float]] = ()) -> CircleDistribution:
    """Circle distribution from (angle, mass) atoms and (start, extent, mass) uniform arcs.

    Atom angles and arc starts become knots. An arc end within KNOT_TOLERANCE of a knot snaps onto it, so arcs whose
    ends are float sums of angles still meet exactly. An arc shorter than the tolerance becomes an atom at its start.
    """
    atoms = [(wrap_angle(a), float(m)) for a, m in atoms]
    pieces: List[Tuple[float, float, float]] = []
    for start, extent, mass in arcs:
        start, extent, mass = wrap_angle(start), float(extent), float(mass)
        if not (0 < extent <= TWO_PI):
            raise ValidationError(f"arc extent must lie in (0, 2pi], got {extent!r}")
        if start >= math.pi - KNOT_TOLERANCE:
            start -= TWO_PI
        end = start + extent
        if end <= math.pi + KNOT_TOLERANCE:
            pieces.append((start, min(end, math.pi), mass))
        else:
            head = (math.pi - start) / extent
            pieces.append((start, math.pi, mass * head))
            pieces.append((-math.pi, end - TWO_PI, mass * (1 - head)))

    theta = _knots([a for a, _ in atoms] + [start for start, _, _ in pieces])
    loose_ends = [end for _, end, _ in pieces if not _is_near_knot(theta, end)]
    if loose_ends:
        theta = _knots(np.concatenate([theta, loose_ends]))
    n = theta.size
    widths = np.append(theta[1:], math.pi) - theta

    atom_mass = np.zeros(n)
    for angle, mass in atoms:
        atom_mass[_snap(theta, angle, 0)] += mass
    seg = np.zeros(n)
    for start, end, mass in pieces:
        i, j = _snap(theta, start, 0), _snap(theta, end, n)
        if j <= i:
            atom_mass[i] += mass
            continue
        seg[i:j] += mass * widths[i:j] / widths[i:j].sum()
    return CircleDistribution(theta, atom_mass, seg)


def uniform_circle() -> CircleDistribution:
    """Normalised arc length."""
    return CircleDistribution([-math.pi], [0.0], [1.0])


def arc_uniform(start, extent) -> CircleDistribution:
    return from_parts(arcs=[(start, extent, 1.0)])


def circle_atoms(atoms: Sequence[Tuple[float, float]]) -> CircleDistribution:
    return from_parts(atoms=atoms)


def mix_circles(parts: Sequence[Tuple[float, CircleDistribution]]) -> CircleDistribution:
    """Convex combination of circle distributions on the union of their knots."""
    theta = np.unique(np.concatenate([c.theta for _, c in parts]))
    ends = np.append(theta[1:], math.pi)
    atoms, seg = np.zeros(theta.size), np.zeros(theta.size)
    for weight, c in parts:
        index = np.searchsorted(c.theta, theta, side="right") - 1
        atoms += weight * np.where(c.theta[index] == theta, c.atoms[index], 0.0)
        seg += weight * c.seg[index] * (ends - theta) / (c.ends[index] - c.theta[index])
    return CircleDistribution(theta, atoms, seg)
