"""
Probability distributions on the real line with piecewise fractional-linear CDFs.

A Distribution is a strictly increasing list of nodes ``t`` carrying the left limit ``F(t-)`` and the value ``F(t)``
of its CDF, plus one Moebius piece per open segment between consecutive nodes, including the two unbounded outer
segments. Atoms are the jumps ``F(t) - F(t-)``.
"""
import bisect
from fractions import Fraction
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np
from attrs import frozen, field

from kuiper_isometry.kuiper_exception import ValidationError
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.scalars import ExtReal, NEG_INF, POS_INF, is_finite, to_rational


@frozen
class Node:
    t: Fraction = field(converter=to_rational)
    left: Fraction = field(converter=to_rational)
    right: Fraction = field(converter=to_rational)

    @property
    def atom(self) -> Fraction:
        return self.right - self.left


def segment_probe(lo: ExtReal, hi: ExtReal) -> Fraction:
    """A rational point strictly inside the open segment (lo, hi)."""
    if not is_finite(lo) and not is_finite(hi):
        return Fraction(0)
    if not is_finite(lo):
        return hi - 1
    if not is_finite(hi):
        return lo + 1
    return (lo + hi) / 2


def _canonical(nodes: List[Node], pieces: List[Moebius]) -> Tuple[Tuple[Node, ...], Tuple[Moebius, ...]]:
    """Drop nodes without an atom whose neighbouring pieces are the same function."""
    out_nodes: List[Node] = []
    out_pieces: List[Moebius] = [pieces[0]]
    for node, piece in zip(nodes, pieces[1:]):
        if node.atom == 0 and out_pieces[-1] == piece:
            continue
        out_nodes.append(node)
        out_pieces.append(piece)
    if not out_nodes and nodes:
        # limits at -inf and +inf differ, so this only happens for invalid input; keep it for validation to report
        return tuple(nodes), tuple(pieces)
    return tuple(out_nodes), tuple(out_pieces)


@frozen
class Distribution:
    """A Borel probability measure on R with atoms at nodes and fractional-linear CDF pieces in between.

    Construction canonicalises and validates:

    * CDF values lie in [0, 1], are nondecreasing, with ``left <= right`` at every node;
    * the CDF tends to 0 at -inf and to 1 at +inf;
    * each piece is nondecreasing, has no pole on the closure of its segment and meets the adjacent node values
      (right-continuity);
    * no node without an atom separates two identical pieces.
    """

    nodes: Tuple[Node, ...] = field(converter=tuple)
    pieces: Tuple[Moebius, ...] = field(converter=tuple)
    _ts: List[Fraction] = field(init=False, repr=False, eq=False)

    def __attrs_post_init__(self):
        if len(self.pieces) != len(self.nodes) + 1:
            raise ValidationError(f"expected {len(self.nodes) + 1} pieces for {len(self.nodes)} nodes, "
                                  f"got {len(self.pieces)}")
        nodes, pieces = _canonical(list(self.nodes), list(self.pieces))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_ts", [n.t for n in nodes])
        self._validate()

    def _validate(self):
        if not self.nodes:
            raise ValidationError("a distribution needs at least one node")
        previous = None
        for node in self.nodes:
            if previous is not None and node.t <= previous.t:
                raise ValidationError(f"nodes must be strictly increasing: {previous.t} >= {node.t}")
            if not (0 <= node.left <= node.right <= 1):
                raise ValidationError(f"invalid CDF values at {node.t}: F(t-)={node.left}, F(t)={node.right}")
            if previous is not None and previous.right > node.left:
                raise ValidationError(f"CDF decreases between {previous.t} and {node.t}")
            previous = node
        for lo, hi, piece in self.segments():
            if piece.determinant < 0:
                raise ValidationError(f"decreasing CDF piece {piece} on ({lo}, {hi})")
            if piece.pole_in(lo, hi):
                raise ValidationError(f"CDF piece {piece} has its pole on [{lo}, {hi}]")
            expected_lo = self.nodes[self._index_of(lo)].right if is_finite(lo) else Fraction(0)
            expected_hi = self.nodes[self._index_of(hi)].left if is_finite(hi) else Fraction(1)
            if piece.limit(lo) != expected_lo:
                raise ValidationError(f"CDF piece {piece} does not start at {expected_lo} at {lo}")
            if piece.limit(hi) != expected_hi:
                raise ValidationError(f"CDF piece {piece} does not end at {expected_hi} at {hi}")

    def _index_of(self, t) -> int:
        return bisect.bisect_left(self._ts, t)

    # -- structure ---------------------------------------------------------------------------------------------

    @property
    def breakpoints(self) -> List[Fraction]:
        return list(self._ts)

    def segments(self) -> Iterator[Tuple[ExtReal, ExtReal, Moebius]]:
        """Open segments (lo, hi) with their CDF piece, from (-inf, t_0) to (t_n, +inf)."""
        bounds = [NEG_INF] + self._ts + [POS_INF]
        for i, piece in enumerate(self.pieces):
            yield bounds[i], bounds[i + 1], piece

    def piece_at(self, t) -> Moebius:
        """CDF piece on the open segment containing the non-node point ``t``."""
        return self.pieces[bisect.bisect_right(self._ts, t)]

    def node_at(self, t):
        i = self._index_of(t)
        if i < len(self._ts) and self._ts[i] == t:
            return self.nodes[i]
        return None

    @property
    def atoms(self) -> List[Tuple[Fraction, Fraction]]:
        return [(n.t, n.atom) for n in self.nodes if n.atom > 0]

    def atom_at(self, t) -> Fraction:
        node = self.node_at(t)
        return node.atom if node is not None else Fraction(0)

    @property
    def is_continuous(self) -> bool:
        return all(n.atom == 0 for n in self.nodes)

    @property
    def is_dirac(self) -> bool:
        return any(n.atom == 1 for n in self.nodes)

    @property
    def dirac_point(self):
        for node in self.nodes:
            if node.atom == 1:
                return node.t
        return None

    @property
    def is_purely_atomic(self) -> bool:
        return all(p.is_constant for p in self.pieces)

    @property
    def is_piecewise_linear(self) -> bool:
        return all(p.is_linear for p in self.pieces)

    # -- evaluation --------------------------------------------------------------------------------------------

    def cdf(self, t) -> Fraction:
        """f(t) = mu((-inf, t])."""
        if not is_finite(t):
            return Fraction(0) if t < 0 else Fraction(1)
        node = self.node_at(t)
        if node is not None:
            return node.right
        return self.piece_at(t)(t)

    def cdf_left(self, t) -> Fraction:
        """f(t-) = mu((-inf, t))."""
        if not is_finite(t):
            return Fraction(0) if t < 0 else Fraction(1)
        node = self.node_at(t)
        if node is not None:
            return node.left
        return self.piece_at(t)(t)

    def interval_mass(self, interval: Interval) -> Fraction:
        upper = self.cdf(interval.hi) if interval.hi_closed else self.cdf_left(interval.hi)
        lower = self.cdf_left(interval.lo) if interval.lo_closed else self.cdf(interval.lo)
        return upper - lower

    def cdf_float(self, t):
        """Vectorised double-precision CDF, for numpy arrays of finite or infinite points."""
        t = np.asarray(t, dtype=float)
        ts = np.array([float(x) for x in self._ts])
        out = np.empty_like(t)
        seg = np.searchsorted(ts, t, side="right")
        at_node = np.zeros(t.shape, dtype=bool)
        node_idx = seg - 1
        valid = node_idx >= 0
        at_node[valid] = ts[node_idx[valid]] == t[valid]
        for i, piece in enumerate(self.pieces):
            mask = (seg == i) & ~at_node
            if not mask.any():
                continue
            if piece.is_constant:
                out[mask] = float(piece.b)
            else:
                with np.errstate(divide="ignore", invalid="ignore"):
                    values = piece.evaluate_float(t[mask])
                # infinite arguments only reach the outer pieces, whose limits are 0 and 1
                values = np.where(np.isinf(t[mask]), 0.0 if i == 0 else 1.0, values)
                out[mask] = values
        if at_node.any():
            rights = np.array([float(n.right) for n in self.nodes])
            out[at_node] = rights[node_idx[at_node]]
        return np.clip(out, 0.0, 1.0)

    def __str__(self):
        parts = ", ".join(f"{n.t}:[{n.left},{n.right}]" for n in self.nodes)
        return f"Distribution({parts})"


# -- constructors ------------------------------------------------------------------------------------------------

def make_uniform(lo, hi) -> Distribution:
    """Uniform distribution on [lo, hi]."""
    lo, hi = to_rational(lo), to_rational(hi)
    if lo >= hi:
        raise ValidationError(f"uniform distribution needs lo < hi, got [{lo}, {hi}]")
    width = hi - lo
    return Distribution(
        [Node(lo, 0, 0), Node(hi, 1, 1)],
        [Moebius.constant(0), Moebius.linear(1 / width, -lo / width), Moebius.constant(1)],
    )


def make_dirac(x) -> Distribution:
    return Distribution([Node(x, 0, 1)], [Moebius.constant(0), Moebius.constant(1)])


def from_atoms(atoms: Iterable[Tuple[object, object]]) -> Distribution:
    """Purely atomic distribution from (location, mass) pairs; repeated locations are merged."""
    masses = {}
    for t, mass in atoms:
        t, mass = to_rational(t), to_rational(mass)
        if mass < 0:
            raise ValidationError(f"negative atom mass {mass} at {t}")
        masses[t] = masses.get(t, Fraction(0)) + mass
    total = sum(masses.values(), Fraction(0))
    if total != 1:
        raise ValidationError(f"atom masses must sum to 1, got {total}")
    nodes, pieces = [], [Moebius.constant(0)]
    running = Fraction(0)
    for t in sorted(masses):
        nodes.append(Node(t, running, running + masses[t]))
        running += masses[t]
        pieces.append(Moebius.constant(running))
    return Distribution(nodes, pieces)


def mix(parts: Sequence[Tuple[object, Distribution]]) -> Distribution:
    """Convex combination sum(w_i * mu_i).

    Raises
    ------
    ValidationError
        Non-positive weights or weights not summing to 1.
    RepresentationError
        Two non-constant pieces with different poles (or a linear and a non-linear one) overlap.
    """
    weighted = [(to_rational(w), mu) for w, mu in parts]
    if not weighted:
        raise ValidationError("mix needs at least one component")
    if any(w <= 0 for w, _ in weighted):
        raise ValidationError("mixture weights must be positive")
    total = sum((w for w, _ in weighted), Fraction(0))
    if total != 1:
        raise ValidationError(f"mixture weights must sum to 1, got {total}")

    ts = sorted({t for _, mu in weighted for t in mu.breakpoints})
    nodes = [
        Node(t,
             sum((w * mu.cdf_left(t) for w, mu in weighted), Fraction(0)),
             sum((w * mu.cdf(t) for w, mu in weighted), Fraction(0)))
        for t in ts
    ]
    bounds = [NEG_INF] + ts + [POS_INF]
    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        probe = segment_probe(lo, hi)
        piece = Moebius.constant(0)
        for w, mu in weighted:
            piece = piece.add(mu.piece_at(probe).scale(w))
        pieces.append(piece)
    return Distribution(nodes, pieces)


def cdf(mu: Distribution, t) -> Fraction:
    return mu.cdf(t)


def cdf_left(mu: Distribution, t) -> Fraction:
    return mu.cdf_left(t)


def interval_mass(mu: Distribution, interval: Interval) -> Fraction:
    return mu.interval_mass(interval)
