"""
JSON documents for distributions, maps, circle distributions and verification reports.

Numbers are strings: rationals as ``"p/q"``, infinities as ``"-inf"``/``"+inf"`` and circle angles and masses as
decimal strings. Structural problems are reported as ValidationError naming the offending JSON path.
"""
import json
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from kuiper_isometry.kuiper_exception import KuiperException, ValidationError
from kuiper_isometry.resources.circle_distribution import TWO_PI, CircleDistribution, from_parts
from kuiper_isometry.resources.distribution import Distribution, Node, segment_probe
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.monotone_map import MonotoneMap, r_map
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF, format_ext_real, is_finite, to_ext_real, to_rational

Document = Dict[str, Any]


def loads(text: str, source: str = "<string>") -> Any:
    """json.loads with line and column diagnostics in the error."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{source}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")


def load_file(path: str) -> Any:
    with open(path, "r") as f:
        return loads(f.read(), source=str(path))


def dumps(document: Any) -> str:
    return json.dumps(document, indent=2) + "\n"


def write_file(path: str, document: Any):
    with open(path, "w") as f:
        f.write(dumps(document))


def _field(document: Document, key: str, where: str):
    if not isinstance(document, dict) or key not in document:
        raise ValidationError(f"{where}: missing field '{key}'")
    return document[key]


def _rational(value, where: str) -> Fraction:
    try:
        return to_rational(value)
    except ValidationError as e:
        raise ValidationError(f"{where}: {e}")


def _ext_real(value, where: str):
    try:
        return to_ext_real(value)
    except ValidationError as e:
        raise ValidationError(f"{where}: {e}")


def _list(document: Document, key: str, where: str) -> List:
    items = document.get(key, []) if isinstance(document, dict) else None
    if not isinstance(items, list):
        raise ValidationError(f"{where}.{key}: expected a list")
    return items


def _moebius(coefficients: Document, where: str) -> Moebius:
    values = [_rational(_field(coefficients, k, where), f"{where}.{k}") for k in ("a", "b", "c", "d")]
    try:
        return Moebius(*values)
    except ValidationError as e:
        raise ValidationError(f"{where}: {e}")


# -- distributions -----------------------------------------------------------------------------------------------

def distribution_to_json(mu: Distribution) -> Document:
    """Atoms plus one segment per nonconstant CDF piece; linear pieces are written as densities."""
    segments = []
    for lo, hi, piece in mu.segments():
        if piece.is_constant:
            continue
        segment = {"from": format_ext_real(lo), "to": format_ext_real(hi)}
        if piece.is_linear:
            segment["density"] = str(piece.a)
        else:
            segment["moebius"] = {k: str(getattr(piece, k)) for k in ("a", "b", "c", "d")}
        segments.append(segment)
    return {
        "atoms": [{"at": str(t), "mass": str(mass)} for t, mass in mu.atoms],
        "segments": segments,
    }


def distribution_from_json(document: Document, source: str = "distribution") -> Distribution:
    """Parse, canonicalise and validate a distribution document.

    A ``density`` segment continues the CDF from its left end; a ``moebius`` segment gives the CDF itself.
    Segments may not overlap, and the total mass must be exactly 1.
    """
    if not isinstance(document, dict):
        raise ValidationError(f"{source}: expected an object")
    atoms: Dict[Fraction, Fraction] = {}
    for i, atom in enumerate(_list(document, "atoms", source)):
        where = f"{source}.atoms[{i}]"
        t = _rational(_field(atom, "at", where), f"{where}.at")
        mass = _rational(_field(atom, "mass", where), f"{where}.mass")
        if mass < 0:
            raise ValidationError(f"{where}: negative mass {mass}")
        atoms[t] = atoms.get(t, Fraction(0)) + mass

    segments = []
    for i, segment in enumerate(_list(document, "segments", source)):
        where = f"{source}.segments[{i}]"
        lo = _ext_real(_field(segment, "from", where), f"{where}.from")
        hi = _ext_real(_field(segment, "to", where), f"{where}.to")
        if not lo < hi:
            raise ValidationError(f"{where}: empty segment ({lo}, {hi})")
        if "moebius" in segment:
            body = ("moebius", _moebius(segment["moebius"], f"{where}.moebius"))
        elif "density" in segment:
            density = _rational(segment["density"], f"{where}.density")
            if density < 0 or (density > 0 and not (is_finite(lo) and is_finite(hi))):
                raise ValidationError(f"{where}: a density segment needs a finite span and a non-negative density")
            body = ("density", density)
        else:
            raise ValidationError(f"{where}: expected 'density' or 'moebius'")
        segments.append((lo, hi, body, where))
    segments.sort(key=lambda s: s[0])
    for (_, hi, _, where), (lo, _, _, _) in zip(segments, segments[1:]):
        if lo < hi:
            raise ValidationError(f"{where}: overlaps the next segment")

    ts = set(atoms)
    ts.update(b for lo, hi, _, _ in segments for b in (lo, hi) if is_finite(b))
    if not ts:
        raise ValidationError(f"{source}: no atoms and no bounded segment")
    ts = sorted(ts)
    bounds = [NEG_INF] + ts + [POS_INF]

    nodes, pieces = [], []
    running = Fraction(0)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        probe = segment_probe(lo, hi)
        covering = next((s for s in segments if s[0] < probe < s[1]), None)
        if covering is None:
            piece = Moebius.constant(running)
        elif covering[2][0] == "moebius":
            piece = covering[2][1]
        else:
            density = covering[2][1]
            piece = Moebius.linear(density, running - density * lo) if density else Moebius.constant(running)
        pieces.append(piece)
        if piece.pole_in(lo, hi):
            raise ValidationError(f"{covering[3]}: CDF piece {piece} has its pole on [{lo}, {hi}]")
        running = piece.limit(hi, "left")
        if is_finite(hi):
            atom = atoms.get(hi, Fraction(0))
            nodes.append(Node(hi, running, running + atom))
            running += atom
    if running != 1:
        raise ValidationError(f"{source}: total mass must be exactly 1, got {running}")
    try:
        return Distribution(nodes, pieces)
    except ValidationError as e:
        raise ValidationError(f"{source}: {e}")


# -- maps --------------------------------------------------------------------------------------------------------

def map_to_json(g: MonotoneMap) -> Document:
    pieces = []
    for lo, hi, piece in g.segments():
        entry = {"from": format_ext_real(lo), "to": format_ext_real(hi)}
        entry.update({k: str(getattr(piece, k)) for k in ("a", "b", "c", "d")})
        pieces.append(entry)
    document = {"orientation": "inc" if g.increasing else "dec", "pieces": pieces}
    if g.exceptional_domain:
        document["exceptional"] = [str(p) for p in sorted(g.exceptional_domain)]
    return document


def _jumps(pieces: List[Moebius], breaks: List[Fraction]) -> List[Fraction]:
    jumps = []
    for i, b in enumerate(breaks):
        left, right = pieces[i].limit(b, "left"), pieces[i + 1].limit(b, "right")
        if left != right or not is_finite(left):
            jumps.append(b)
    return jumps


def map_from_json(document: Document, source: str = "map") -> MonotoneMap:
    """Parse a map document or the ``{"r_pole": x}`` shorthand.

    Without an explicit ``exceptional`` list, exactly the breaks where the map is discontinuous are exceptional.
    """
    if isinstance(document, dict) and "r_pole" in document:
        return r_map(_ext_real(document["r_pole"], f"{source}.r_pole"))
    orientation = _field(document, "orientation", source)
    if orientation not in ("inc", "dec"):
        raise ValidationError(f"{source}.orientation: expected 'inc' or 'dec', got {orientation!r}")
    entries = _list(document, "pieces", source)
    if not entries:
        raise ValidationError(f"{source}.pieces: at least one piece is required")
    breaks, pieces = [], []
    expected_lo = NEG_INF
    for i, entry in enumerate(entries):
        where = f"{source}.pieces[{i}]"
        lo = _ext_real(_field(entry, "from", where), f"{where}.from")
        hi = _ext_real(_field(entry, "to", where), f"{where}.to")
        if lo != expected_lo or not lo < hi:
            raise ValidationError(f"{where}: pieces must tile the line in order, expected to start at "
                                  f"{format_ext_real(expected_lo)}")
        pieces.append(_moebius(entry, where))
        if is_finite(hi):
            breaks.append(hi)
        expected_lo = hi
    if expected_lo != POS_INF:
        raise ValidationError(f"{source}.pieces: the last piece must end at +inf")
    if "exceptional" in document:
        exceptional = [_rational(p, f"{source}.exceptional") for p in _list(document, "exceptional", source)]
    else:
        exceptional = _jumps(pieces, breaks)
    try:
        return MonotoneMap(breaks, pieces, exceptional, orientation == "inc")
    except ValidationError as e:
        raise ValidationError(f"{source}: {e}")


# -- circle ------------------------------------------------------------------------------------------------------

def circle_to_json(c: CircleDistribution) -> Document:
    atoms = [{"angle": repr(float(t)), "mass": repr(float(m))} for t, m in zip(c.theta, c.atoms) if m > 0]
    segments = [
        {"from": repr(float(t)), "to": repr(float(e)), "mass": repr(float(m))}
        for t, e, m in zip(c.theta, c.ends, c.seg) if m > 0
    ]
    return {"atoms": atoms, "segments": segments}


def _angle(value, where: str) -> float:
    try:
        angle = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{where}: not an angle: {value!r}")
    if not math.isfinite(angle):
        raise ValidationError(f"{where}: not an angle: {value!r}")
    return angle


def circle_from_json(document: Document, source: str = "circle") -> CircleDistribution:
    """Segments run counter-clockwise from ``from`` to ``to``; equal ends mean the whole circle."""
    atoms = []
    for i, atom in enumerate(_list(document, "atoms", source)):
        where = f"{source}.atoms[{i}]"
        atoms.append((_angle(_field(atom, "angle", where), f"{where}.angle"),
                      _angle(_field(atom, "mass", where), f"{where}.mass")))
    arcs = []
    for i, segment in enumerate(_list(document, "segments", source)):
        where = f"{source}.segments[{i}]"
        start = _angle(_field(segment, "from", where), f"{where}.from")
        end = _angle(_field(segment, "to", where), f"{where}.to")
        mass = _angle(_field(segment, "mass", where), f"{where}.mass")
        extent = math.fmod(end - start, TWO_PI)
        if extent <= 0:
            extent += TWO_PI
        arcs.append((start, extent, mass))
    try:
        return from_parts(atoms, arcs)
    except ValidationError as e:
        raise ValidationError(f"{source}: {e}")


# -- dispatch ----------------------------------------------------------------------------------------------------

def load_distribution(path: str) -> Distribution:
    return distribution_from_json(load_file(path), source=str(path))


def load_map(path: str) -> MonotoneMap:
    return map_from_json(load_file(path), source=str(path))


def to_json(value: Union[Distribution, MonotoneMap, CircleDistribution]) -> Optional[Document]:
    if isinstance(value, Distribution):
        return distribution_to_json(value)
    if isinstance(value, MonotoneMap):
        return map_to_json(value)
    if isinstance(value, CircleDistribution):
        return circle_to_json(value)
    raise KuiperException(f"cannot serialise {type(value).__name__}")
