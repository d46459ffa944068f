import math
from fractions import Fraction

import numpy as np
import pytest

from kuiper_isometry.kuiper_exception import KuiperException, ValidationError
from kuiper_isometry.resources.circle_distribution import from_parts
from kuiper_isometry.resources.distribution import Distribution, Node, make_dirac, make_uniform, mix
from kuiper_isometry.resources.interval import Interval
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.monotone_map import MonotoneMap, compose, invert, linear_map, r_map
from kuiper_isometry.services.circle_service import circle_kuiper
from kuiper_isometry.services.transform_service import pullback
from kuiper_isometry.utils.generators import random_distribution, random_map
from kuiper_isometry.utils.json_io import (
    circle_from_json, circle_to_json, distribution_from_json, distribution_to_json, dumps, load_distribution,
    load_file, load_map, loads, map_from_json, map_to_json, to_json, write_file,
)

half = Fraction(1, 2)


def test_load_distribution_files():
    assert load_distribution("tests/test_files/U03.json") == make_uniform(0, 3)
    assert load_distribution("tests/test_files/U12.json") == make_uniform(1, 2)
    assert load_distribution("tests/test_files/dirac0.json") == make_dirac(0)


def test_malformed_json():
    with pytest.raises(ValidationError) as excinfo:
        load_file("tests/test_files/malformed.json")
    assert "malformed JSON at line" in str(excinfo.value)
    assert "malformed.json" in str(excinfo.value)


def test_distribution_document():
    document = distribution_to_json(mix([(half, make_dirac(0)), (half, make_uniform(0, 2))]))
    assert document == {
        "atoms": [{"at": "0", "mass": "1/2"}],
        "segments": [{"from": "0", "to": "2", "density": "1/4"}],
    }


def test_moebius_segments():
    pareto = {"segments": [{"from": "1", "to": "+inf", "moebius": {"a": "1", "b": "-1", "c": "1", "d": "0"}}]}
    mu = distribution_from_json(pareto)
    assert mu == Distribution([Node(1, 0, 0)], [Moebius.constant(0), Moebius(1, -1, 1, 0)])
    assert mu.cdf(2) == half

    inverted = pullback(make_uniform(1, 2), r_map(0))
    document = distribution_to_json(inverted)
    assert document["segments"] == [
        {"from": "1/2", "to": "1", "moebius": {"a": "2", "b": "-1", "c": "1", "d": "0"}}
    ]
    assert distribution_from_json(document) == inverted


def test_distribution_round_trip():
    for mu in (make_uniform(0, 3), make_dirac(5), mix([(half, make_dirac(-1)), (half, make_uniform(2, 3))]),
               random_distribution(np.random.default_rng(4), 6)):
        assert distribution_from_json(loads(dumps(distribution_to_json(mu)))) == mu


def test_invalid_distribution_documents():
    with pytest.raises(ValidationError, match="total mass"):
        distribution_from_json({"atoms": [{"at": "0", "mass": "1/2"}]})
    with pytest.raises(ValidationError, match="overlaps"):
        distribution_from_json({"segments": [{"from": "0", "to": "2", "density": "1/4"},
                                             {"from": "1", "to": "3", "density": "1/4"}]})
    with pytest.raises(ValidationError, match="finite span"):
        distribution_from_json({"segments": [{"from": "0", "to": "+inf", "density": "1"}]})
    with pytest.raises(ValidationError, match=r"atoms\[0\]: missing field 'at'"):
        distribution_from_json({"atoms": [{"mass": "1"}]})
    with pytest.raises(ValidationError, match=r"atoms\[0\].mass"):
        distribution_from_json({"atoms": [{"at": "0", "mass": "lots"}]})
    with pytest.raises(ValidationError):
        distribution_from_json([1, 2, 3])


def test_maps():
    assert load_map("tests/test_files/double.json") == linear_map(2)
    assert map_from_json({"r_pole": "0"}) == r_map(0)
    assert map_from_json({"r_pole": "inf"}).is_identity
    document = map_to_json(r_map(1))
    assert document["orientation"] == "dec"
    assert document["exceptional"] == ["1"]
    assert map_from_json(document) == r_map(1)


def test_map_exceptional_points_are_inferred():
    document = map_to_json(r_map(0))
    del document["exceptional"]
    assert map_from_json(document) == r_map(0)


def test_invalid_map_documents():
    with pytest.raises(ValidationError, match="orientation"):
        map_from_json({"orientation": "up", "pieces": []})
    with pytest.raises(ValidationError, match="tile the line"):
        map_from_json({"orientation": "inc", "pieces": [
            {"from": "0", "to": "+inf", "a": "1", "b": "0", "c": "0", "d": "1"}]})
    with pytest.raises(ValidationError, match=r"\+inf"):
        map_from_json({"orientation": "inc", "pieces": [
            {"from": "-inf", "to": "0", "a": "1", "b": "0", "c": "0", "d": "1"}]})


def test_circle_documents():
    c = from_parts(atoms=[(0.5, 0.25)], arcs=[(3.0, 1.0, 0.75)])
    document = circle_to_json(c)
    assert document["atoms"] == [{"angle": "0.5", "mass": "0.25"}]
    assert circle_kuiper(circle_from_json(document), c) <= 1e-12
    whole = circle_from_json({"segments": [{"from": "0", "to": "0", "mass": "1"}]})
    assert circle_kuiper(whole, from_parts(arcs=[(-math.pi, 2 * math.pi, 1.0)])) <= 1e-12
    with pytest.raises(ValidationError, match="not an angle"):
        circle_from_json({"atoms": [{"angle": "north", "mass": "1"}]})


def test_to_json_dispatch(tmp_path):
    path = tmp_path / "double.json"
    write_file(str(path), to_json(linear_map(2)))
    assert load_map(str(path)) == linear_map(2)
    assert to_json(make_dirac(0)) == {"atoms": [{"at": "0", "mass": "1"}], "segments": []}
    with pytest.raises(KuiperException):
        to_json(Interval.closed(0, 1))


def test_generated_distributions_validate_and_repeat():
    for seed in range(5):
        first = random_distribution(np.random.default_rng(np.random.SeedSequence(seed)), 6)
        second = random_distribution(np.random.default_rng(np.random.SeedSequence(seed)), 6)
        assert dumps(to_json(first)) == dumps(to_json(second))
        assert first.interval_mass(Interval.real_line()) == 1
        assert distribution_from_json(to_json(first)) == first


def test_generated_maps_invert():
    for seed in range(5):
        g = random_map(np.random.default_rng(np.random.SeedSequence(seed)), 5)
        assert compose(invert(g), g).is_identity
        assert map_from_json(to_json(g)) == g
    assert compose(invert(MonotoneMap.identity()), MonotoneMap.identity()).is_identity
