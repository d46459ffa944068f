import json
from fractions import Fraction

import pytest

from kuiper_isometry.cli import EXIT_INVALID, EXIT_OK, EXIT_VIOLATION, main
from kuiper_isometry.kuiper_exception import ValidationError
from kuiper_isometry.resources.distribution import from_atoms, make_uniform
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.monotone_map import compose, invert
from kuiper_isometry.services.verify_service import SUITES
from kuiper_isometry.utils.json_io import distribution_from_json, load_distribution, load_file, map_from_json

U03 = "tests/test_files/U03.json"
U12 = "tests/test_files/U12.json"
DIRAC0 = "tests/test_files/dirac0.json"


def test_dist_with_witness(capsys):
    assert main(["dist", "kuiper", U03, U12, "--witness"]) == EXIT_OK
    assert capsys.readouterr().out == "2/3 exact\nwitness [1,2] signed=-2/3\n"


def test_dist_json(capsys):
    assert main(["--format", "json", "dist", "ks", U03, U03]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"metric": "ks", "value": "0", "exact": True}


def test_dist_errors(capsys):
    assert main(["dist", "kuiper", U03, "tests/test_files/malformed.json"]) == EXIT_INVALID
    assert "malformed JSON at line" in capsys.readouterr().err
    assert main(["dist", "kuiper", U03, "tests/test_files/missing.json"]) == EXIT_INVALID
    assert main(["dist", "tv", U03, U12, "--witness"]) == EXIT_INVALID


def test_transform_r_pole(tmp_path):
    out = tmp_path / "inverted.json"
    assert main(["transform", "--r-pole", "0", U12, "-o", str(out)]) == EXIT_OK
    document = load_file(str(out))
    assert document["segments"] == [{"from": "1/2", "to": "1", "moebius": {"a": "2", "b": "-1", "c": "1", "d": "0"}}]
    assert load_distribution(str(out)).piece_at(Fraction(3, 4)) == Moebius(2, -1, 1, 0)


def test_transform_identity_is_byte_identical(tmp_path):
    out = tmp_path / "same.json"
    assert main(["transform", "--r-pole", "inf", U12, "-o", str(out)]) == EXIT_OK
    with open(U12) as original:
        assert out.read_text() == original.read()


def test_transform_map_file(capsys):
    assert main(["transform", "--map", "tests/test_files/double.json", U12]) == EXIT_OK
    assert distribution_from_json(json.loads(capsys.readouterr().out)) == make_uniform(Fraction(1, 2), 1)


def test_transform_mass_deficiency(capsys):
    assert main(["transform", "--r-pole", "0", DIRAC0]) == EXIT_INVALID
    assert "not a probability measure" in capsys.readouterr().err


def test_support(capsys):
    assert main(["support", U03]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == [
        "closed support: [0,3]",
        "co-interval support: (0,3)",
        "convex hull: (0,3)",
        "bounded gaps: none",
    ]


def test_characterize(capsys):
    assert main(["characterize", U03, "--other", U12]) == EXIT_OK
    assert capsys.readouterr().out == "outer=(-inf,0] u [3,+inf) gaps=none\nunit distant: false\n"
    assert main(["characterize", DIRAC0, "--other", U12]) == EXIT_OK
    assert capsys.readouterr().out == "Dirac measure at 0: unit distance iff nu({0}) = 0\nunit distant: true\n"


def test_quantize(tmp_path):
    out = tmp_path / "atoms.json"
    assert main(["quantize", U03, "3", "-o", str(out)]) == EXIT_OK
    third = Fraction(1, 3)
    assert load_distribution(str(out)) == from_atoms([(0, third), (1, third), (2, third)])
    with pytest.raises(SystemExit) as excinfo:
        main(["quantize", U03, "0"])
    assert excinfo.value.code == 2


def test_gen_is_deterministic(capsys):
    assert main(["gen", "distribution", "--seed", "1", "--complexity", "small"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["gen", "distribution", "--seed", "1", "--complexity", "small"]) == EXIT_OK
    assert capsys.readouterr().out == first
    mu = distribution_from_json(json.loads(first))
    assert sum((mass for _, mass in mu.atoms), Fraction(0)) <= 1


def test_gen_map(capsys):
    assert main(["gen", "map", "--seed", "1", "--complexity", "small"]) == EXIT_OK
    g = map_from_json(json.loads(capsys.readouterr().out))
    assert compose(invert(g), g).is_identity


def test_verify_with_report(tmp_path, capsys):
    report = tmp_path / "lemma1.json"
    code = main(["--profile", "QUICK", "verify", "lemma1", "--seed", "7", "--trials", "5", "--report", str(report)])
    assert code == EXIT_OK
    document = load_file(str(report))
    assert document["failures"] == []
    assert document["exactness"] == "5/5 exact"
    assert capsys.readouterr().out.startswith("lemma1: 5 trials, ok, 5/5 exact")


def test_verify_violation(mocker, capsys):
    def failing(rng, params):
        raise ValidationError("broken invariant")

    mocker.patch.dict(SUITES, {"failing": failing})
    assert main(["--profile", "QUICK", "verify", "failing", "--trials", "2"]) == EXIT_VIOLATION
    assert "2 failures" in capsys.readouterr().out


def test_usage_errors():
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "lemma9"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
