import pytest

from kuiper_isometry.kuiper import Kuiper
from kuiper_isometry.kuiper_exception import UnknownSuiteError, ValidationError
from kuiper_isometry.kuiper_profiles import KuiperProfiles
from kuiper_isometry.kuiper_services import KuiperServices as Services
from kuiper_isometry.resources.verify_report import TrialOutcome, VerifyReport
from kuiper_isometry.services.verify_service import SUITES, run_suite


def _verify(profile=KuiperProfiles.QUICK):
    return Kuiper(profile).client(Services.VERIFY_SERVICE)


@pytest.mark.parametrize("suite", list(SUITES))
def test_suites_pass(suite):
    report = _verify().run(suite, seed=42, trials=3)
    assert report.trials == 3
    assert report.failures == []
    assert report.passed


def test_reports_are_deterministic():
    verify = _verify()
    first = verify.run("lemma1", seed=7, trials=5)
    second = verify.run("lemma1", seed=7, trials=5)
    assert first == second
    assert first.to_json()["failures"] == second.to_json()["failures"]
    assert first.exactness == "5/5 exact"


def test_profile_defaults():
    verify = _verify()
    report = verify.run("fixtures")
    assert report.seed == 42
    assert report.trials == 1
    assert verify.params()["max_nodes"] == 6
    assert verify.params("large")["max_nodes"] == 24
    assert verify.params()["quantize_levels"] == [4, 16]
    assert "circle_components" in verify.suites()


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        _verify().run("lemma9")
    with pytest.raises(UnknownSuiteError):
        run_suite("lemma9", 1, 1, {})


def test_library_errors_become_failures(mocker):
    def broken(rng, params):
        raise ValidationError("intermediate distribution lost mass")

    mocker.patch.dict(SUITES, {"broken": broken})
    report = run_suite("broken", 3, 2, _verify().params())
    assert not report.passed
    assert [f["trial"] for f in report.failures] == [0, 1]
    assert report.failures[0]["error"] == "ValidationError: intermediate distribution lost mass"
    assert report.exactness == "0/2 exact"


def test_other_errors_propagate(mocker):
    def crashing(rng, params):
        raise ZeroDivisionError()

    mocker.patch.dict(SUITES, {"crashing": crashing})
    with pytest.raises(ZeroDivisionError):
        run_suite("crashing", 3, 1, _verify().params())


def test_report_document():
    report = VerifyReport("chain", 42, 10, [], 9, wall_time=1.23456789)
    assert report.to_json() == {
        "suite": "chain",
        "seed": 42,
        "trials": 10,
        "failures": [],
        "exactness": "9/10 exact",
        "wall_time": 1.234568,
    }
    assert str(report) == "chain: 10 trials, ok, 9/10 exact (1.23s)"
    assert report == VerifyReport("chain", 42, 10, [], 9, wall_time=0.5)
    assert TrialOutcome(False, [{"check": "x"}]).failures == ({"check": "x"},)


@pytest.mark.regression
def test_lemma1_standard_run():
    report = _verify(KuiperProfiles.STANDARD).run("lemma1", seed=7)
    assert report.trials == 1000
    assert report.passed
    assert report.exactness == "1000/1000 exact"


@pytest.mark.regression
def test_all_suites_standard_seed():
    reports = _verify(KuiperProfiles.STANDARD).run_all(seed=42, trials=50)
    assert [r.suite for r in reports] == list(SUITES)
    assert all(r.passed for r in reports)


def test_lemma3_identity_passes():
    report = _verify().run("lemma3", seed=11, trials=10)
    assert report.failures == []


@pytest.mark.regression
@pytest.mark.parametrize("suite", ["rotation", "circle"])
def test_circle_suites_standard_run(suite):
    report = _verify(KuiperProfiles.STANDARD).run(suite, seed=42)
    assert report.trials == 200
    assert report.failures == []
