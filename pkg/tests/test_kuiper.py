from kuiper_isometry.kuiper import Kuiper
from kuiper_isometry.kuiper_exception import KuiperException
from kuiper_isometry.kuiper_profiles import KuiperProfiles
from kuiper_isometry.kuiper_services import KuiperServices as Services
from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.services.characterize_service import CharacterizeService
from kuiper_isometry.services.circle_service import CircleService
from kuiper_isometry.services.metric_service import MetricService
from kuiper_isometry.services.transform_service import TransformService
from kuiper_isometry.services.verify_service import VerifyService

import pytest


def test_default_kuiper_client():
    client = Kuiper()
    assert client.session.get_profile() == "STANDARD"
    assert client.session.get_trials("lemma1") == 1000
    assert client.session.get_float("exact_tolerance") == 1e-12


def test_kuiper_client_config_override():
    client = Kuiper(KuiperProfiles.QUICK, config_file_override="tests/test_files/config_override.cfg")
    assert client.session.get_trials("lemma1") == 7
    assert client.session.get_int("seed") == 7
    # untouched keys still come from the bundled profiles
    assert client.session.get_trials("chain") == 40


def test_profile_settings_inherit_defaults():
    client = Kuiper(KuiperProfiles.FULL)
    assert client.session.get_int("workers") == 4
    assert client.session.get_profile_setting("complexity") == "medium"
    assert client.session.get_int("medium_max_nodes") == 12
    assert client.session.get_int_list("quantize_levels") == [4, 16, 256]


def test_quick_profile_overrides_levels():
    client = Kuiper(KuiperProfiles.QUICK)
    assert client.session.get_int_list("quantize_levels") == [4, 16]
    assert client.session.get_float("circle_epsilon") == 1e-3


def test_clients():
    client = Kuiper(KuiperProfiles.QUICK)
    assert isinstance(client.client(Services.METRIC_SERVICE), MetricService)
    assert isinstance(client.client(Services.TRANSFORM_SERVICE), TransformService)
    assert isinstance(client.client(Services.CIRCLE_SERVICE), CircleService)
    assert isinstance(client.client(Services.CHARACTERIZE_SERVICE), CharacterizeService)
    assert isinstance(client.client(Services.VERIFY_SERVICE), VerifyService)


def test_invalid_service_name():
    with pytest.raises(KuiperException):
        Kuiper().client("plotting_service")


def test_unknown_trial_count():
    with pytest.raises(KuiperException):
        Kuiper().session.get_trials("nonexistent")


def test_missing_profile():
    client = Kuiper()
    with pytest.raises(KuiperException):
        KuiperSession("NIGHTLY", client.session.get_config())


def test_configuration_listing():
    listing = str(Kuiper(KuiperProfiles.QUICK))
    assert listing.startswith("KUIPER CONFIGURATION")
    assert "profile: QUICK" in listing
    assert "lemma1_trials: 40" in listing
