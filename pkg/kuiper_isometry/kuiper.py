import os
from configparser import ConfigParser, ExtendedInterpolation

from kuiper_isometry.kuiper_exception import KuiperException
from kuiper_isometry.kuiper_profiles import KuiperProfiles
from kuiper_isometry.kuiper_services import KuiperServices
from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.services.characterize_service import CharacterizeService
from kuiper_isometry.services.circle_service import CircleService
from kuiper_isometry.services.metric_service import MetricService
from kuiper_isometry.services.transform_service import TransformService
from kuiper_isometry.services.verify_service import VerifyService


class Kuiper(object):
    """
    The Kuiper class is used to create the services that compute distances, apply transformations and verify
    properties of distributions. It reads the bundled profiles and an optional override file, and wraps the resulting
    kuiper_session.KuiperSession object, which is passed to the services.
    """

    def __init__(self, profile: KuiperProfiles = KuiperProfiles.STANDARD, config_file_override: str = None):
        """
        :param profile: the configuration profile to work with. Defaults to the 'STANDARD' profile.
        :param config_file_override: absolute path to a config file containing settings to override default config
        """
        config = _read_config([
            os.path.dirname(os.path.realpath(__file__)) + "/envs/profiles.cfg",
            config_file_override
        ])
        self._session = KuiperSession(profile.value, config)

    def client(self, service_name: KuiperServices):
        """
        :param service_name - the desired service, such as KuiperServices.METRIC_SERVICE or
        KuiperServices.VERIFY_SERVICE.
        """
        if service_name == KuiperServices.METRIC_SERVICE:
            return MetricService(session=self._session)
        elif service_name == KuiperServices.TRANSFORM_SERVICE:
            return TransformService(session=self._session)
        elif service_name == KuiperServices.CIRCLE_SERVICE:
            return CircleService(session=self._session)
        elif service_name == KuiperServices.CHARACTERIZE_SERVICE:
            return CharacterizeService(session=self._session)
        elif service_name == KuiperServices.VERIFY_SERVICE:
            return VerifyService(session=self._session)
        else:
            raise KuiperException("Invalid service name: " + str(service_name))

    @property
    def session(self) -> KuiperSession:
        return self._session

    def __str__(self):
        response = "KUIPER CONFIGURATION"
        response = response + "\n\n" + len(response) * "-" + "\n"
        response = response + "profile: {}\n".format(self._session.get_profile())

        config = self._session.get_config()
        for section in config.sections():
            response = response + "\n{}\n".format(section)
            for setting, value in config[section].items():
                response = response + "{}: {}\n".format(setting, value)

        return response


def _read_config(config_files):
    config = ConfigParser(interpolation=ExtendedInterpolation())

    for config_file in config_files:
        if config_file is not None:
            with open(config_file) as source:
                config.read_file(source)

    return config
