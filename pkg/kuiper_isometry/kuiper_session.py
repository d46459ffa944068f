from configparser import ConfigParser
from typing import List

from kuiper_isometry.kuiper_exception import KuiperException


class KuiperSession(object):
    """
    passable session object containing the configuration and the active profile.
    """

    def __init__(self, profile: str, config: ConfigParser):
        """initialize the KuiperSession object which holds the configuration.

        Parameters
        ----------
        profile : str
            The profile in use (e.g. QUICK, STANDARD, FULL)
        config : ConfigParser
            the configuration object read from the bundled and override configuration files.

        Returns
        -------
        class
            Class declaration, returns the initialized KuiperSession class.

        """
        if not config.has_section(profile):
            raise KuiperException(f"profile {profile} is not configured")
        self._profile = profile
        self._config = config

    def get_setting(self, section, setting):
        """convenience method for getting a configured item from the included configuration.

        Parameters
        ----------
        section : str
            The section of the configuration to read.
        setting : str
            The item within a block to read.

        Returns
        -------
        str
            the configuration entry

        """
        return self._config.get(section.upper(), setting)

    def get_profile_setting(self, setting):
        return self.get_setting(self._profile, setting)

    def get_int(self, setting) -> int:
        return self._config.getint(self._profile, setting)

    def get_float(self, setting) -> float:
        return self._config.getfloat(self._profile, setting)

    def get_int_list(self, setting) -> List[int]:
        return [int(item) for item in self.get_profile_setting(setting).split(",") if item.strip()]

    def get_trials(self, suite: str) -> int:
        """Trial count of a verification suite in the active profile."""
        key = f"{suite}_trials"
        if not self._config.has_option(self._profile, key):
            raise KuiperException(f"no trial count configured for suite {suite}")
        return self.get_int(key)

    def get_profile(self) -> str:
        return self._profile

    def get_config(self):
        """Returns the configuration being used by the session

        Returns
        -------
        ConfigParser
            The configuration object which contains the profile settings.
        """
        return self._config
