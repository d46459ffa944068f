from enum import Enum


class KuiperProfiles(Enum):
    """
    Named configuration profiles. Each maps to a section of envs/profiles.cfg.
    """

    QUICK = "QUICK"
    STANDARD = "STANDARD"
    FULL = "FULL"
