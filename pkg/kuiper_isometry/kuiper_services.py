from enum import Enum


class KuiperServices(Enum):
    """
    The KuiperServices class is used to specify a service when interacting with the kuiper_isometry package.
    """

    METRIC_SERVICE = "metric_service"
    TRANSFORM_SERVICE = "transform_service"
    CIRCLE_SERVICE = "circle_service"
    CHARACTERIZE_SERVICE = "characterize_service"
    VERIFY_SERVICE = "verify_service"
