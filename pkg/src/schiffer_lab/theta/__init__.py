from .theta_tools import (
    characteristics,
    even_characteristics,
    hyperelliptic_theta_test,
    theta_null,
    theta_null_path_jet,
)

__all__ = ["characteristics", "even_characteristics", "hyperelliptic_theta_test", "theta_null",
           "theta_null_path_jet"]
