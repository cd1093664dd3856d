from .ivhs_analysis import hyperelliptic_breaking_experiment, schiffer_direction
from .schiffer_engine import criterion_sum, first_order_update, schiffer_series

__all__ = [
    "hyperelliptic_breaking_experiment", "schiffer_direction",
    "criterion_sum", "first_order_update", "schiffer_series",
]
