from .abel_jacobi import abel_jacobi, aj_jet, hyperelliptic_test, reduce_mod_lattice
from .curve_model import (
    branch_points,
    differential_jet,
    parse_curve,
    point_from_text,
    weierstrass_points,
)
from .homology_periods import (
    canonical_homology,
    cycle_integral,
    dual_form_local_data,
    normalized_jets,
    period_matrix,
)

__all__ = [
    "abel_jacobi", "aj_jet", "hyperelliptic_test", "reduce_mod_lattice",
    "branch_points", "differential_jet", "parse_curve", "point_from_text", "weierstrass_points",
    "canonical_homology", "cycle_integral", "dual_form_local_data", "normalized_jets", "period_matrix",
]
