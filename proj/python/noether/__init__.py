"""Python access to the noether core: symbolic currents, the non-local model and the lattice simulator."""

from fractions import Fraction

from ._noether import (
    Expr,
    Lagrangian,
    LatticeConfig,
    ParseError,
    State,
    dispersion,
    expr_from_json,
    gauged_functional_derivative,
    init_packet,
    parse_expr,
    plane_wave,
    run_criterion,
    series_vector_current,
    shipped_lagrangians,
    suite_names,
    truncated_model_lagrangian,
    truncated_sqrt,
    truncation_error,
    two_sided_kernel,
    two_sided_kernel_closed,
    ward_defect,
)
from ._noether import series_coeff as _series_coeff


def series_coeff(l):
    """f_l(m) as (Fraction, mass_power): f_l(m) = value * m**mass_power."""
    num, den, power = _series_coeff(l)
    return Fraction(int(num), int(den)), power


__all__ = [
    "Expr",
    "Lagrangian",
    "LatticeConfig",
    "ParseError",
    "State",
    "dispersion",
    "expr_from_json",
    "gauged_functional_derivative",
    "init_packet",
    "parse_expr",
    "plane_wave",
    "run_criterion",
    "series_coeff",
    "series_vector_current",
    "shipped_lagrangians",
    "suite_names",
    "truncated_model_lagrangian",
    "truncated_sqrt",
    "truncation_error",
    "two_sided_kernel",
    "two_sided_kernel_closed",
    "ward_defect",
]
