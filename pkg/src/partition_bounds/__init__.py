"""Certified asymptotic expansions of p(n+k), 1/p(n) and p(n+k)/p(n)."""
from .exact_partition import ExactPartitionTable, build_table, load_or_build
from .inverse_expansion import approx_inv_p, g
from .numerics import BoundedApprox, PrecisionContext
from .quotient_expansion import ExpansionTable, approx_ratio, c, expansion_table, quotient_error_budget
from .shift_expansion import approx_p_shift, omega1

__all__ = [
    "BoundedApprox",
    "ExactPartitionTable",
    "ExpansionTable",
    "PrecisionContext",
    "approx_inv_p",
    "approx_p_shift",
    "approx_ratio",
    "build_table",
    "c",
    "expansion_table",
    "g",
    "load_or_build",
    "omega1",
    "quotient_error_budget",
]
