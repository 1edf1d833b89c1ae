"""Python bindings for the degenerate elliptic solver."""

from ._degel import (
    DegelError,
    M0,
    dyadic_A,
    exact_example_solution,
    pucci_minus,
    pucci_plus,
    run_experiment,
    sharp_exponent,
    smallest_root,
    solve_config,
)

__all__ = [
    "DegelError",
    "M0",
    "dyadic_A",
    "exact_example_solution",
    "pucci_minus",
    "pucci_plus",
    "run_experiment",
    "sharp_exponent",
    "smallest_root",
    "solve_config",
]
