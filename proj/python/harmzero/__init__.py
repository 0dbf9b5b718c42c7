"""Zeros and preimages of harmonic mappings."""

from ._core import (
    HarmzeroError,
    Mapping,
    Report,
    caustics,
    rho_critical,
    solve_all_zeros,
    solve_preimages,
)

__all__ = [
    "HarmzeroError",
    "Mapping",
    "Report",
    "caustics",
    "rho_critical",
    "solve_all_zeros",
    "solve_preimages",
]
