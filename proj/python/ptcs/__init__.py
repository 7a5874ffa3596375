"""Coherent states of the trigonometric Poschl-Teller well."""

from ._core import (
    CheckCase,
    CheckReport,
    CoherentState,
    NumericalError,
    ValidationError,
    autocorrelation,
    classical_energy,
    classical_trajectory,
    closed_form_mean_energy,
    cs_coefficients,
    cs_moments,
    cs_normalization,
    eigenfunction,
    energy,
    evolve,
    husimi,
    lower_symbol,
    mean_energy,
    momentum_matrix,
    quantize,
    run_suite,
    suite_names,
    superpotential,
    time_averaged_husimi,
    trajectory_band_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")]
