"""Dissipative field mode: response, thermodynamics, correlators and Langevin checks."""

from ._core import (
    SusceptibilityModel,
    __version__,
    corr_phi,
    drude_lorentz,
    greens,
    kk_max_rel_dev,
    ohmic,
    re_chi_kk,
    read_csv,
    run,
    sum_rule,
    tabulated,
    thermo_point,
)

__all__ = [
    "SusceptibilityModel",
    "__version__",
    "corr_phi",
    "drude_lorentz",
    "greens",
    "kk_max_rel_dev",
    "ohmic",
    "re_chi_kk",
    "read_csv",
    "run",
    "sum_rule",
    "tabulated",
    "thermo_point",
]
