"""Survival probabilities for the N-seasonal discrete-time risk model."""

from .errors import *  # noqa: F401,F403
from .initvals import (
    InitialSystem,
    InitialVector,
    RowTag,
    bi_seasonal_closed_form,
    build_initial_system,
    mass_identity_defect,
    solve_initial_values,
)
from .model import ModelClass, Regime, SeasonalModel, build_model, classify, degenerate_survival
from .oracle import (
    MonteCarloEstimate,
    enum_survival_exact,
    homogeneous_finite_ruin,
    homogeneous_ultimate_ruin,
    mc_survival,
    mc_survival_ultimate,
)
from .pmf import (
    IntegerPMF,
    convolve,
    convolve_all,
    pgf_derivative,
    pgf_eval,
    pmf_from_table,
    pmf_poisson,
    point_mass,
)
from .roots import DiskRoot, RootConfig, RootSet, characteristic_poly, find_unit_disk_roots
from .survival import (
    ConsistencyReport,
    MSequence,
    SurvivalTable,
    compute_m_sequence,
    consistency_check,
    round_display,
    survival_finite,
    survival_ultimate,
)

__version__ = "0.1.0"
