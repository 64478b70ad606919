"""Bayesian MMSE toolkit for transmissivity sensing of pure-loss channels."""

from .fisher_bounds import BoundsReport, bounds_report, jb, jd, je_inv, qfi_fock
from .fock_closed_forms import (
    binomial_law,
    binomial_weight,
    fock_b_eigenvalues_generic,
    fock_b_eigenvalues_twopoint,
    fock_mmse_beta,
    fock_mmse_generic,
    fock_mmse_twopoint,
    generic_prior_functionals,
)
from .fock_core import (
    DensityMatrix,
    FockState,
    InBetweenState,
    PureState,
    as_pure,
    commutator_norm,
    mean_photon,
    pure_to_density,
)
from .loss_channel import apply_kraus, apply_ladder, kraus_operators, ladder_propagator
from .numeric import DIVERGENT, POLICY, Divergent, is_divergent
from .personick_solver import (
    GammaAccumulator,
    GammaSet,
    MmseReport,
    PersonickSet,
    build_gammas,
    mmse,
    mmse_lower_bound,
    solve_b,
)
from .pnr_measurement import conditional_means, in_between_outcome_law, outcome_law, pnr_mse
from .priors import (
    BetaPrior,
    DeltaPrior,
    NumericPrior,
    Prior,
    QuadratureRule,
    TwoPointPrior,
    make_rule,
    parse_prior,
    prior_fisher_jp,
)
from .search_harness import (
    ConjectureReport,
    StateSample,
    SweepResult,
    conjecture_check,
    sample_states,
    sweep,
)

__version__ = "0.1.0"
