"""Discrete-time walks on a line with ultrametric hierarchical barriers.

Simulation of the classical (anti-)persistent and coined quantum walks in a
hierarchical coin field, plus the renormalization-group toolkit for their
walk dimensions, fixed-point flows, wall absorption, and scaling collapse.
"""

from .analysis import (
    CollapseSeries,
    ExponentFit,
    collapse_distance,
    fit_msd_exponent,
    rescale_collapse,
)
from .evolve import (
    ABSORBING,
    OPEN,
    AbsorptionRecord,
    LatticeOverflowError,
    PdfSnapshot,
    WalkState,
    dyadic_times,
    evolve,
    init_point,
    linear_times,
    run_absorbing,
    step,
)
from .hierarchy import (
    ANTI_PERSISTENT,
    PERSISTENT,
    STOCHASTIC,
    UNITARY,
    Coin2,
    CoinHierarchy,
    coin_at_site,
    coin_field,
    decompose,
    eta_of_level,
    levels_of_sites,
    make_coin,
    recompose,
)
from .rg import (
    BERNOULLI,
    BRANCHES,
    CLASSICAL,
    CLASSICAL_UNPHYSICAL,
    DIFFUSIVE,
    QUANTUM,
    QUANTUM_INTERMEDIATE,
    FixedPointReport,
    RGConvergenceError,
    RGSingularError,
    ShiftTriple,
    ansatz_scalars,
    classical_trajectory_transformed,
    dw_classical,
    dw_lambda_plus,
    dw_quantum,
    find_fixed_point,
    fixed_point_closed_form,
    flow_bernoulli_correlated,
    flow_classical_autonomous,
    flow_diffusive,
    flow_quantum_autonomous,
    flow_quantum_intermediate,
    initial_triple,
    inverse_transform_classical,
    inverse_transform_quantum,
    lambda_plus,
    off_ansatz_error,
    quantum_trajectory_transformed,
    scalar_bernoulli_step,
    scalar_classical_step,
    scalar_quantum_step,
    sflow_step,
    sflow_trajectory,
    transform_classical,
    transform_quantum,
)
from .walls import WallAmplitudes, classical_wall_closed_form, rg_wall_amplitudes

__version__ = "0.1.0"

__all__ = [
    "ABSORBING",
    "ANTI_PERSISTENT",
    "BERNOULLI",
    "BRANCHES",
    "CLASSICAL",
    "CLASSICAL_UNPHYSICAL",
    "DIFFUSIVE",
    "OPEN",
    "PERSISTENT",
    "QUANTUM",
    "QUANTUM_INTERMEDIATE",
    "STOCHASTIC",
    "UNITARY",
    "AbsorptionRecord",
    "Coin2",
    "CoinHierarchy",
    "CollapseSeries",
    "ExponentFit",
    "FixedPointReport",
    "LatticeOverflowError",
    "PdfSnapshot",
    "RGConvergenceError",
    "RGSingularError",
    "ShiftTriple",
    "WalkState",
    "WallAmplitudes",
    "ansatz_scalars",
    "classical_trajectory_transformed",
    "classical_wall_closed_form",
    "coin_at_site",
    "coin_field",
    "collapse_distance",
    "decompose",
    "dw_classical",
    "dw_lambda_plus",
    "dw_quantum",
    "dyadic_times",
    "eta_of_level",
    "evolve",
    "find_fixed_point",
    "fit_msd_exponent",
    "fixed_point_closed_form",
    "flow_bernoulli_correlated",
    "flow_classical_autonomous",
    "flow_diffusive",
    "flow_quantum_autonomous",
    "flow_quantum_intermediate",
    "init_point",
    "initial_triple",
    "inverse_transform_classical",
    "inverse_transform_quantum",
    "lambda_plus",
    "levels_of_sites",
    "linear_times",
    "make_coin",
    "off_ansatz_error",
    "quantum_trajectory_transformed",
    "recompose",
    "rescale_collapse",
    "rg_wall_amplitudes",
    "run_absorbing",
    "scalar_bernoulli_step",
    "scalar_classical_step",
    "scalar_quantum_step",
    "sflow_step",
    "sflow_trajectory",
    "step",
    "transform_classical",
    "transform_quantum",
]
