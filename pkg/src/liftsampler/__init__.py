"""Unbiased sampling from constrained and composite log-concave targets via
epigraph lifting and a proximal sampler whose restricted Gaussian oracle is
realized by rejection sampling around a cutting-plane proposal center."""

from ._backend import backend_name
from .cutting_plane import CpProblem, CpResult, InfeasibleRegionError, cp_minimize
from .lifting import (
    CompositeTarget,
    ConstrainedTarget,
    DoubleLiftedTarget,
    SingleLiftedTarget,
    drop_lift,
    lifted_potential,
    q_member,
    qtilde_member,
)
from .oracles import (
    CapabilityError,
    FunctionOracle,
    NumericError,
    SeparationResult,
    SetOracle,
    project_epigraph_prox,
    prox_ftilde,
    separate_ball,
    separate_constrained_Q,
    separate_epigraph_subgrad,
    separate_intersection,
    separate_Qtilde,
    separation_from_projection,
)
from .proposal import ProposalSpec, RadialLaw, ars_sample, inverse_exp_tail, sample_proposal, sample_unit_sphere
from .rgo import (
    RgoError,
    RgoInputComposite,
    RgoInputConstrained,
    RgoStats,
    p1_eval,
    ptilde1_eval,
    rgo_sample_composite,
    rgo_sample_constrained,
    rgo_subproblem_composite,
    rgo_subproblem_constrained,
    theta_eval,
    theta_tilde_eval,
    zeta_eval,
)
from .sampler import (
    ChainState,
    SamplerConfig,
    Trace,
    init_composite,
    init_constrained,
    mix_seed,
    run,
    step_composite,
    step_constrained,
)

__version__ = "0.1.0"
