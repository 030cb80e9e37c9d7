"""certirelu: random shallow ReLU networks with computable sup-norm
function and gradient error certificates, plus a policy-evaluation
benchmark and a sweep/reporting CLI."""

from .bounds import BoundReport, SmoothnessCertificate, derived_constants, sphere_area
from .fitting import (
    CapsCheck,
    FitProblem,
    coefficient_caps_check,
    design_matrix,
    fit_least_squares,
    training_objective,
)
from .fourier import (
    FourierProfile,
    RhoEstimate,
    estimate_rho,
    forward_ft,
    inverse_ft,
    make_profile,
    multiplier,
    multiplier_gradient,
    multiplier_hat,
)
from .network import (
    ShallowReluNetwork,
    StackedParameters,
    feature_vector,
    load_network,
    relu,
    relu_step,
    save_network,
    stack_parameters,
)
from .policy_eval import (
    ControlAffineProblem,
    SimulationResult,
    ValueModel,
    consistency_report,
    joint_error,
    linear_benchmark,
    pde_residual,
    simulate_value,
    tanh_scalar_example,
)
from .sampling import (
    DirectionOffsetSample,
    SamplingDensity,
    density_floor,
    derived_rng,
    sample_pairs,
    sample_sphere,
    uniform_density,
)
from .experiments import (
    SweepConfig,
    SweepRow,
    Target,
    certify_rho,
    emit_report,
    localized_value_table,
    resolve_target,
    run_sweep,
    sup_error,
)

__version__ = "0.1.0"
