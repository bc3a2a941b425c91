"""Stationary distribution of reflected Brownian motion in the quadrant.

Exact Laplace transforms of the stationary and boundary measures for
orthogonal reflection, their tail asymptotics, the kernel/uniformization
machinery behind them, and two independent numerical oracles (diffusion
simulation and Laplace inversion) that cross-check every closed form.
"""

from .asymptotics import AsymptoticReport, classify_regime, constants_C1_C2, nu1_tail
from .chebyshev import (
    ChebyshevOrder,
    cheb_T,
    cheb_T_deriv,
    classify_nature,
    expansion_at_minus_one,
)
from .checks import CheckResult, run_checks
from .kernel import (
    G_ratio,
    HyperbolaR,
    KernelCoeffs,
    KernelPoint,
    contains_G_R,
    discriminants,
    gamma,
    gamma1,
    gamma2,
    hyperbola,
    theta1_at_branch_point,
    theta1_branch,
    theta2_branch,
)
from .model import (
    DerivedScalars,
    ModelParams,
    derived_scalars,
    load_config,
    params_from_dict,
    params_to_dict,
    validate_parameters,
)
from .oracle import (
    DensityTable,
    DiagonalClosedForms,
    SimConfig,
    SimResult,
    diagonal_closed_forms,
    invert_transform,
    simulate,
)
from .transform import (
    TransformBundle,
    continuation_check,
    make_bundle,
    phi1_eval,
    phi2_eval,
    phi_eval,
    psi1_eval,
    psi2_eval,
    w_eval,
)
from .uniformization import (
    GroupReport,
    SpherePoint,
    W_of_s,
    classify_solution_nature,
    group_elements,
    group_order,
    s0,
    theta_of_s,
)

__version__ = "0.1.0"
