"""Third-order Neumann-Filon time integration for highly oscillatory linear PDEs."""
from .operators import (
    EllipticOperator,
    GridSpec,
    InvalidGridError,
    NumericError,
    Propagator,
    apply_multiplier,
    build_chebyshev_dirichlet,
    build_fourier_diff2,
    commutator_apply,
    kron_sum,
    lift_multiplier,
    matrix_exp,
    scalar_operator,
    wave_first_order,
)
from .moments import MomentTable, mu1, mu2, mu2_resonant_pair, mu3
from .problem import Mode, OscillatoryPotential, Problem
from .filon import (
    FilonCoefficients,
    VertexSamples,
    compute_X,
    hermite_univariate,
    linear_bivariate,
    linear_trivariate,
    resonance_bivariate,
)
from .stepper import (
    METHODS,
    StepPlan,
    Trajectory,
    integrate,
    make_plan,
    neumann_bruteforce,
    nf3_resonance_step,
    nf3_step,
)
from .reference import (
    AnalyticSolution,
    ErrorReport,
    error_l2,
    example_problem,
    m2_step,
    m4_step,
    pde_residual,
    scalar_problem,
)

__version__ = "0.1.0"
