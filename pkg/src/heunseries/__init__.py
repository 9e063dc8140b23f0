"""Hypergeometric-series solutions of the general Heun equation.

Expansions in Gauss functions 2F1(alpha, beta; gamma0 - n; z), the
accessory-parameter polynomials that terminate them, and checks of the
resulting closed forms against the differential equation.
"""

from .accessory import (
    AccessoryPolynomial,
    TerminationClass,
    continued_fraction_residual,
    q_polynomial,
    refine_root,
    solve_q,
    validate_termination_class,
)
from .errors import (
    ComplexExponents,
    ComputationError,
    DivisionByZero,
    DomainError,
    FuchsianViolation,
    HeunError,
    NoConvergence,
    NotTerminated,
    PoleAtC,
    RecurrenceBreakdown,
    SingularA,
    StepFailure,
    ValidationError,
    WrongGamma0,
    ZeroDenominator,
)
from .gauss2f1 import contiguous_lower_c, contiguous_raise_c, hyp2f1, hyp2f1_derivative
from .params import (
    ExpansionSpec,
    Frame,
    Gamma0,
    HeunParameters,
    Terminating,
    Truncated,
    derive_delta,
    make_params,
    map_one_minus_delta_transform,
    map_positive_epsilon,
    map_to_one_minus_z,
)
from .recurrence import (
    CoefficientSequence,
    RecurrenceContext,
    coeff_P,
    coeff_Q,
    coeff_R,
    generate_coefficients,
)
from .solutions import (
    SolutionForm,
    build_finite_solution,
    build_positive_epsilon_solution,
    build_second_solution,
    evaluate,
    reduce_to_polynomial_form,
)
from .verification import VerificationReport, Verdict, heun_residual, integrate_heun, verify_solution, wronskian

__version__ = "0.1.0"
