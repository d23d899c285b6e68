"""Rational-function divisors and black-box rationality classification.

A rational function P/Q in coprime form has divisor d = deg P - deg Q, and
d is exactly the boundary limit of z*f'(z)/f(z); conversely a meromorphic
function whose z*f'/f tends to an (automatically integer) limit uniformly in
the angle must be rational.  This package makes both directions executable:

- :mod:`ratfun.exact` -- exact polynomial/rational arithmetic over the
  Gaussian rationals (GCD, coprime reduction, divisor, log-derivative).
- :mod:`ratfun.parser` / :mod:`ratfun.expressions` -- expression parsing and
  forward-mode (f, f') evaluation for black-box use.
- :mod:`ratfun.contour` -- trapezoidal winding/moment integrals on circles.
- :mod:`ratfun.estimation` -- radius-schedule probes of z*f'/f, the
  rational/not-rational/inconclusive classifier, zero/pole residual checks
  and the fundamental-theorem-of-algebra counting check.
- :mod:`ratfun.service` / :mod:`ratfun.cli` -- FastAPI front end and the
  thin CLI client.
"""

from .contour import (
    ContourSingularityError,
    ContourSpec,
    WindingResult,
    circle_nodes,
    moment_integral,
    winding_integral,
)
from .estimation import (
    DivisorEstimate,
    FtaCheck,
    NecessityReport,
    RadiusProbe,
    Verdict,
    classify,
    classify_estimate,
    fta_check,
    limit_probe,
    residual_zg,
    verify_necessity,
)
from .exact import (
    GaussianRational,
    PoleError,
    Polynomial,
    RationalFunctionExact,
    cauchy_root_bound,
    divisor,
    eval_exact,
    joint_cauchy_bound,
    log_derivative,
    poly_gcd,
    reduce,
)
from .expressions import (
    Add,
    Const,
    Div,
    Exp,
    Expr,
    IntPow,
    JetEvaluationError,
    JetValue,
    Mul,
    Neg,
    Sub,
    Var,
    ZeroFunctionError,
    as_exact_rational,
    eval_jet,
    eval_jet_many,
    jet_evaluator,
    polynomial_expression,
    print_canonical,
    rational_expression,
)
from .parser import ParseError, parse

__version__ = "0.1.0"
