"""Numerical laboratory for two-variable means and the balancing equation."""

from .errors import (
    DomainError, InvalidMeanError, MeanLabError, MonotonicityError, NoBracketError, ParseError,
    RangeError, SpecError,
)
from .numerics import Interval, ScalarFn, check_monotone, invert_monotone, solve_bracketed
from .genexpr import GenFn, differentiate, eval_expr, parse_expr, to_str, validate_generator
from .means import (
    ARITHMETIC, Bajraktarevic, Cauchy, Conjugate, ExampleK, Fitted, Matkowski, MaxMean, Mean,
    MinMean, Proj1, Proj2, QuasiArithmetic, Symmetrized, WeightedQA, eval_mean, make_mean,
    parse_mean_spec,
)
from .properties import (
    DefectReport, balancing_defect, bisymmetry_defect, check_property, iqa_defect,
    matkowski_criterion, symmetry_defect,
)
from .dynamics import (
    Decomposition, Orbit, decompose, estimate_domain_D, local_qa_scan, probe_psi_continuity,
    run_orbit, section_psi,
)

__version__ = "0.1.0"
