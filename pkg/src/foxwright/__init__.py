"""Fox-Wright function evaluation, univalence criteria and disc verification."""

from .criteria import (
    Criterion,
    CriterionReport,
    ExampleFamily,
    Overall,
    SequenceKind,
    Threshold,
    build_example_params,
    check_theorem,
    coefficient_inequality,
    corollary_threshold,
    lemma5_profile,
    luke_upper_bound,
    ozaki_check,
    sequence_checks,
    subordinating_sequence,
    with_lower_two,
)
from .errors import (
    ConstraintError,
    ConvergenceError,
    DomainError,
    FoxWrightError,
    NumericalError,
    ParameterError,
    ParseError,
    RangeError,
    UsageError,
)
from .gamma_core import digamma, gamma_min_abscissa, gamma_ratio, log_gamma
from .geometry import (
    DiscGrid,
    Property,
    PropertyKind,
    PropertyReport,
    subordinating_check,
    verify_params,
    verify_property,
)
from .report_io import parse_job, read_scan_csv, write_scan_csv
from .series import (
    FWParams,
    SeriesControl,
    Verdict,
    coefficient,
    convergence,
    eval_derivative,
    eval_fox_wright,
    eval_hypergeometric,
    eval_normalized,
    make_K_params,
)

__version__ = "0.1.0"
