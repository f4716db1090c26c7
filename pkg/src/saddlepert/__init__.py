"""Minimax structure of extended-real payoffs on finite metric spaces, and
constructive perturbations that turn near-optimal points into saddle points."""

from .errors import InputError, MetricError, PreconditionError, SaddlePertError, VerificationError
from .minimax import (
    DEFAULT_TOL,
    BiFunction,
    check_assumptions,
    discretized_counterexample,
    enumerate_saddles,
    eps_saddle_set,
    is_saddle,
    summarize,
)
from .perturb import (
    characteristic_regularity_witness,
    dense_separable_perturbation,
    eps_saddle_perturbation,
    infsup_perturbation,
    kr_min_perturbation,
    kr_strong_min_perturbation,
    local_base_sets,
    saddle_perturbation,
    supinf_perturbation,
    wellposed_perturbation,
)
from .problem import parse_problem, problem_from_dict
from .space import (
    GridSpec,
    MetricSpace,
    ScalarField,
    build_grid,
    bump,
    discrete_space,
    nested_base_function,
    real_line_space,
    urysohn_separator,
    validate_metric,
)
from .wellposed import (
    PairSequence,
    is_maximinimizing,
    is_optimizing,
    modulus,
    product_usc_probe,
    solution_map,
    usc_adversary_probe,
    value_margin,
)

__version__ = "0.1.0"
