"""Exact finite calculus of submeasures: pathology degree, covering numbers,
ideal constructions, colorings, reductions and Banach-sequence representations."""

from .banach import (
    VectorSequence,
    abs_normalize,
    boundedness_report,
    nullity_diagnostics,
    phi_of_sequence,
    scale_by_sup,
    sequence_of_phi,
)
from .core import (
    Arity,
    DirectSum,
    FiniteSubmeasure,
    MazurChain,
    Measure,
    MinCover,
    Restriction,
    SupMeasures,
    TableSubmeasure,
    all_values,
    check_axioms,
    direct_sum,
    evaluate,
    group_metric,
    integer_valued_probe,
    materialize,
    mazur_from_chain,
    restrict,
    sup_of_measures,
)
from .errors import InputError, SizeGuard, SubmeasureLabError
from .pathology import (
    CoveringInstance,
    covering_stats,
    hat,
    hat_mask,
    kelley_witness,
    pathological_criterion,
    pathology_degree,
    pathology_witness_set,
    uniform_bound_check,
)
from .rational import INF, format_rational, parse_rational
from .reductions import (
    PointMap,
    pathology_monotonicity_check,
    pushforward,
    solecki_reduction_map,
    verify_solecki_reduction,
)
from .subsets import GroundSet

__version__ = "0.1.0"
