"""Cascade simulation and graph inference from noisy infection times."""

from .errors import (
    AccessError,
    ParameterError,
    ParseError,
    ResourceError,
    ValidationError,
)
from .estimators import EstimatorBank, accumulate
from .graph import (
    WeightedDigraph,
    random_bounded_degree,
    random_tree,
    read_edge_list,
    validate,
    write_edge_list,
)
from .noise import NoiseModel, SkTable, from_pmf, geometric, parse_noise_spec, s_table, sample
from .oracle import (
    ExactLimits,
    OutcomeDistribution,
    enumerate_outcomes,
    first_infected_prob,
    limits,
    path_prob,
)
from .samplesize import (
    m_bounded_structure,
    m_bounded_weights,
    m_tree_structure,
    m_tree_weights,
)
from .simulate import (
    EXTREME_NOISE,
    LIMITED_NOISE,
    NEVER,
    NO_NOISE,
    CascadeRecord,
    CascadeSet,
    ObservationSet,
    read_cascades,
    restrict_observation,
    simulate_batch,
    simulate_one,
    write_cascades,
)
from .structure import (
    StructureResult,
    check_h3_condition,
    learn_bounded_degree,
    learn_tree,
    read_structure,
    write_structure,
)
from .weights import (
    FLAG_CLAMPED_DELTA,
    FLAG_CLAMPED_RANGE,
    FLAG_DEGENERATE_DENOM,
    FLAG_NO_PAIR_CASCADE,
    FLAG_OK,
    VPair,
    WeightEstimate,
    delta_lower_bound,
    discriminant,
    pairwise_weights,
    quadratic_residual,
    solve_pair,
    tree_edge_weight,
    tree_weights,
    v_pair_limit,
    v_ratio,
)

__version__ = "0.1.0"
