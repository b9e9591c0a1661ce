"""Spread of random interleavers: exact counts, lower bounds, Monte Carlo."""

from .bounds import (
    BoundResult,
    asymptotic_bound,
    bound_basic,
    bound_tight,
    count_lower_bound,
    per_position_prob,
    s_max,
)
from .exact_count import (
    ProbValue,
    SpreadDistribution,
    exact_prob_gt2,
    factorial,
    k2,
    limit_prob_gt2,
    m0_n2,
    oracle_distribution,
)
from .sampling import (
    SampleReport,
    SearchResult,
    empirical_distribution,
    estimate_prob_at_least,
    random_permutation,
    search_spread,
)
from .spread import (
    Permutation,
    circ_dist,
    spread,
    spread_windowed,
    spread_with_witness,
    validate_permutation,
)

__version__ = "0.1.0"
