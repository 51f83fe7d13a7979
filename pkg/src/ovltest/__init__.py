"""Exact nonparametric two-sample OVL-q tests.

The OVL-q statistic is the smallest value, over ``q`` cut points, of the
summed minima of the two empirical distribution increments between cuts.
OVL-1 coincides with the two-sample Smirnov test.
"""

from .errors import (
    CostCapError,
    InputError,
    NotInvertibleError,
    OvlError,
    SizeLimitError,
    TieError,
    UnequalSizesError,
)
from .fast_ovl2 import count_at_least, full_distribution, pvalue_fast
from .naive_dist import (
    ExactDistribution,
    Probability,
    ci_lower,
    enumerate_distribution,
    pvalue_montecarlo,
    pvalue_naive,
    pvalue_ovl1_band,
)
from .samples import ObservationSet, RankSequence, TiePolicy, pool_and_rank
from .statistic import rho2_range, rho_bruteforce, rho_dp, smirnov_d
from .testkit import TestConfig, TestReport, run_test

__version__ = "0.1.0"
