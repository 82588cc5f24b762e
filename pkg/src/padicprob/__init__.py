"""Exact p-adic and group-valued probability.

Frequency probabilities along p-adically convergent sample sizes,
clopen-set measures with non-Archimedean integration, exact limit-law
verification traces, a sphere-membership randomness test, and
probabilities valued in metrized abelian groups. All arithmetic is
exact: integers, fractions, and p-adic digit windows with explicit
precision bookkeeping.
"""

from .cylinder import (
    Clopen,
    ContinuousMap,
    Cylinder,
    CylinderMeasure,
    IntegrationResult,
    StepFunction,
    UniformMeasure,
    digit_weight_map,
    format_clopen,
    integrate_continuous,
    integrate_step,
    parse_clopen,
    zero_measure,
)
from .errors import (
    AlphabetMismatch,
    ConditioningOnNull,
    DigitRange,
    DomainError,
    HypothesisViolation,
    InsufficientData,
    InvalidLabel,
    InvalidTarget,
    NoRingStructure,
    NotInvertible,
    OrderError,
    OscillationMissing,
    PadicProbError,
    PrecisionExhausted,
    RangeError,
    RegionNotSignificant,
)
from .frequency import (
    CAUCHY_NOTE,
    Collective,
    FrequencyTrace,
    LimitOutcome,
    SequenceSelector,
    checkpoint_forcing_bits,
    conditional_s_probability,
    parse_selector,
    range_ball,
    relative_frequency,
    s_probability,
)
from .gvalued import (
    CriticalRegion,
    CriticalRegionTest,
    GDistribution,
    GroupContext,
    ProductContext,
    RationalPadicContext,
    RationalRealContext,
    SignificanceNeighborhood,
    additivity_check,
    conditional,
    convolve,
    dirac,
    powerset_field,
    significance_classify,
    unit_axiom_check,
)
from .limits import (
    BernoulliParams,
    ConvergenceTrace,
    MahlerSeq,
    RandomnessResult,
    SumDistribution,
    ball_probability,
    binom,
    binom_vp,
    binomial_ball_trace,
    binomial_limit_weights,
    charfun_series,
    charfun_to_mahler,
    checkpoint_pattern_distribution,
    clt_mahler_bound_check,
    clt_series,
    divisibility_balance_traces,
    empirical_mahler,
    hit_union_probability,
    mahler_lambda,
    mahler_lln_traces,
    padic_binomial_coeff,
    prime_edge_trace,
    sphere_probability,
    sphere_randomness_test,
    symmetric_params,
)
from .padic import (
    Ball,
    PadicAbs,
    PadicApprox,
    Prime,
    Sphere,
    abs_p,
    as_fraction,
    dist_p,
    in_ball,
    in_sphere,
    series_eval,
    to_approx,
    vp,
)
from .series import FormalSeries, cosh_series, exp_series, log1p_series, sinh_series

__version__ = "0.1.0"
