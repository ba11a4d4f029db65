"""Exact certificates for ex-ante versus ex-post efficiency of lotteries
over outcomes under ordinal preference profiles.

All arithmetic is exact rational; every verdict is backed by a
certificate (a utilitarian representation, or an integral improvement
direction with the strictly dominating lottery it induces) that can be
re-checked by substitution.
"""

from .domains import (
    BallotCheck,
    BallotSpec,
    DichotomousView,
    Envelope,
    LambdaCertificate,
    as_dichotomous,
    ballot_to_profile,
    dichotomous_lambda,
    extract_ballot_witness,
    generate_single_peaked,
    is_single_peaked,
    retract,
    sperner_bound,
    split_to_simple,
    verify_ballot,
)
from .efficiency import (
    DominanceVerdict,
    EfficiencyCertificate,
    EquivalenceDecision,
    WitnessSequences,
    dedup_equivalent_outcomes,
    equivalence,
    is_ex_ante_efficient,
    sd_compare,
    support_efficient,
    utilitarian_certificate,
    witness_sequences,
)
from .errors import (
    CapExceededError,
    EffixError,
    InfeasibleRepresentationError,
    InputError,
)
from .lp import (
    FeasibilityResult,
    IntegralWitness,
    LinearSystem,
    hadamard_bound,
    integralize,
    nontrivial_homogeneous,
    solve_feasibility,
)
from .mechanisms import (
    DictatorOrder,
    pareto_set,
    rsd,
    rsd_is_ex_post_efficient,
    serial_dictatorship,
)
from .model import (
    Lottery,
    PreferenceProfile,
    UtilityProfile,
    WeakOrder,
    parse_lottery,
    parse_profile,
    reverse_profile,
    serialize_lottery,
    serialize_profile,
    strict_upper_contour,
)
from .oracle import (
    GridSpec,
    enumerate_profiles,
    grid_lotteries,
    oracle_is_efficient,
)

__version__ = "0.1.0"
