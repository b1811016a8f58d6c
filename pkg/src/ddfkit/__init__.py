"""ddfkit: distinct-degree polynomial factorization over prime fields via
divisor-set interval products, with the deterministic integer-factoring
analogue and tooling for divisor-property set pairs."""

from .ddf_engine import (
    DistinctDegreeFactorization,
    IntervalTask,
    RngStream,
    SmoothTask,
    ddf_naive_oracle,
    ddf_smooth_randomized,
    ddf_smooth_small,
    factor_full,
    interval_polynomial,
    interval_polynomial_naive,
    preprocess_powers,
    random_subset_split,
    recursive_split,
    squarefree_decomposition,
)
from .divisor_sets import (
    ArithProgression,
    DivisorSetPair,
    GenArithProgression,
    PrimeCaseCertificate,
    combine_progressions,
    enumerate_index,
    load_pair_spec,
    pair_factorization,
    prime_case_check,
    save_pair_spec,
    search_ap,
    split_progression,
    trivial_pair,
    verify_divisor_property,
)
from .errors import ContractViolationError, ResourceBudgetError, UncoveredFactorError
from .ffield import (
    FieldPoly,
    PrimeField,
    QuotientRingPoly,
    format_poly_text,
    modcomp,
    multipoint_eval_quotient,
    parse_poly_text,
    poly_divrem,
    poly_gcd_monic,
    poly_mul,
)
from .frobenius import FrobeniusTable, compose_powers, difference_gcd, frobenius_power
from .int_factor import (
    IntegerFactorization,
    PairDivisorList,
    factor_integer,
    int_interval_product,
    int_preprocess_residues,
    int_recursive_split,
    pollard_strassen_oracle,
)

__version__ = "0.1.0"
