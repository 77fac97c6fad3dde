"""Private computation of candidate functions on replicated databases.

Exact capacity bounds and achievable rates for privately retrieving one of mu
candidate functions of f messages stored at n noncolluding replicas, plus an
executable protocol: query-plan generation, database answers, decoding, cost
ledger, and privacy-structure verification, in symbolic (entropy-charged) and
concrete (fixed-length-coded) modes.
"""

from .candidates import (
    CandidateSet,
    EntropyProfile,
    FunctionTable,
    Pmf,
    build_monomial,
    candidate_set_from_exponents,
    count_all_monomials,
    entropy_qary,
    generate_nonparallel_monomials,
    joint_entropy_prefix,
    monomial_candidate_set,
    order_by_entropy,
    pmf_of,
    reduce_exponent_vector,
    table_entropy,
)
from .coding import (
    Codeword,
    FixedCode,
    TypeVector,
    decode_fixed,
    empirical_entropy,
    encode_fixed,
    rank_in_type,
    sum_codewords,
    type_of,
    unrank_in_type,
    widen_codeword,
)
from .errors import (
    CodecError,
    DegenerateInstanceError,
    ProtocolError,
    ResourceLimitError,
    UsageError,
)
from .fields import FieldElement, PrimeField
from .protocol import (
    MessageStore,
    QueryPlan,
    SimulationConfig,
    SimulationReport,
    TauSum,
    answer_queries,
    decode,
    generate_query_plan,
    run_simulation,
    verify_privacy_structure,
)
from .rates import (
    RateReport,
    achievable_rate,
    achievable_rate_messages,
    asymptotic_rate,
    baseline_virtual_pir_rate,
    d_one,
    d_opt,
    outer_bound,
    outer_bound_messages,
    pir_capacity,
    rate_lower_bound,
    rate_report,
    round_download,
)

__all__ = [
    "CandidateSet",
    "Codeword",
    "CodecError",
    "DegenerateInstanceError",
    "EntropyProfile",
    "FieldElement",
    "FixedCode",
    "FunctionTable",
    "MessageStore",
    "Pmf",
    "PrimeField",
    "ProtocolError",
    "QueryPlan",
    "RateReport",
    "ResourceLimitError",
    "SimulationConfig",
    "SimulationReport",
    "TauSum",
    "TypeVector",
    "UsageError",
    "achievable_rate",
    "achievable_rate_messages",
    "answer_queries",
    "asymptotic_rate",
    "baseline_virtual_pir_rate",
    "build_monomial",
    "candidate_set_from_exponents",
    "count_all_monomials",
    "d_one",
    "d_opt",
    "decode",
    "decode_fixed",
    "empirical_entropy",
    "encode_fixed",
    "entropy_qary",
    "generate_nonparallel_monomials",
    "generate_query_plan",
    "joint_entropy_prefix",
    "monomial_candidate_set",
    "order_by_entropy",
    "outer_bound",
    "outer_bound_messages",
    "pir_capacity",
    "pmf_of",
    "rank_in_type",
    "rate_lower_bound",
    "rate_report",
    "reduce_exponent_vector",
    "round_download",
    "run_simulation",
    "sum_codewords",
    "table_entropy",
    "type_of",
    "unrank_in_type",
    "verify_privacy_structure",
    "widen_codeword",
]

__version__ = "0.1.0"
