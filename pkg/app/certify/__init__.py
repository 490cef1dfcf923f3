# certify package
from .bounds import (
    UNCERTIFIED,
    Certificate,
    adaptive_sum_bound,
    certificate,
    feasibility_bound,
    iteration_cap,
    theorem_bound,
)
from .oracles import MAX_ORACLE_DIM, distance_to_witness, gap_oracle

__all__ = [
    "Certificate",
    "MAX_ORACLE_DIM",
    "UNCERTIFIED",
    "adaptive_sum_bound",
    "certificate",
    "distance_to_witness",
    "feasibility_bound",
    "gap_oracle",
    "iteration_cap",
    "theorem_bound",
]
