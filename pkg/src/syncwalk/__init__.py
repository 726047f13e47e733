"""Finite Markov chains realized as random walks driven by IID random mappings."""

from .chain import (
    TransitionMatrix,
    edge_set,
    entropy_rate,
    from_rows,
    is_aperiodic,
    is_ergodic,
    is_irreducible,
    is_p_uniform,
    period,
    primitivity_index,
    stationary_law,
    validate_chain,
)
from .mapping import (
    MappingLaw,
    compose_word,
    decompose,
    image_size,
    induced_chain,
    is_constant,
    lift_chain,
    make_law,
    verify_mapping_law,
)
from .sync import (
    SyncConstruction,
    SyncWord,
    construct_sync_law,
    find_sync_word,
    is_sync,
    shortest_sync_word,
)
from .redundancy import (
    law_entropy,
    product_law,
    redundancy_bounds,
    target_redundancy_law,
)
from .cftp import RngSpec, cftp_sample, forward_simulate, sample_many

__version__ = "0.1.0"

__all__ = [
    "MappingLaw",
    "RngSpec",
    "SyncConstruction",
    "SyncWord",
    "TransitionMatrix",
    "cftp_sample",
    "compose_word",
    "construct_sync_law",
    "decompose",
    "edge_set",
    "entropy_rate",
    "find_sync_word",
    "forward_simulate",
    "from_rows",
    "image_size",
    "induced_chain",
    "is_aperiodic",
    "is_constant",
    "is_ergodic",
    "is_irreducible",
    "is_p_uniform",
    "is_sync",
    "law_entropy",
    "lift_chain",
    "make_law",
    "period",
    "primitivity_index",
    "product_law",
    "redundancy_bounds",
    "sample_many",
    "shortest_sync_word",
    "stationary_law",
    "target_redundancy_law",
    "validate_chain",
    "verify_mapping_law",
]
