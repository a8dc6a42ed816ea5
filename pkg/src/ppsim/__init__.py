"""Pre/post-selected quantum systems: ABL probabilities, weak values, pointer
statistics and noncontextual value-assignment searches."""

from .hilbert import (
    SpectralObservable,
    StateVector,
    inner,
    kron,
    normalize,
    pauli_string,
    projector_observable,
    state,
)
from .pps import (
    OutcomeDistribution,
    PPSEnsemble,
    abl,
    expectation_decomposition,
    is_definite,
    product_rule_audit,
    sequential_distribution,
    weak_value,
)

__version__ = "0.1.0"
