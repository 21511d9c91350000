"""Entanglement measures and negativity monogamy bounds for small qubit registers."""

from .errors import DomainError, NumericalInconsistency, PreconditionError, StateFileError
from .linalg import SchmidtData, partial_trace, partial_transpose, schmidt, tensor_product, trace_norm
from .measures import (
    PairMeasures,
    coa_2q,
    concurrence_2q,
    concurrence_pure,
    cren_oracle,
    linear_entropy,
    negativity,
    pair_measures,
    spin_flip,
    wootters_spectrum,
)
from .monogamy import BoundReport, PartitionContext, evaluate_all
from .states import (
    Bipartition,
    PureState,
    WClassParams,
    fixture_example3,
    fixture_example4,
    haar_random_pure,
    load_state,
    save_state,
    w_class_state,
)

__version__ = "0.1.0"
