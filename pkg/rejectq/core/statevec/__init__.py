"""Exact dense state-vector engine for up to five labeled qubits."""

from rejectq.core.statevec import gates
from rejectq.core.statevec.measurement import (
    BELL_NAMES,
    COMPUTATIONAL,
    DIAGONAL,
    MeasurementResult,
    SingleQubitBasis,
    bell_measure,
    bell_probabilities,
    fidelity,
    measure,
    outcome_probabilities,
)
from rejectq.core.statevec.state import (
    DEFAULT_ATOL,
    IDENTITY_ATOL,
    MAX_QUBITS,
    LabelLike,
    PureState,
    QubitLabel,
    apply_cnot,
    apply_single,
    bell_state,
    ghz_state,
    permute,
    qubit,
    qubit_from_bloch,
    random_qubit,
    relabel,
    tensor,
)

__all__ = [
    "BELL_NAMES",
    "COMPUTATIONAL",
    "DEFAULT_ATOL",
    "DIAGONAL",
    "IDENTITY_ATOL",
    "MAX_QUBITS",
    "LabelLike",
    "MeasurementResult",
    "PureState",
    "QubitLabel",
    "SingleQubitBasis",
    "apply_cnot",
    "apply_single",
    "bell_measure",
    "bell_probabilities",
    "bell_state",
    "fidelity",
    "gates",
    "ghz_state",
    "measure",
    "outcome_probabilities",
    "permute",
    "qubit",
    "qubit_from_bloch",
    "random_qubit",
    "relabel",
    "tensor",
]
