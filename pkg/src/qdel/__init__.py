"""qdel: simulator and verification harness for short quantum deletion codes.

A four-qubit code protecting one logical qubit against the loss of any
single qubit at an unknown position, its level-l generalization over
Hamming-weight classes, gate-level encoder/decoder circuits with a text
format, and a randomized harness that certifies the correction property
numerically.
"""

from .circuits import (
    Circuit,
    CircuitParseError,
    Gate,
    check_equivalence,
    circuit_unitary,
    encoder_circuit,
    format_circuit,
    full_decoder_unitary,
    message_extract_unitary,
    parity_fold_circuit,
    parse_circuit,
    simulate,
)
from .gencode import (
    CodeParams,
    RecoveryIsometry,
    build_recovery,
    code_length,
    decode_general,
    encode_general,
    parity_projectors,
    weight_classes,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .q4code import (
    OMEGA,
    branch_states,
    decode4,
    deletion_mixture,
    encode4,
)
from .qstate import (
    ATOL,
    ATOL_STRICT,
    DensityMatrix,
    NotPureError,
    Projector,
    PureState,
    apply_operator,
    delete_qubit,
    fidelity,
    measure_forced,
    measure_projective,
    partial_trace,
    permute_qubits,
    random_density_matrix,
    random_pure_state,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "ATOL",
    "ATOL_STRICT",
    "Circuit",
    "CircuitParseError",
    "CodeParams",
    "DensityMatrix",
    "Gate",
    "KERNEL_BACKEND",
    "NotPureError",
    "OMEGA",
    "Projector",
    "PureState",
    "RecoveryIsometry",
    "apply_operator",
    "branch_states",
    "build_recovery",
    "check_equivalence",
    "circuit_unitary",
    "code_length",
    "decode4",
    "decode_general",
    "delete_qubit",
    "deletion_mixture",
    "encode4",
    "encode_general",
    "encoder_circuit",
    "fidelity",
    "format_circuit",
    "full_decoder_unitary",
    "measure_forced",
    "measure_projective",
    "message_extract_unitary",
    "parity_fold_circuit",
    "parity_projectors",
    "parse_circuit",
    "partial_trace",
    "permute_qubits",
    "random_density_matrix",
    "random_pure_state",
    "simulate",
    "tensor",
    "weight_classes",
]
