"""Gate-level circuits, a line-oriented text format, and the reference
encoder/decoder circuits for the four-qubit code.

The text format is:

    qubits N
    H t | X t | U t | V t      # single-qubit gates
    CU c t | CV c t | CX c t   # controlled versions (dot on qubit c)

with 1-based indices, ``#`` comments and blank lines ignored.  A controlled
gate applies its 2x2 matrix to the target when the control is |1>.

The decoder's extraction stage is kept as an explicit 8x8 unitary rather
than a gate list: only its action on the even-parity branch is pinned, and
the completion is a deterministic Gram-Schmidt extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Union

import numpy as np

from . import q4code
from .qstate import ATOL_STRICT, PureState, complete_unitary

GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "U": np.array(
        [[1 / np.sqrt(3), -np.sqrt(2) / np.sqrt(3)],
         [np.sqrt(2) / np.sqrt(3), 1 / np.sqrt(3)]],
        dtype=np.complex128,
    ),
    "V": np.array(
        [[1 / np.sqrt(2), 1 / np.sqrt(2)],
         [-1 / np.sqrt(2), 1 / np.sqrt(2)]],
        dtype=np.complex128,
    ),
}

_CONTROLLED_NAMES = {"CU": "U", "CV": "V", "CX": "X"}


class CircuitParseError(ValueError):
    """Parse failure with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Gate:
    """One gate: a named (or custom) 2x2 unitary with an optional control.

    ``kind`` is one of H, X, U, V or "custom"; custom gates carry their own
    matrix and cannot be printed to the text format.
    """

    kind: str
    target: int
    control: int | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "custom":
            if self.matrix is None:
                raise ValueError("custom gates need a matrix")
            mat = np.asarray(self.matrix, dtype=np.complex128)
            if mat.shape != (2, 2):
                raise ValueError(f"gate matrix must be 2x2, got {mat.shape}")
            if float(np.abs(mat.conj().T @ mat - np.eye(2)).max()) > ATOL_STRICT:
                raise ValueError("gate matrix is not unitary")
            object.__setattr__(self, "matrix", mat)
        elif self.kind not in GATE_MATRICES:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.control is not None and self.control == self.target:
            raise ValueError(f"control and target coincide on qubit {self.target}")

    def matrix2(self) -> np.ndarray:
        return self.matrix if self.kind == "custom" else GATE_MATRICES[self.kind]


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over an n-qubit register."""

    num_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.num_qubits}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for pos in (g.target, g.control):
                if pos is not None and not 1 <= pos <= self.num_qubits:
                    raise ValueError(
                        f"qubit index {pos} out of range for {self.num_qubits} qubits"
                    )


def parse_circuit(text: str) -> Circuit:
    """Parse the text format into a Circuit; raises CircuitParseError."""

    def fail(msg: str, lineno: int, line: str, token: str | None = None):
        col = line.index(token) + 1 if token and token in line else 1
        raise CircuitParseError(msg, lineno, col)

    num_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        if num_qubits is None:
            if tokens[0] != "qubits" or len(tokens) != 2:
                fail("expected header 'qubits N'", lineno, line, tokens[0])
            try:
                num_qubits = int(tokens[1])
            except ValueError:
                fail(f"invalid qubit count {tokens[1]!r}", lineno, line, tokens[1])
            if num_qubits < 1:
                fail(f"invalid qubit count {num_qubits}", lineno, line, tokens[1])
            continue
        name = tokens[0]
        if name in GATE_MATRICES:
            kind, want = name, 1
        elif name in _CONTROLLED_NAMES:
            kind, want = _CONTROLLED_NAMES[name], 2
        else:
            fail(f"unknown gate name {name!r}", lineno, line, name)
        args = tokens[1:]
        if len(args) != want:
            fail(
                f"gate {name} expects {want} qubit argument(s), got {len(args)}",
                lineno, line, name,
            )
        indices = []
        for tok in args:
            try:
                indices.append(int(tok))
            except ValueError:
                fail(f"invalid qubit index {tok!r}", lineno, line, tok)
        for tok, pos in zip(args, indices):
            if not 1 <= pos <= num_qubits:
                fail(f"qubit index {pos} out of range", lineno, line, tok)
        if want == 1:
            gates.append(Gate(kind, indices[0]))
        else:
            control, target = indices
            if control == target:
                fail(f"control and target coincide on qubit {control}", lineno, line, args[0])
            gates.append(Gate(kind, target, control))
    if num_qubits is None:
        raise CircuitParseError("empty input: missing 'qubits N' header", 1)
    return Circuit(num_qubits, tuple(gates))


def format_circuit(circuit: Circuit) -> str:
    """Emit the exact text format; inverse of parse_circuit."""
    lines = [f"qubits {circuit.num_qubits}"]
    for g in circuit.gates:
        if g.kind == "custom":
            raise ValueError("custom gates are not representable in the text format")
        if g.control is None:
            lines.append(f"{g.kind} {g.target}")
        else:
            name = {v: k for k, v in _CONTROLLED_NAMES.items()}.get(g.kind)
            if name is None:
                raise ValueError(f"controlled {g.kind} is not representable")
            lines.append(f"{name} {g.control} {g.target}")
    return "\n".join(lines) + "\n"


def _apply_gate(amp: np.ndarray, n: int, gate: Gate) -> np.ndarray:
    u = gate.matrix2()
    stride = 1 << (n - gate.target)
    idx = np.arange(amp.shape[0])
    sel = ((idx >> (n - gate.target)) & 1) == 0
    if gate.control is not None:
        sel &= ((idx >> (n - gate.control)) & 1) == 1
    i0 = idx[sel]
    i1 = i0 + stride
    out = amp.copy()
    a0, a1 = amp[i0], amp[i1]
    out[i0] = u[0, 0] * a0 + u[0, 1] * a1
    out[i1] = u[1, 0] * a0 + u[1, 1] * a1
    return out


def simulate(circuit: Circuit, state: PureState) -> PureState:
    """Run the gates left to right on a register state."""
    if state.dim != 1 << circuit.num_qubits:
        raise ValueError(
            f"state dimension {state.dim} does not match {circuit.num_qubits} qubits"
        )
    amp = state.amplitudes.copy()
    for gate in circuit.gates:
        amp = _apply_gate(amp, circuit.num_qubits, gate)
    return PureState._wrap(amp)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """The full 2^n x 2^n matrix of a circuit."""
    dim = 1 << circuit.num_qubits
    cols = []
    for k in range(dim):
        cols.append(simulate(circuit, PureState.basis(dim, k)).amplitudes)
    return np.stack(cols, axis=1)


def encoder_entangle_stage() -> Circuit:
    """First two depths of the encoder: controlled-U, controlled-V, Hadamard."""
    return Circuit(4, (Gate("U", 2, control=1), Gate("V", 1, control=2), Gate("H", 3)))


def encoder_cnot_stage() -> Circuit:
    """The four CNOTs mapping |x1 x2 x3 0> to
    |(x1+x3)(x2+x3)(x3)(x1+x2+x3)>, ending with control 3 / target 1."""
    return Circuit(
        4,
        (
            Gate("X", 2, control=3),
            Gate("X", 4, control=2),
            Gate("X", 4, control=1),
            Gate("X", 1, control=3),
        ),
    )


def encoder_circuit() -> Circuit:
    """Four-qubit encoder: message on qubit 1, ancillas |000> on qubits 2-4."""
    stage1 = encoder_entangle_stage()
    stage2 = encoder_cnot_stage()
    return Circuit(4, stage1.gates + stage2.gates)


@lru_cache(maxsize=1)
def encoder_reference_matrix() -> np.ndarray:
    """16x16 matrix sending phi (x) |000> to the codeword of phi.

    Inputs outside that two-dimensional slice are annihilated; use it only
    on properly prepared circuit inputs.
    """
    enc = np.zeros((16, 2), dtype=np.complex128)
    for k in (0, 1):
        enc[:, k] = q4code.encode4(PureState.basis(2, k)).amplitudes
    sel = np.zeros((16, 2), dtype=np.complex128)
    sel[0b0000, 0] = 1.0
    sel[0b1000, 1] = 1.0
    return enc @ sel.conj().T


@lru_cache(maxsize=1)
def message_extract_unitary() -> np.ndarray:
    """8x8 unitary pinned to |000> -> |000> and the uniform weight-2
    superposition -> |100>, completed by lexicographic Gram-Schmidt.

    Applied to the even-parity branch of a deleted codeword it produces
    (message qubit) (x) |00>.
    """
    uniform = np.zeros(8, dtype=np.complex128)
    for i in (0b011, 0b101, 0b110):
        uniform[i] = 1 / np.sqrt(3)
    e = lambda k: np.eye(8, dtype=np.complex128)[k]
    return complete_unitary([(e(0b000), e(0b000)), (uniform, e(0b100))], 8)


def parity_fold_circuit() -> Circuit:
    """Six CNOTs computing the parity of qubits 1-3 into ancilla qubit 4 and
    complementing qubits 1-3 when it is odd."""
    return Circuit(
        4,
        (
            Gate("X", 4, control=1),
            Gate("X", 4, control=2),
            Gate("X", 4, control=3),
            Gate("X", 1, control=4),
            Gate("X", 2, control=4),
            Gate("X", 3, control=4),
        ),
    )


@lru_cache(maxsize=1)
def full_decoder_unitary() -> np.ndarray:
    """Measurement-free decoder on 3 received qubits plus one |0> ancilla.

    Parity fold first, then the extraction unitary on qubits 1-3.  On a
    deleted codeword the output factorizes as
    |phi><phi| (x) |00><00| (x) diag(1/2, 1/2).
    """
    fold = circuit_unitary(parity_fold_circuit())
    return np.kron(message_extract_unitary(), np.eye(2, dtype=np.complex128)) @ fold


Reference = Union[np.ndarray, Callable[[PureState], PureState]]


def check_equivalence(
    circuit: Union[Circuit, np.ndarray],
    reference: Reference,
    inputs: Iterable[PureState],
) -> float:
    """Max distance between circuit and reference outputs over the inputs.

    Each comparison fits one global phase, so circuits that differ from the
    reference map by a phase per input count as equivalent.
    """
    if isinstance(circuit, Circuit):
        run = lambda psi: simulate(circuit, psi).amplitudes
        dim = 1 << circuit.num_qubits
    else:
        mat = np.asarray(circuit, dtype=np.complex128)
        run = lambda psi: mat @ psi.amplitudes
        dim = mat.shape[1]
    worst = 0.0
    for psi in inputs:
        if psi.dim != dim:
            raise ValueError(f"input dimension {psi.dim} does not match {dim}")
        out = run(psi)
        ref = reference(psi) if callable(reference) else np.asarray(reference) @ psi.amplitudes
        if isinstance(ref, PureState):
            ref = ref.amplitudes
        overlap = complex(np.vdot(ref, out))
        phase = overlap / abs(overlap) if abs(overlap) > 1e-30 else 1.0
        worst = max(worst, float(np.linalg.norm(out - phase * ref)))
    return worst
