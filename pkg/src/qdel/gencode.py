"""Generalized weight-class deletion codes.

A level-l message (l >= 2) is encoded into n = 4(l-1) qubits by placing the
i-th amplitude uniformly over the strings of Hamming weight 2i or n-2i.
Every class is closed under bitwise complement, so deleting any single qubit
leaves an equal mixture of an even-parity and an odd-parity pure branch; a
parity measurement plus a per-outcome recovery isometry restores the
message.

The recovery isometries are constructed numerically: for each basis message,
delete qubit 1 of its codeword, project onto the measured parity and
normalize.  The resulting family is verified orthonormal before use.  Dense
simulation is limited to l <= 4 (n <= 12).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .qstate import (
    ATOL,
    DensityMatrix,
    Projector,
    PureState,
)

MAX_LEVEL = 4


def code_length(level: int) -> int:
    """Number of physical qubits for a level-l message: 4(l - 1)."""
    if level < 2:
        raise ValueError(f"level must be at least 2, got {level}")
    return 4 * (level - 1)


def _popcount(idx: np.ndarray, bits: int) -> np.ndarray:
    out = np.zeros_like(idx)
    for k in range(bits):
        out += (idx >> k) & 1
    return out


@dataclass(frozen=True)
class CodeParams:
    """Parameters of one code in the family: level, length, weight classes.

    ``classes[i]`` holds the basis indices of the n-bit strings with Hamming
    weight 2i or n-2i, sorted ascending.
    """

    level: int
    n: int
    classes: tuple[tuple[int, ...], ...]

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


def weight_classes(level: int) -> CodeParams:
    """Enumerate the weight classes for a level-l code.

    Rejects level < 2 (no such code) and level > MAX_LEVEL (dense
    simulation of the decoder would exceed desk scale).
    """
    if level < 2:
        raise ValueError(f"level must be at least 2, got {level}")
    if level > MAX_LEVEL:
        raise ValueError(
            f"level {level} exceeds the dense simulation limit {MAX_LEVEL} "
            f"(register of {code_length(level)} qubits)"
        )
    n = code_length(level)
    weights = _popcount(np.arange(1 << n), n)
    classes = []
    for i in range(level):
        members = np.nonzero((weights == 2 * i) | (weights == n - 2 * i))[0]
        classes.append(tuple(int(m) for m in members))
    return CodeParams(level=level, n=n, classes=tuple(classes))


@lru_cache(maxsize=8)
def _encoding_matrix_cached(level: int) -> np.ndarray:
    params = weight_classes(level)
    mat = np.zeros((1 << params.n, params.level), dtype=np.complex128)
    for i, members in enumerate(params.classes):
        mat[list(members), i] = 1 / np.sqrt(len(members))
    mat.setflags(write=False)
    return mat


def encoding_matrix(params: CodeParams) -> np.ndarray:
    """The 2^n x l encoding isometry (read-only)."""
    return _encoding_matrix_cached(params.level)


def encode_general(message: PureState, params: CodeParams) -> PureState:
    """Encode a level-l message into n = 4(l-1) qubits.

    Each message amplitude is spread uniformly (1/sqrt(|class|)) over its
    weight class, which makes the map an isometry.
    """
    if message.dim != params.level:
        raise ValueError(
            f"message dimension {message.dim} does not match level {params.level}"
        )
    return PureState._wrap(encoding_matrix(params) @ message.amplitudes)


def _parity_mask(m: int, outcome: int) -> np.ndarray:
    weights = _popcount(np.arange(1 << m), m)
    return (weights % 2 == outcome).astype(np.float64)


@lru_cache(maxsize=16)
def parity_projectors(m: int) -> tuple[Projector, Projector]:
    """Projectors onto the even- and odd-weight basis strings of m qubits."""
    if m < 1:
        raise ValueError(f"need at least one qubit, got {m}")
    out = []
    for b in (0, 1):
        mask = _parity_mask(m, b)
        proj = Projector.__new__(Projector)
        proj._mat = np.diag(mask.astype(np.complex128))
        proj._mat.setflags(write=False)
        mask.setflags(write=False)
        proj.diagonal_mask = mask
        out.append(proj)
    return tuple(out)


@dataclass(frozen=True)
class RecoveryIsometry:
    """Maps the parity-``outcome`` received subspace onto the message space.

    ``matrix`` has shape (l, 2^(n-1)); its adjoint is an isometry from the
    message space into the received register (rows orthonormal, checked on
    construction).
    """

    level: int
    outcome: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        gram = self.matrix @ self.matrix.conj().T
        dev = float(np.abs(gram - np.eye(self.level)).max())
        if dev > ATOL:
            raise ValueError(f"recovery family is not orthonormal (deviation {dev:.3e})")
        self.matrix.setflags(write=False)


@lru_cache(maxsize=16)
def _build_recovery_cached(level: int, outcome: int) -> RecoveryIsometry:
    params = weight_classes(level)
    enc = encoding_matrix(params)
    half = 1 << (params.n - 1)
    mask = _parity_mask(params.n - 1, outcome)
    rows = np.zeros((params.level, half), dtype=np.complex128)
    for i in range(params.level):
        branches = enc[:, i].reshape(2, half)
        surviving = []
        for a in (0, 1):
            w = branches[a] * mask
            if np.linalg.norm(w) > 1e-8:
                surviving.append(w)
        if len(surviving) != 1:
            raise ValueError(
                f"post-measurement state for basis message {i}, outcome {outcome} "
                f"is not pure ({len(surviving)} surviving branches)"
            )
        u = surviving[0]
        rows[i] = (u / np.linalg.norm(u)).conj()
    return RecoveryIsometry(level=level, outcome=outcome, matrix=rows)


def build_recovery(params: CodeParams, outcome: int) -> RecoveryIsometry:
    """Recovery isometry for one parity outcome, cached per (level, outcome).

    Row i is the conjugate of the normalized post-deletion, post-measurement
    state of basis message i (qubit 1 deleted); the family's orthonormality
    is verified before the object is returned.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    return _build_recovery_cached(params.level, outcome)


def outcome_probability(rho: DensityMatrix, outcome: int) -> float:
    """Probability of the given parity outcome on an (n-1)-qubit state."""
    m = rho.num_qubits
    if m is None:
        raise ValueError(f"dimension {rho.dim} is not a qubit register")
    return parity_projectors(m)[outcome].probability(rho)


def decode_general(
    rho: DensityMatrix,
    params: CodeParams,
    rng: np.random.Generator | None = None,
    *,
    outcome: int | None = None,
    tol: float = ATOL,
) -> PureState:
    """Decode an (n-1)-qubit state left by one deletion back to the message.

    Measures the string parity (sampled with ``rng`` or forced via
    ``outcome``) and conjugates by the matching recovery isometry.  Because
    the recovery rows live entirely inside the measured parity subspace,
    R (P rho P) R^dag / p reduces to R rho R^dag / p, which is how it is
    evaluated; the equivalence is covered by tests.  Raises NotPureError for
    undecodable inputs.
    """
    half = 1 << (params.n - 1)
    if rho.dim != half:
        raise ValueError(
            f"expected a {params.n - 1}-qubit state (dimension {half}), got {rho.dim}"
        )
    probs = [outcome_probability(rho, b) for b in (0, 1)]
    total = probs[0] + probs[1]
    if abs(total - 1.0) > ATOL:
        raise ValueError(f"parity outcome probabilities sum to {total!r}")
    if outcome is None:
        if rng is None:
            raise ValueError("need a random generator when no outcome is forced")
        p0 = min(max(probs[0], 0.0), 1.0)
        outcome = int(rng.choice(2, p=[p0, 1.0 - p0]))
    elif outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    p = probs[outcome]
    if p < 1e-14:
        raise ValueError(f"outcome {outcome} has probability {p!r}")
    rec = build_recovery(params, outcome)
    reduced = (rec.matrix @ rho.matrix @ rec.matrix.conj().T) / p
    return DensityMatrix._wrap(reduced).to_pure(tol=tol)
