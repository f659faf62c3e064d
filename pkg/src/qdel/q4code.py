"""The four-qubit single-deletion code.

A logical qubit alpha|0> + beta|1> is spread over the Hamming-weight classes
of four qubits: weight {0,4} carries alpha, weight {2} carries beta.  The
resulting codeword is invariant under every qubit permutation, which is what
makes the deletion position irrelevant.  Decoding measures the parity of the
three remaining qubits, folds the odd branch onto the even one, rotates the
symmetric subspace onto the first qubit, and discards the rest.

``deletion_mixture`` is the closed-form description of a deleted codeword
(an equal mixture of one even-parity and one odd-parity pure branch); it
serves as the independent oracle for the deletion channel in the tests.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .qstate import (
    ATOL,
    DensityMatrix,
    Projector,
    PureState,
    apply_operator,
    complete_unitary,
    measure_forced,
    measure_projective,
    partial_trace,
)

# Codeword support, as 4-bit basis indices: weight {0,4} and weight {2}.
WEIGHT_04_STRINGS = ("0000", "1111")
WEIGHT_2_STRINGS = ("0011", "0101", "0110", "1001", "1010", "1100")
_W04 = tuple(int(s, 2) for s in WEIGHT_04_STRINGS)
_W2 = tuple(int(s, 2) for s in WEIGHT_2_STRINGS)

# 3-qubit parity subspaces seen by the decoder after one deletion.
EVEN_PARITY_STRINGS = ("000", "011", "101", "110")
ODD_PARITY_STRINGS = ("111", "100", "010", "001")
_EVEN = tuple(int(s, 2) for s in EVEN_PARITY_STRINGS)
_ODD = tuple(int(s, 2) for s in ODD_PARITY_STRINGS)

# Principal primitive cube root of unity; generates the twisted weight-2 basis.
OMEGA = np.exp(2j * np.pi / 3)

# The two isometric choices for the image of the last twisted basis vector in
# the extraction stage: "literal" sends it to |011>, "corrected" to |001>.
VARIANTS = ("literal", "corrected")


def _encoding_matrix() -> np.ndarray:
    mat = np.zeros((16, 2), dtype=np.complex128)
    for i in _W04:
        mat[i, 0] = 1 / np.sqrt(2)
    for i in _W2:
        mat[i, 1] = 1 / np.sqrt(6)
    return mat


_ENC = _encoding_matrix()


def encode4(phi: PureState) -> PureState:
    """Encode a single-qubit state into the 4-qubit codeword.

    |0> maps to (|0000> + |1111>)/sqrt(2) and |1> to the uniform
    superposition of the six weight-2 strings; the map is complex linear.
    """
    if phi.dim != 2:
        raise ValueError(f"message must have dimension 2, got {phi.dim}")
    return PureState._wrap(_ENC @ phi.amplitudes)


def branch_states(phi: PureState) -> tuple[PureState, PureState]:
    """The even- and odd-parity pure branches of a deleted codeword.

    Even: alpha|000> + (beta/sqrt(3))(|011>+|101>+|110>).
    Odd:  alpha|111> + (beta/sqrt(3))(|001>+|010>+|100>).
    """
    if phi.dim != 2:
        raise ValueError(f"message must have dimension 2, got {phi.dim}")
    alpha, beta = phi.amplitudes
    even = np.zeros(8, dtype=np.complex128)
    odd = np.zeros(8, dtype=np.complex128)
    even[0b000] = alpha
    odd[0b111] = alpha
    for i in (0b011, 0b101, 0b110):
        even[i] = beta / np.sqrt(3)
    for i in (0b001, 0b010, 0b100):
        odd[i] = beta / np.sqrt(3)
    return PureState._wrap(even), PureState._wrap(odd)


def deletion_mixture(phi: PureState) -> DensityMatrix:
    """Closed form for the deletion channel on a codeword.

    Deleting any of the four qubits of encode4(phi) yields the equal mixture
    of the two parity branches.  This is the independent oracle the channel
    implementation is checked against.
    """
    even, odd = branch_states(phi)
    mat = 0.5 * np.outer(even.amplitudes, even.amplitudes.conj())
    mat += 0.5 * np.outer(odd.amplitudes, odd.amplitudes.conj())
    return DensityMatrix._wrap(mat)


@lru_cache(maxsize=1)
def step1_projectors() -> tuple[Projector, Projector]:
    """Projectors onto the even- and odd-parity 3-qubit subspaces."""
    return (
        Projector.onto_indices(8, _EVEN),
        Projector.onto_indices(8, _ODD),
    )


@lru_cache(maxsize=1)
def twisted_weight2_basis() -> tuple[PureState, PureState, PureState]:
    """Discrete-Fourier combinations of the three weight-2 kets.

    Together with |000> they form an orthonormal basis of the even-parity
    subspace.
    """
    out = []
    for k in range(3):
        v = np.zeros(8, dtype=np.complex128)
        v[0b011] = 1 / np.sqrt(3)
        v[0b101] = OMEGA**k / np.sqrt(3)
        v[0b110] = OMEGA ** (2 * k) / np.sqrt(3)
        out.append(PureState._wrap(v))
    return tuple(out)


def _basis_vec(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


@lru_cache(maxsize=1)
def parity_flip_matrix() -> np.ndarray:
    """8x8 unitary sending each odd-parity ket to its bitwise complement.

    Pinned on the odd-parity basis (111->000, 100->011, 010->101, 001->110)
    and completed to a full unitary by Gram-Schmidt in lexicographic order.
    """
    pairs = [
        (_basis_vec(8, 0b111), _basis_vec(8, 0b000)),
        (_basis_vec(8, 0b100), _basis_vec(8, 0b011)),
        (_basis_vec(8, 0b010), _basis_vec(8, 0b101)),
        (_basis_vec(8, 0b001), _basis_vec(8, 0b110)),
    ]
    return complete_unitary(pairs, 8)


@lru_cache(maxsize=2)
def extract_matrix(variant: str = "literal") -> np.ndarray:
    """8x8 unitary rotating the even-parity subspace onto low-order kets.

    |000> stays put and the three twisted weight-2 vectors go to |100>,
    |010> and (per variant) |011> or |001>.  On decodable states only the
    first two images matter, so both variants decode identically.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    tw = twisted_weight2_basis()
    last_image = 0b011 if variant == "literal" else 0b001
    pairs = [
        (_basis_vec(8, 0b000), _basis_vec(8, 0b000)),
        (tw[0].amplitudes.copy(), _basis_vec(8, 0b100)),
        (tw[1].amplitudes.copy(), _basis_vec(8, 0b010)),
        (tw[2].amplitudes.copy(), _basis_vec(8, last_image)),
    ]
    return complete_unitary(pairs, 8)


def _check_support(rho: DensityMatrix, proj: Projector, label: str, atol: float) -> None:
    mat = rho.matrix
    p = proj.matrix
    residual = float(np.abs(mat - p @ mat @ p).max())
    if residual > atol:
        raise ValueError(f"state support leaks outside {label} (residual {residual:.3e})")


def apply_parity_flip(rho: DensityMatrix, *, atol: float = ATOL) -> DensityMatrix:
    """Fold an odd-parity state onto the even-parity subspace."""
    _check_support(rho, step1_projectors()[1], "the odd-parity subspace", atol)
    return apply_operator(rho, parity_flip_matrix())


def apply_extract(
    rho: DensityMatrix, *, variant: str = "literal", atol: float = ATOL
) -> DensityMatrix:
    """Rotate an even-parity state so the message sits on qubit 1."""
    _check_support(rho, step1_projectors()[0], "the even-parity subspace", atol)
    return apply_operator(rho, extract_matrix(variant))


def decode4(
    rho: DensityMatrix,
    rng: np.random.Generator | None = None,
    *,
    outcome: int | None = None,
    variant: str = "literal",
    tol: float = ATOL,
) -> PureState:
    """Decode a 3-qubit state left by one deletion back to the message qubit.

    Pipeline: parity measurement (sampled with ``rng`` or forced via
    ``outcome``), parity flip on the odd branch, extraction rotation, then
    discarding qubits 3 and 2.  Raises NotPureError when the input is not a
    deleted codeword (the surviving qubit fails the purity threshold).
    """
    if rho.dim != 8:
        raise ValueError(f"expected a 3-qubit state, got dimension {rho.dim}")
    projs = step1_projectors()
    if outcome is None:
        if rng is None:
            raise ValueError("need a random generator when no outcome is forced")
        outcome, post, _ = measure_projective(rho, projs, rng)
    else:
        post, _ = measure_forced(rho, projs, outcome)
    if outcome == 1:
        post = apply_parity_flip(post, atol=tol)
    post = apply_extract(post, variant=variant, atol=tol)
    reduced = partial_trace(partial_trace(post, 3), 2)
    return reduced.to_pure(tol=tol)
