"""Dense complex linear algebra for qubit registers.

Pure states, density matrices, tensor products, the qubit deletion channel
(partial trace), fidelity, and projective measurement.  Everything is dense
complex128; the practical register limit is about 14 qubits.

Conventions:
  * Qubit positions are 1-based at every public interface.
  * Basis label x1 x2 ... xn maps to the integer index with x1 as the most
    significant bit, so kets read left to right.
  * All values are immutable after construction; operations are pure
    functions.  The only stateful object is the random generator passed in
    by the caller.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from . import kernels

# Default tolerances: ATOL for runtime assertions, ATOL_STRICT for algebraic
# identities that hold exactly in real arithmetic.
ATOL = 1e-10
ATOL_STRICT = 1e-12

# Probability below which a forced measurement branch is considered degenerate.
PROB_FLOOR = 1e-14


class NotPureError(ValueError):
    """A density matrix could not be converted to a pure state."""


def _as_vector(values, *, copy: bool = False) -> np.ndarray:
    # public constructors copy so freezing never touches a caller's array;
    # internal wrapping aliases freshly allocated results
    if copy:
        arr = np.array(values, dtype=np.complex128).reshape(-1)
    else:
        arr = np.ascontiguousarray(np.asarray(values, dtype=np.complex128).reshape(-1))
    arr.setflags(write=False)
    return arr


def _as_matrix(values, *, copy: bool = False) -> np.ndarray:
    if copy:
        arr = np.array(values, dtype=np.complex128)
    else:
        arr = np.ascontiguousarray(np.asarray(values, dtype=np.complex128))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _exact_log2(dim: int) -> int | None:
    n = int(dim).bit_length() - 1
    return n if (1 << n) == dim else None


class PureState:
    """Unit complex amplitude vector over a computational basis.

    Covers both qubit-register states (dimension 2^n) and level-l message
    states (dimension l).
    """

    __slots__ = ("_amp",)

    def __init__(self, amplitudes, *, atol: float = ATOL_STRICT):
        amp = _as_vector(amplitudes, copy=True)
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > atol:
            raise ValueError(f"state is not normalized: |amp|^2 = {norm_sq!r}")
        self._amp = amp

    @classmethod
    def _wrap(cls, amp: np.ndarray) -> "PureState":
        out = cls.__new__(cls)
        out._amp = _as_vector(amp)
        return out

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        """The computational basis state |index> in a dim-dimensional space."""
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for dimension {dim}")
        amp = np.zeros(dim, dtype=np.complex128)
        amp[index] = 1.0
        return cls._wrap(amp)

    @classmethod
    def from_bits(cls, bits: str) -> "PureState":
        """Basis ket labelled by a bit string, e.g. ``"0110"``."""
        if not bits or any(c not in "01" for c in bits):
            raise ValueError(f"invalid bit string {bits!r}")
        return cls.basis(2 ** len(bits), int(bits, 2))

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amp

    @property
    def dim(self) -> int:
        return self._amp.shape[0]

    @property
    def num_qubits(self) -> int | None:
        """Register size if the dimension is a power of two, else None."""
        return _exact_log2(self.dim)

    def inner(self, other: "PureState") -> complex:
        """<self|other>."""
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self._amp, other._amp))

    def density(self) -> "DensityMatrix":
        """The rank-one density matrix |psi><psi|."""
        return DensityMatrix._wrap(np.outer(self._amp, self._amp.conj()))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


class DensityMatrix:
    """Positive semidefinite, unit-trace complex matrix.

    The constructor checks Hermiticity and trace (O(d^2)); the eigenvalue
    floor is checked by :meth:`validate` (O(d^3)), which property tests call
    explicitly.  Internal operations that preserve validity bypass the
    checks via ``_wrap``.
    """

    __slots__ = ("_mat",)

    def __init__(self, entries, *, atol: float = ATOL_STRICT):
        mat = _as_matrix(entries, copy=True)
        herm_dev = float(np.abs(mat - mat.conj().T).max())
        if herm_dev > atol:
            raise ValueError(f"matrix is not Hermitian (deviation {herm_dev:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > atol:
            raise ValueError(f"matrix trace is {tr!r}, expected 1")
        self._mat = mat

    @classmethod
    def _wrap(cls, mat: np.ndarray) -> "DensityMatrix":
        out = cls.__new__(cls)
        out._mat = _as_matrix(mat)
        return out

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    @property
    def num_qubits(self) -> int | None:
        return _exact_log2(self.dim)

    def trace(self) -> float:
        return float(np.trace(self._mat).real)

    def purity(self) -> float:
        """Tr(rho^2); equals 1 exactly for pure states."""
        return float(np.vdot(self._mat, self._mat).real)

    def validate(self, *, atol: float = ATOL) -> "DensityMatrix":
        """Full invariant check including the eigenvalue floor; returns self."""
        dev = float(np.abs(self._mat - self._mat.conj().T).max())
        if dev > ATOL_STRICT:
            raise ValueError(f"not Hermitian (deviation {dev:.3e})")
        if abs(self.trace() - 1.0) > ATOL_STRICT:
            raise ValueError(f"trace is {self.trace()!r}, expected 1")
        lo = float(np.linalg.eigvalsh(self._mat).min())
        if lo < -atol:
            raise ValueError(f"negative eigenvalue {lo:.3e}")
        return self

    def to_pure(self, *, tol: float = ATOL) -> PureState:
        """Extract the pure state when purity exceeds 1 - tol.

        Raises NotPureError otherwise.  The returned vector's globally
        largest amplitude is made real and positive so the representative is
        deterministic.
        """
        p = self.purity()
        if p < 1.0 - tol:
            raise NotPureError(f"state is not pure (purity {p!r})")
        vals, vecs = np.linalg.eigh(self._mat)
        vec = vecs[:, -1]
        k = int(np.abs(vec).argmax())
        phase = vec[k] / abs(vec[k])
        return PureState._wrap(vec / phase)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


class Projector:
    """Orthogonal projector P = P^2 = P^dagger.

    ``diagonal_mask`` is set for projectors that are diagonal in the
    computational basis (the parity projectors used by the decoders); it
    enables O(d) probability evaluation.
    """

    __slots__ = ("_mat", "diagonal_mask")

    def __init__(self, matrix, *, atol: float = ATOL_STRICT):
        mat = _as_matrix(matrix, copy=True)
        if float(np.abs(mat - mat.conj().T).max()) > atol:
            raise ValueError("projector is not Hermitian")
        if float(np.abs(mat @ mat - mat).max()) > atol:
            raise ValueError("matrix is not idempotent")
        self._mat = mat
        diag = np.diagonal(mat)
        off = mat - np.diag(diag)
        if float(np.abs(off).max()) <= atol and np.all(
            (np.abs(diag) <= atol) | (np.abs(diag - 1) <= atol)
        ):
            mask = (np.abs(diag - 1) <= atol).astype(np.float64)
            mask.setflags(write=False)
            self.diagonal_mask = mask
        else:
            self.diagonal_mask = None

    @classmethod
    def onto_indices(cls, dim: int, indices: Iterable[int]) -> "Projector":
        """Projector onto the span of the given computational basis states."""
        idx = sorted(set(int(i) for i in indices))
        if idx and (idx[0] < 0 or idx[-1] >= dim):
            raise ValueError(f"basis index out of range for dimension {dim}")
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for i in idx:
            mat[i, i] = 1.0
        return cls(mat)

    @classmethod
    def onto_states(cls, states: Sequence[PureState]) -> "Projector":
        """Projector onto the span of an orthonormal family of pure states."""
        mat = sum(np.outer(s.amplitudes, s.amplitudes.conj()) for s in states)
        return cls(mat)

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    def rank(self) -> int:
        return int(round(float(np.trace(self._mat).real)))

    def probability(self, rho: DensityMatrix) -> float:
        """Tr(P rho)."""
        if rho.dim != self.dim:
            raise ValueError(f"dimension mismatch: {rho.dim} vs {self.dim}")
        if self.diagonal_mask is not None:
            p = float(np.dot(self.diagonal_mask, np.diagonal(rho.matrix).real))
        else:
            p = float(np.trace(self._mat @ rho.matrix).real)
        return p


class MeasurementResult(NamedTuple):
    outcome: int
    post_state: DensityMatrix
    probability: float


def _check_completeness(projectors: Sequence[Projector], dim: int, atol: float) -> None:
    total = sum(p.matrix for p in projectors)
    if float(np.abs(total - np.eye(dim)).max()) > atol:
        raise ValueError("projectors do not resolve the identity")


def _project(rho: DensityMatrix, proj: Projector) -> np.ndarray:
    if proj.diagonal_mask is not None:
        m = proj.diagonal_mask
        return rho.matrix * np.outer(m, m)
    return proj.matrix @ rho.matrix @ proj.matrix


def measure_forced(
    rho: DensityMatrix,
    projectors: Sequence[Projector],
    outcome: int,
    *,
    atol: float = ATOL,
) -> tuple[DensityMatrix, float]:
    """Deterministic projective measurement with a chosen outcome.

    Returns the normalized post-measurement state and the probability the
    outcome would have occurred.  Raises if the branch probability falls
    below PROB_FLOOR (degenerate branch).
    """
    if not 0 <= outcome < len(projectors):
        raise ValueError(f"outcome {outcome} out of range")
    _check_completeness(projectors, rho.dim, atol)
    p = projectors[outcome].probability(rho)
    if p < PROB_FLOOR:
        raise ValueError(f"outcome {outcome} has probability {p!r} < {PROB_FLOOR}")
    post = _project(rho, projectors[outcome]) / p
    return DensityMatrix._wrap(post), p


def measure_projective(
    rho: DensityMatrix,
    projectors: Sequence[Projector],
    rng: np.random.Generator,
    *,
    atol: float = ATOL,
) -> MeasurementResult:
    """Sample a projective measurement {P_b}.

    Outcome b occurs with probability Tr(P_b rho); the post state is
    P_b rho P_b / Tr(P_b rho).
    """
    _check_completeness(projectors, rho.dim, atol)
    probs = np.array([p.probability(rho) for p in projectors])
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > atol:
        raise ValueError(f"outcome probabilities sum to {total!r}, expected 1")
    b = int(rng.choice(len(projectors), p=probs / total))
    p = float(probs[b])
    if p < PROB_FLOOR:
        raise ValueError(f"sampled outcome {b} has probability {p!r} < {PROB_FLOOR}")
    post = _project(rho, projectors[b]) / p
    return MeasurementResult(b, DensityMatrix._wrap(post), p)


State = Union[PureState, DensityMatrix, np.ndarray]


def tensor(a: State, b: State):
    """Kronecker product with the left operand as the most significant slot(s)."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState._wrap(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix._wrap(np.kron(a.matrix, b.matrix))
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return np.kron(a, b)
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def _require_register(state, name: str) -> int:
    n = state.num_qubits
    if n is None:
        raise ValueError(f"{name} of dimension {state.dim} is not a qubit register")
    return n


def partial_trace(rho: DensityMatrix, i: int) -> DensityMatrix:
    """Trace out qubit i (1-based) of an n-qubit density matrix."""
    n = _require_register(rho, "density matrix")
    if n < 2:
        raise ValueError("partial trace needs at least 2 qubits")
    if not 1 <= i <= n:
        raise IndexError(f"qubit index {i} out of range for {n} qubits")
    left, right = 1 << (i - 1), 1 << (n - i)
    return DensityMatrix._wrap(kernels.partial_trace_dense(rho.matrix, left, 2, right))


def delete_qubit(state: Union[PureState, DensityMatrix], i: int) -> DensityMatrix:
    """The deletion channel: discard qubit i without revealing its position.

    Accepts either representation of the input state.  For a pure input the
    reduced matrix is assembled directly from the two branch vectors, which
    is what makes large verification sweeps affordable; the result equals
    ``partial_trace(state.density(), i)`` exactly.
    """
    if isinstance(state, DensityMatrix):
        return partial_trace(state, i)
    n = _require_register(state, "state")
    if n < 2:
        raise ValueError("deleting a qubit needs at least 2 qubits")
    if not 1 <= i <= n:
        raise IndexError(f"qubit index {i} out of range for {n} qubits")
    left, right = 1 << (i - 1), 1 << (n - i)
    # branches[b] = components with qubit i equal to b, flattened over the rest
    branches = np.swapaxes(state.amplitudes.reshape(left, 2, right), 0, 1).reshape(2, -1)
    return DensityMatrix._wrap(kernels.branch_outer_sum(branches))


def fidelity(phi: PureState, rho: Union[DensityMatrix, PureState]) -> float:
    """Overlap <phi|rho|phi> in [0, 1]."""
    if isinstance(rho, PureState):
        if phi.dim != rho.dim:
            raise ValueError(f"dimension mismatch: {phi.dim} vs {rho.dim}")
        return min(max(abs(phi.inner(rho)) ** 2, 0.0), 1.0)
    if phi.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {phi.dim} vs {rho.dim}")
    val = complex(np.vdot(phi.amplitudes, rho.matrix @ phi.amplitudes))
    if abs(val.imag) > ATOL_STRICT:
        raise ValueError(f"fidelity has imaginary part {val.imag:.3e}")
    return min(max(val.real, 0.0), 1.0)


def apply_operator(
    rho: DensityMatrix,
    op: np.ndarray,
    *,
    require_isometry: bool = False,
    atol: float = ATOL,
) -> DensityMatrix:
    """Conjugation rho -> M rho M^dagger.

    ``op`` may be rectangular (out_dim x in_dim).  With ``require_isometry``
    the Gram matrix on the smaller side must be the identity, which makes
    the map trace preserving on supported inputs.
    """
    op = np.asarray(op, dtype=np.complex128)
    if op.ndim != 2 or op.shape[1] != rho.dim:
        raise ValueError(f"operator shape {op.shape} does not match dimension {rho.dim}")
    if require_isometry:
        gram = op @ op.conj().T if op.shape[0] <= op.shape[1] else op.conj().T @ op
        if float(np.abs(gram - np.eye(gram.shape[0])).max()) > atol:
            raise ValueError("operator is not an isometry")
    return DensityMatrix._wrap(op @ rho.matrix @ op.conj().T)


def permute_qubits(state: Union[PureState, DensityMatrix], perm: Sequence[int]):
    """Relabel register positions: output qubit j carries input qubit perm[j-1].

    ``perm`` is a 1-based permutation of 1..n.
    """
    n = _require_register(state, "state")
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"perm {perm!r} is not a permutation of 1..{n}")
    dim = 1 << n
    idx = np.arange(dim)
    # src[y] = input index whose bit at position perm[j] matches bit j of y
    src = np.zeros(dim, dtype=np.intp)
    for j, p in enumerate(perm, start=1):
        bit = (idx >> (n - j)) & 1
        src |= bit << (n - p)
    if isinstance(state, PureState):
        return PureState._wrap(state.amplitudes[src])
    return DensityMatrix._wrap(state.matrix[np.ix_(src, src)])


def complete_unitary(
    pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    dim: int,
    *,
    atol: float = ATOL,
) -> np.ndarray:
    """Extend a partial isometry to a full unitary on C^dim.

    ``pairs`` maps an orthonormal family of domain vectors to an orthonormal
    family of image vectors.  Both families are completed by Gram-Schmidt
    over the computational basis in lexicographic order (deterministic), and
    leftover directions are paired in that order.
    """

    def _complete(vecs: list[np.ndarray]) -> list[np.ndarray]:
        basis = list(vecs)
        for k in range(dim):
            e = np.zeros(dim, dtype=np.complex128)
            e[k] = 1.0
            for v in basis:
                e = e - np.vdot(v, e) * v
            norm = float(np.linalg.norm(e))
            if norm > 1e-6:
                basis.append(e / norm)
        if len(basis) != dim:
            raise ValueError("could not complete an orthonormal basis")
        return basis

    domain = [np.asarray(d, dtype=np.complex128).reshape(-1) for d, _ in pairs]
    image = [np.asarray(t, dtype=np.complex128).reshape(-1) for _, t in pairs]
    for fam in (domain, image):
        gram = np.array([[np.vdot(u, v) for v in fam] for u in fam])
        if float(np.abs(gram - np.eye(len(fam))).max()) > atol:
            raise ValueError("pinned vectors are not orthonormal")
    dom_full = _complete(domain)
    img_full = _complete(image)
    u = sum(np.outer(t, d.conj()) for d, t in zip(dom_full, img_full))
    if float(np.abs(u.conj().T @ u - np.eye(dim)).max()) > atol:
        raise ValueError("completion failed to produce a unitary")
    return u


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state: normalized i.i.d. standard complex Gaussians."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState._wrap(v / np.linalg.norm(v))


def random_density_matrix(
    dim: int, rng: np.random.Generator, *, rank: int | None = None
) -> DensityMatrix:
    """Random full-rank (or rank-limited) density matrix, Wishart style."""
    r = dim if rank is None else rank
    g = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    mat = g @ g.conj().T
    return DensityMatrix._wrap(mat / np.trace(mat).real)
