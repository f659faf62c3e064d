"""Tests for the 4-qubit code: encoder, branch oracle, recovery ops, decoder."""

import itertools

import numpy as np
import pytest

from qdel.q4code import (
    OMEGA,
    VARIANTS,
    apply_extract,
    apply_parity_flip,
    branch_states,
    decode4,
    deletion_mixture,
    encode4,
    extract_matrix,
    parity_flip_matrix,
    step1_projectors,
    twisted_weight2_basis,
)
from qdel.qstate import (
    DensityMatrix,
    NotPureError,
    PureState,
    delete_qubit,
    fidelity,
    measure_forced,
    permute_qubits,
    random_pure_state,
)


def ket(bits: str) -> PureState:
    return PureState.from_bits(bits)


class TestEncoder:
    def test_zero_message(self):
        out = encode4(ket("0")).amplitudes
        expect = np.zeros(16)
        expect[[0b0000, 0b1111]] = 1 / np.sqrt(2)
        np.testing.assert_allclose(out, expect, atol=1e-15)

    def test_one_message(self):
        out = encode4(ket("1")).amplitudes
        expect = np.zeros(16)
        expect[[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]] = 1 / np.sqrt(6)
        np.testing.assert_allclose(out, expect, atol=1e-15)

    def test_plus_message_by_linearity(self):
        plus = PureState(np.array([1, 1]) / np.sqrt(2))
        out = encode4(plus).amplitudes
        assert out[0b0000] == pytest.approx(0.5, abs=1e-15)
        assert out[0b1111] == pytest.approx(0.5, abs=1e-15)
        for i in (0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100):
            assert out[i] == pytest.approx(1 / np.sqrt(12), abs=1e-15)

    def test_isometry(self, rng):
        for _ in range(50):
            a, b = random_pure_state(2, rng), random_pure_state(2, rng)
            lhs = encode4(a).inner(encode4(b))
            assert abs(lhs - a.inner(b)) <= 1e-12

    def test_permutation_invariance(self, rng):
        psi = encode4(random_pure_state(2, rng))
        for perm in itertools.permutations((1, 2, 3, 4)):
            out = permute_qubits(psi, perm)
            assert np.abs(out.amplitudes - psi.amplitudes).max() <= 1e-12

    def test_rejects_wrong_dimension(self, rng):
        with pytest.raises(ValueError):
            encode4(random_pure_state(4, rng))


class TestDeletionMixture:
    def test_zero_message(self):
        mix = deletion_mixture(ket("0")).matrix
        expect = 0.5 * ket("000").density().matrix + 0.5 * ket("111").density().matrix
        np.testing.assert_allclose(mix, expect, atol=1e-15)

    def test_one_message(self):
        even, odd = branch_states(ket("1"))
        expect_even = np.zeros(8)
        expect_even[[0b011, 0b101, 0b110]] = 1 / np.sqrt(3)
        np.testing.assert_allclose(even.amplitudes, expect_even, atol=1e-15)
        expect_odd = np.zeros(8)
        expect_odd[[0b001, 0b010, 0b100]] = 1 / np.sqrt(3)
        np.testing.assert_allclose(odd.amplitudes, expect_odd, atol=1e-15)

    def test_matches_channel_every_position(self, rng):
        for _ in range(1000):
            phi = random_pure_state(2, rng)
            codeword = encode4(phi)
            oracle = deletion_mixture(phi).matrix
            for i in range(1, 5):
                assert np.abs(delete_qubit(codeword, i).matrix - oracle).max() <= 1e-12

    def test_position_independence(self, rng):
        codeword = encode4(random_pure_state(2, rng))
        first = delete_qubit(codeword, 1).matrix
        for i in (2, 3, 4):
            assert np.abs(delete_qubit(codeword, i).matrix - first).max() <= 1e-12


class TestDecoderBases:
    def test_projectors_resolve_identity(self):
        p0, p1 = step1_projectors()
        assert p0.rank() == 4 and p1.rank() == 4
        np.testing.assert_allclose(p0.matrix + p1.matrix, np.eye(8), atol=1e-15)
        np.testing.assert_allclose(p0.matrix @ p1.matrix, np.zeros((8, 8)), atol=1e-15)

    def test_twisted_basis_orthonormal(self):
        vecs = [ket("000").amplitudes] + [t.amplitudes for t in twisted_weight2_basis()]
        gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)

    def test_omega_is_primitive_cube_root(self):
        assert abs(OMEGA**3 - 1) <= 1e-15
        assert abs(OMEGA - 1) > 1


class TestParityFlip:
    def test_unitary(self):
        f = parity_flip_matrix()
        np.testing.assert_allclose(f.conj().T @ f, np.eye(8), atol=1e-12)

    def test_basis_relabeling(self):
        out = apply_parity_flip(ket("111").density())
        np.testing.assert_allclose(out.matrix, ket("000").density().matrix, atol=1e-13)

    def test_linearity_on_superposition(self):
        amp = np.zeros(8, dtype=complex)
        amp[[0b100, 0b010, 0b001]] = 1 / np.sqrt(3)
        out = apply_parity_flip(PureState(amp).density())
        expect = np.zeros(8, dtype=complex)
        expect[[0b011, 0b101, 0b110]] = 1 / np.sqrt(3)
        np.testing.assert_allclose(out.matrix, np.outer(expect, expect.conj()), atol=1e-13)

    def test_odd_branch_to_even_branch(self, rng):
        phi = random_pure_state(2, rng)
        even, odd = branch_states(phi)
        out = apply_parity_flip(odd.density())
        assert np.abs(out.matrix - even.density().matrix).max() <= 1e-12

    def test_support_leak_rejected(self):
        with pytest.raises(ValueError, match="leaks"):
            apply_parity_flip(ket("000").density())


class TestExtract:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_unitary(self, variant):
        g = extract_matrix(variant)
        np.testing.assert_allclose(g.conj().T @ g, np.eye(8), atol=1e-12)

    def test_keeps_all_zero(self):
        out = apply_extract(ket("000").density())
        np.testing.assert_allclose(out.matrix, ket("000").density().matrix, atol=1e-13)

    def test_uniform_weight2_to_100(self):
        uniform = twisted_weight2_basis()[0]
        out = apply_extract(uniform.density())
        np.testing.assert_allclose(out.matrix, ket("100").density().matrix, atol=1e-13)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_even_branch_factorizes(self, variant, rng):
        phi = random_pure_state(2, rng)
        even, _ = branch_states(phi)
        out = extract_matrix(variant) @ even.amplitudes
        alpha, beta = phi.amplitudes
        expect = np.zeros(8, dtype=complex)
        expect[0b000] = alpha
        expect[0b100] = beta
        np.testing.assert_allclose(out, expect, atol=1e-12)

    def test_variants_differ_only_on_twisted_tail(self):
        lit = extract_matrix("literal")
        cor = extract_matrix("corrected")
        tw = twisted_weight2_basis()
        e = np.eye(8)
        np.testing.assert_allclose(lit @ tw[2].amplitudes, e[0b011], atol=1e-12)
        np.testing.assert_allclose(cor @ tw[2].amplitudes, e[0b001], atol=1e-12)

    def test_unknown_variant(self):
        with pytest.raises(ValueError, match="variant"):
            extract_matrix("other")

    def test_support_leak_rejected(self):
        with pytest.raises(ValueError, match="leaks"):
            apply_extract(ket("100").density())


class TestDecode4:
    def test_zero_message_both_outcomes(self):
        rho = delete_qubit(encode4(ket("0")), 2)
        for b in (0, 1):
            out = decode4(rho, outcome=b)
            assert fidelity(ket("0"), out) >= 1 - 1e-12

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_round_trip(self, variant, rng):
        for _ in range(25):
            phi = random_pure_state(2, rng)
            codeword = encode4(phi)
            for i in range(1, 5):
                rho = delete_qubit(codeword, i)
                for b in (0, 1):
                    out = decode4(rho, outcome=b, variant=variant)
                    assert fidelity(phi, out) >= 1 - 1e-10

    def test_sampled_measurement(self, rng):
        phi = random_pure_state(2, rng)
        rho = delete_qubit(encode4(phi), 1)
        for _ in range(10):
            assert fidelity(phi, decode4(rho, rng)) >= 1 - 1e-10

    def test_branch_probabilities_are_half(self, rng):
        p0, p1 = step1_projectors()
        for _ in range(20):
            rho = delete_qubit(encode4(random_pure_state(2, rng)), 3)
            assert abs(p0.probability(rho) - 0.5) <= 1e-10
            assert abs(p1.probability(rho) - 0.5) <= 1e-10

    def test_forced_outcome_posts_are_branches(self, rng):
        phi = random_pure_state(2, rng)
        even, odd = branch_states(phi)
        rho = delete_qubit(encode4(phi), 1)
        post0, _ = measure_forced(rho, step1_projectors(), 0)
        post1, _ = measure_forced(rho, step1_projectors(), 1)
        assert np.abs(post0.matrix - even.density().matrix).max() <= 1e-12
        assert np.abs(post1.matrix - odd.density().matrix).max() <= 1e-12

    def test_permutation_robust(self, rng):
        phi = random_pure_state(2, rng)
        rho = delete_qubit(encode4(phi), 4)
        for perm in itertools.permutations((1, 2, 3)):
            permuted = permute_qubits(rho, perm)
            for b in (0, 1):
                assert fidelity(phi, decode4(permuted, outcome=b)) >= 1 - 1e-10

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_maximally_mixed_is_undecodable(self, variant):
        # independent evaluation of the pipeline on I/8, forced even outcome:
        # measurement leaves the normalized even projector, extraction turns
        # it into a rank-4 mixture, and the surviving qubit is mixed
        p0 = step1_projectors()[0].matrix
        g = extract_matrix(variant)
        post = p0 @ (np.eye(8) / 8) @ p0
        post = post / np.trace(post).real
        rotated = g @ post @ g.conj().T
        two = rotated.reshape(4, 2, 4, 2)
        two = two[:, 0, :, 0] + two[:, 1, :, 1]  # drop qubit 3
        one = two.reshape(2, 2, 2, 2)
        one = one[:, 0, :, 0] + one[:, 1, :, 1]  # drop qubit 2
        purity = float(np.vdot(one, one).real)
        assert purity < 1 - 1e-10

        with pytest.raises(NotPureError):
            decode4(DensityMatrix(np.eye(8) / 8), outcome=0, variant=variant)

    def test_rejects_wrong_dimension(self, rng):
        with pytest.raises(ValueError):
            decode4(DensityMatrix(np.eye(4) / 4), outcome=0)

    def test_needs_rng_or_outcome(self):
        rho = delete_qubit(encode4(ket("0")), 1)
        with pytest.raises(ValueError, match="random generator"):
            decode4(rho)
