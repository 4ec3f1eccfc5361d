"""Tests for the qubit measurement schemes.

Expected values come from the closed-form output states of each circuit;
cross-checks against the 4x4 matrices use independent einsum contractions
rather than the module's own extraction path.
"""

import numpy as np
import pytest

from qmeasure.linalg import equal_up_to_global_phase, matrix_exponential
from qmeasure.qubit import (
    KrausPair,
    PulseKind,
    QubitState,
    Scheme,
    build_unitary,
    compose_pulses,
    hamiltonian_generator,
    kraus_operators,
    measure,
    pulse_sequence,
    sqrt_swap,
)

ALL_SCHEMES = [Scheme.CNOT, Scheme.DCNOT, Scheme.SWAP]


def random_state(rng) -> QubitState:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return QubitState.from_vector(v)


def random_pair(rng):
    return random_state(rng), random_state(rng)


class TestQubitState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            QubitState(1.0, 1.0)

    def test_from_vector_normalizes(self):
        s = QubitState.from_vector([3.0, 4.0])
        assert abs(s.amp_plus - 0.6) < 1e-12
        assert abs(s.amp_minus - 0.8) < 1e-12

    def test_same_ray_ignores_phase(self):
        s = QubitState.from_vector([1.0, 1j])
        t = QubitState.from_vector([np.exp(1j * 0.7), 1j * np.exp(1j * 0.7)])
        assert s.same_ray(t)


class TestBuildUnitary:
    def test_all_unitary(self):
        for scheme in ALL_SCHEMES:
            u = build_unitary(scheme)
            np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)

    def test_cnot_flips_probe_on_minus(self):
        """System |-> reverses the probe parity: |-,+> -> |-,->."""
        u = build_unitary(Scheme.CNOT)
        out = u @ np.array([0, 0, 1, 0], dtype=complex)  # |-,+>
        np.testing.assert_allclose(out, [0, 0, 0, 1], atol=1e-12)
        out = u @ np.array([0, 0, 0, 1], dtype=complex)  # |-,->
        np.testing.assert_allclose(out, [0, 0, 1, 0], atol=1e-12)

    def test_cnot_keeps_probe_on_plus(self):
        u = build_unitary(Scheme.CNOT)
        out = u @ np.array([0, 1, 0, 0], dtype=complex)  # |+,->
        np.testing.assert_allclose(out, [0, 1, 0, 0], atol=1e-12)

    def test_swap_fixed_point(self):
        u = build_unitary(Scheme.SWAP)
        plus_plus = np.array([1, 0, 0, 0], dtype=complex)
        np.testing.assert_allclose(u @ plus_plus, plus_plus, atol=1e-12)

    def test_swap_exchanges_random_products(self):
        u = build_unitary(Scheme.SWAP)
        rng = np.random.default_rng(21)
        for _ in range(20):
            s, p = random_pair(rng)
            out = u @ np.kron(s.vector, p.vector)
            np.testing.assert_allclose(out, np.kron(p.vector, s.vector), atol=1e-12)

    def test_dcnot_output_state(self):
        """(a,b) system with (c,d) probe maps to
        (c|+> + d|->) a |+>_p + (d|+> + c|->) b |->_p."""
        u = build_unitary(Scheme.DCNOT)
        rng = np.random.default_rng(4)
        for _ in range(20):
            s, p = random_pair(rng)
            a, b = s.amp_plus, s.amp_minus
            c, d = p.amp_plus, p.amp_minus
            expected = np.kron([c, d], [a, 0]) + np.kron([d, c], [0, b])
            np.testing.assert_allclose(u @ np.kron(s.vector, p.vector), expected, atol=1e-12)


class TestMeasure:
    def test_cnot_with_aligned_probe(self):
        """Probe prepared in |+> reads out the sigma-z populations exactly."""
        rng = np.random.default_rng(9)
        probe = QubitState(1.0, 0.0)
        for _ in range(20):
            system = random_state(rng)
            result = measure(Scheme.CNOT, system, probe)
            assert abs(result.prob_plus - abs(system.amp_plus) ** 2) < 1e-12
            assert abs(result.prob_minus - abs(system.amp_minus) ** 2) < 1e-12
            if result.post_plus is not None:
                assert result.post_plus.same_ray(QubitState(1.0, 0.0))
            if result.post_minus is not None:
                assert result.post_minus.same_ray(QubitState(0.0, 1.0))

    def test_swap_post_state_is_probe(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            system, probe = random_pair(rng)
            result = measure(Scheme.SWAP, system, probe)
            assert abs(result.prob_plus - abs(system.amp_plus) ** 2) < 1e-12
            assert abs(result.prob_minus - abs(system.amp_minus) ** 2) < 1e-12
            for post in (result.post_plus, result.post_minus):
                if post is not None:
                    assert post.same_ray(probe)

    def test_dcnot_definite_system(self):
        """System |+> always reads +1 and hands the probe state to the system."""
        rng = np.random.default_rng(12)
        system = QubitState(1.0, 0.0)
        for _ in range(10):
            probe = random_state(rng)
            # independent oracle: contract the 4x4 unitary directly
            u = build_unitary(Scheme.DCNOT).reshape(2, 2, 2, 2)
            joint = np.einsum("sqtp,t,p->sq", u, system.vector, probe.vector)
            prob_plus_oracle = np.linalg.norm(joint[:, 0]) ** 2
            result = measure(Scheme.DCNOT, system, probe)
            assert abs(result.prob_plus - prob_plus_oracle) < 1e-12
            assert abs(result.prob_plus - 1.0) < 1e-12
            assert result.post_minus is None
            assert result.post_plus.same_ray(probe)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(13)
        for scheme in ALL_SCHEMES:
            for _ in range(30):
                s, p = random_pair(rng)
                result = measure(scheme, s, p)
                assert abs(result.prob_plus + result.prob_minus - 1.0) < 1e-10

    def test_probe_independence(self):
        """DCNOT and SWAP probabilities do not depend on the probe state."""
        rng = np.random.default_rng(14)
        system = random_state(rng)
        for scheme in (Scheme.DCNOT, Scheme.SWAP):
            probs = [
                measure(scheme, system, random_state(rng)).prob_plus for _ in range(50)
            ]
            assert max(probs) - min(probs) < 1e-10

    def test_swap_output_is_product(self):
        u = build_unitary(Scheme.SWAP)
        rng = np.random.default_rng(15)
        for _ in range(20):
            s, p = random_pair(rng)
            out = (u @ np.kron(s.vector, p.vector)).reshape(2, 2)
            sv = np.linalg.svd(out, compute_uv=False)
            assert sv[1] < 1e-10


class TestKrausOperators:
    def kraus_matches(self, pair: KrausPair, expected_plus, expected_minus):
        for got, want in ((pair.m_plus, expected_plus), (pair.m_minus, expected_minus)):
            ok, _ = equal_up_to_global_phase(got, np.asarray(want, complex), 1e-10)
            assert ok

    def test_cnot_projectors(self):
        pair = kraus_operators(Scheme.CNOT, QubitState(1.0, 0.0))
        self.kraus_matches(pair, [[1, 0], [0, 0]], [[0, 0], [0, 1]])

    def test_dcnot_closed_form(self):
        rng = np.random.default_rng(16)
        for _ in range(10):
            probe = random_state(rng)
            c, d = probe.amp_plus, probe.amp_minus
            pair = kraus_operators(Scheme.DCNOT, probe)
            self.kraus_matches(pair, [[c, 0], [d, 0]], [[0, d], [0, c]])

    def test_swap_closed_form(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            probe = random_state(rng)
            c, d = probe.amp_plus, probe.amp_minus
            pair = kraus_operators(Scheme.SWAP, probe)
            self.kraus_matches(pair, [[c, 0], [d, 0]], [[0, c], [0, d]])

    def test_completeness(self):
        rng = np.random.default_rng(18)
        for scheme in ALL_SCHEMES:
            for _ in range(200):
                pair = kraus_operators(scheme, random_state(rng))
                assert pair.completeness_residual() < 1e-10

    def test_agrees_with_measure(self):
        """Operator probabilities and post-states match the projection path."""
        rng = np.random.default_rng(19)
        for scheme in ALL_SCHEMES:
            for _ in range(40):
                system, probe = random_pair(rng)
                pair = kraus_operators(scheme, probe)
                result = measure(scheme, system, probe)
                p_plus, p_minus = pair.probabilities(system)
                assert abs(p_plus - result.prob_plus) < 1e-10
                assert abs(p_minus - result.prob_minus) < 1e-10
                if result.post_plus is not None:
                    post = QubitState.from_vector(pair.m_plus @ system.vector)
                    assert post.same_ray(result.post_plus)
                if result.post_minus is not None:
                    post = QubitState.from_vector(pair.m_minus @ system.vector)
                    assert post.same_ray(result.post_minus)


class TestHamiltonianGenerators:
    def test_cnot_generator_idempotent(self):
        gen, angle = hamiltonian_generator(Scheme.CNOT)
        assert abs(angle - np.pi) < 1e-15
        np.testing.assert_allclose(gen @ gen, gen, atol=1e-12)

    def test_dcnot_generator_cubic(self):
        gen, angle = hamiltonian_generator(Scheme.DCNOT)
        assert abs(angle - 2 * np.pi / 3) < 1e-15
        np.testing.assert_allclose(gen @ gen @ gen, gen, atol=1e-12)

    def test_exponentials_reach_circuits(self):
        for scheme in (Scheme.CNOT, Scheme.DCNOT):
            gen, angle = hamiltonian_generator(scheme)
            u = matrix_exponential(gen, 1j * angle)
            np.testing.assert_allclose(u, build_unitary(scheme), atol=1e-10)

    def test_swap_exponential_up_to_phase(self):
        gen, angle = hamiltonian_generator(Scheme.SWAP)
        assert abs(angle - np.pi / 4) < 1e-15
        u = matrix_exponential(gen, 1j * angle)
        ok, _ = equal_up_to_global_phase(u, build_unitary(Scheme.SWAP), 1e-10)
        assert ok

    def test_generators_hermitian(self):
        for scheme in ALL_SCHEMES:
            gen, _ = hamiltonian_generator(scheme)
            np.testing.assert_allclose(gen, gen.conj().T, atol=1e-14)


class TestSqrtSwap:
    def test_zero_power_is_identity(self):
        np.testing.assert_allclose(sqrt_swap(0.0), np.eye(4), atol=1e-12)

    def test_unit_power_is_swap_up_to_phase(self):
        ok, _ = equal_up_to_global_phase(sqrt_swap(1.0), build_unitary(Scheme.SWAP), 1e-10)
        assert ok

    def test_half_powers_compose(self):
        half = sqrt_swap(0.5)
        np.testing.assert_allclose(half @ half, sqrt_swap(1.0), atol=1e-10)

    def test_always_unitary(self):
        for alpha in (-1.3, -0.5, 0.25, 2.0):
            u = sqrt_swap(alpha)
            np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


class TestPulseSequences:
    def test_cnot_compilation(self):
        seq = pulse_sequence(Scheme.CNOT)
        ok, _ = equal_up_to_global_phase(
            compose_pulses(seq), build_unitary(Scheme.CNOT), 1e-10
        )
        assert ok

    def test_dcnot_compilation_uses_inverse_half_swap(self):
        seq = pulse_sequence(Scheme.DCNOT)
        powers = [p.parameter for p in seq if p.kind is PulseKind.SWAP_POWER]
        assert -0.5 in powers
        ok, _ = equal_up_to_global_phase(
            compose_pulses(seq), build_unitary(Scheme.DCNOT), 1e-10
        )
        assert ok

    def test_empty_sequence_is_identity(self):
        np.testing.assert_allclose(compose_pulses([]), np.eye(4), atol=1e-15)

    def test_swap_unsupported(self):
        with pytest.raises(ValueError, match="no pulse sequence"):
            pulse_sequence(Scheme.SWAP)
