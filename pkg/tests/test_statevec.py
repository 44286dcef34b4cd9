"""
Tests for the labeled state-vector engine: construction, gates, reordering
and measurement in forced and sampling mode.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import azimuths, polar_angles
from rejectq.core.errors import StateError, ZeroProbabilityError
from rejectq.core.statevec import gates
from rejectq.core.statevec.measurement import (
    COMPUTATIONAL,
    DIAGONAL,
    SingleQubitBasis,
    bell_measure,
    bell_probabilities,
    fidelity,
    measure,
    outcome_probabilities,
    select_outcome,
)
from rejectq.core.statevec.state import (
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

P1, P2, P3 = QubitLabel.PARTICLE1, QubitLabel.PARTICLE2, QubitLabel.PARTICLE3
S = 1 / math.sqrt(2)


class TestPureState:
    def test_basis_is_big_endian(self):
        state = PureState.basis([P1, P2], [1, 0])
        assert state.amplitudes[2] == 1
        assert state.amplitude([1, 0]) == 1

    def test_string_labels_are_accepted(self):
        state = PureState(["particle1"], [1, 0])
        assert state.labels == (P1,)

    def test_rejects_unnormalized(self):
        with pytest.raises(StateError, match="not normalized"):
            PureState([P1], [1, 1])

    def test_rejects_duplicate_labels(self):
        with pytest.raises(StateError, match="Duplicate"):
            PureState([P1, P1], [1, 0, 0, 0])

    def test_rejects_unknown_label(self):
        with pytest.raises(StateError, match="Unknown qubit label"):
            PureState(["photon9"], [1, 0])

    def test_rejects_more_than_five_qubits(self):
        labels = [P1, P2, P3, QubitLabel.PARTICLE4, QubitLabel.ARM_A, QubitLabel.ARM_B]
        vector = np.zeros(2**6)
        vector[0] = 1
        with pytest.raises(StateError, match="at most 5"):
            PureState(labels, vector)

    def test_rejects_wrong_amplitude_count(self):
        with pytest.raises(StateError, match="Expected 4 amplitudes"):
            PureState([P1, P2], [1, 0])

    def test_amplitudes_are_read_only(self):
        state = PureState.basis([P1], [0])
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0

    def test_from_amplitudes_normalizes(self):
        state = PureState.from_amplitudes([P1], [3, 4], normalize=True)
        np.testing.assert_allclose(state.amplitudes, [0.6, 0.8])

    def test_ket(self):
        assert bell_state(0, [P1, P2]).ket() == "0.7071|00> + 0.7071|11>"


class TestGates:
    def test_x_flips(self):
        state = apply_single(PureState.basis([P1, P2], [0, 0]), P2, gates.X)
        assert state.amplitude([0, 1]) == pytest.approx(1)

    def test_gate_acts_on_the_labeled_qubit_only(self):
        state = tensor(qubit(S, S, P1), PureState.basis([P2], [0]))
        flipped = apply_single(state, P2, gates.X)
        assert flipped.allclose(tensor(qubit(S, S, P1), PureState.basis([P2], [1])))

    def test_non_unitary_gate_is_rejected(self):
        with pytest.raises(StateError, match="not unitary"):
            apply_single(PureState.basis([P1], [0]), P1, np.array([[1, 0], [0, 2]]))

    def test_rotation_is_unitary_and_quarter_turn_flips(self):
        gate = gates.rotation_x(math.pi / 2)
        assert gates.unitarity_deviation(gate) < 1e-15
        state = apply_single(PureState.basis([P1], [0]), P1, gate)
        assert state.amplitudes[1] == pytest.approx(1j)

    def test_cnot(self):
        state = apply_cnot(PureState.basis([P1, P2], [1, 0]), P1, P2)
        assert state.amplitude([1, 1]) == 1

    def test_cnot_needs_distinct_qubits(self):
        with pytest.raises(StateError):
            apply_cnot(PureState.basis([P1, P2], [0, 0]), P1, P1)


class TestReordering:
    def test_tensor_rejects_collisions(self):
        with pytest.raises(StateError, match="collision"):
            tensor(PureState.basis([P1], [0]), PureState.basis([P1], [1]))

    def test_permute_moves_amplitudes(self):
        state = PureState.basis([P1, P2], [1, 0])
        swapped = permute(state, [P2, P1])
        assert swapped.labels == (P2, P1)
        assert swapped.amplitude([0, 1]) == 1

    def test_permute_rejects_foreign_labels(self):
        with pytest.raises(StateError):
            permute(PureState.basis([P1, P2], [0, 0]), [P1, P3])

    def test_relabel_keeps_position(self):
        state = relabel(PureState.basis([P1, P2], [1, 0]), {P2: QubitLabel.ARM_A})
        assert state.labels == (P1, QubitLabel.ARM_A)
        assert state.amplitude([1, 0]) == 1

    def test_relabel_rejects_duplicates(self):
        with pytest.raises(StateError, match="duplicate"):
            relabel(PureState.basis([P1, P2], [0, 0]), {P2: P1})

    def test_allclose_ignores_label_order_and_optionally_phase(self):
        state = bell_state(2, [P1, P2])
        assert state.allclose(permute(state, [P2, P1]))
        shifted = PureState([P1, P2], -1j * state.amplitudes)
        assert not state.allclose(shifted)
        assert state.allclose(shifted, up_to_phase=True)


class TestStateFactories:
    @given(polar_angles, azimuths)
    def test_bloch_state_is_normalized(self, theta, phi):
        state = qubit_from_bloch(theta, phi)
        assert state.norm() == pytest.approx(1.0)
        assert abs(state.amplitudes[0]) == pytest.approx(math.cos(theta / 2), abs=1e-12)

    def test_random_qubits_cover_the_sphere(self, rng):
        z = [abs(random_qubit(rng).amplitudes[0]) ** 2 * 2 - 1 for _ in range(4000)]
        # cos(theta) is uniform on [-1, 1]: mean 0, variance 1/3.
        assert np.mean(z) == pytest.approx(0.0, abs=0.05)
        assert np.var(z) == pytest.approx(1 / 3, abs=0.03)

    def test_bell_states(self):
        np.testing.assert_allclose(bell_state(0, [P1, P2]).amplitudes, [S, 0, 0, S])
        np.testing.assert_allclose(bell_state(1, [P1, P2]).amplitudes, [S, 0, 0, -S])
        np.testing.assert_allclose(bell_state(2, [P1, P2]).amplitudes, [0, S, S, 0])
        np.testing.assert_allclose(bell_state(3, [P1, P2]).amplitudes, [0, S, -S, 0])

    def test_bell_index_out_of_range(self):
        with pytest.raises(StateError):
            bell_state(4, [P1, P2])

    def test_ghz(self):
        state = ghz_state([P1, P2, P3])
        assert state.amplitude([0, 0, 0]) == pytest.approx(S)
        assert state.amplitude([1, 1, 1]) == pytest.approx(S)


class TestMeasurement:
    def test_forced_outcome_reports_probability(self):
        state = qubit_from_bloch(math.pi / 2, 0.0)
        result = measure(state, P1, COMPUTATIONAL, forced=1)
        assert result.outcome == 1
        assert result.probability == pytest.approx(0.5)
        assert result.post_state.num_qubits == 0

    def test_forcing_impossible_outcome_raises(self):
        state = qubit_from_bloch(math.pi / 2, 0.0)
        with pytest.raises(ZeroProbabilityError) as info:
            measure(state, P1, DIAGONAL, forced=1)
        assert info.value.probability < 1e-12
        assert "Born probability" in str(info.value)

    def test_measurement_needs_rng_or_forced(self):
        with pytest.raises(StateError):
            measure(PureState.basis([P1], [0]), P1)

    def test_forced_out_of_range(self):
        with pytest.raises(StateError):
            select_outcome(np.array([0.5, 0.5]), forced=2)

    def test_sampling_follows_born_weights(self, rng):
        draws = [select_outcome(np.array([0.2, 0.8]), rng) for _ in range(20000)]
        assert np.mean(draws) == pytest.approx(0.8, abs=0.015)

    def test_measuring_removes_the_qubit(self):
        state = tensor(PureState.basis([P1], [1]), qubit(S, S, P2))
        result = measure(state, P1, rng=np.random.default_rng(0))
        assert result.outcome == 1
        assert result.post_state.labels == (P2,)

    def test_diagonal_measurement_of_bell_half(self):
        result = measure(bell_state(0, [P1, P2]), P2, DIAGONAL, forced=1)
        np.testing.assert_allclose(result.post_state.amplitudes, [S, -S], atol=1e-15)

    @pytest.mark.parametrize("index", range(4))
    def test_bell_measurement_identifies_bell_states(self, index, rng):
        state = bell_state(index, [P1, P2])
        result = bell_measure(state, P1, P2, rng=rng)
        assert result.outcome == index
        assert result.probability == pytest.approx(1.0)
        np.testing.assert_allclose(
            bell_probabilities(state, P1, P2), np.eye(4)[index], atol=1e-15
        )

    def test_outcome_probabilities_leave_state_untouched(self):
        state = qubit_from_bloch(math.pi / 3, 0.4)
        probabilities = outcome_probabilities(state, P1)
        assert probabilities.sum() == pytest.approx(1.0)
        assert probabilities[0] == pytest.approx(math.cos(math.pi / 6) ** 2)


class TestFidelity:
    def test_orthogonal_bell_states(self):
        assert fidelity(bell_state(0, [P1, P2]), bell_state(1, [P1, P2])) == pytest.approx(0)

    def test_independent_of_label_order(self):
        state = bell_state(2, [P1, P2])
        assert fidelity(state, permute(state, [P2, P1])) == pytest.approx(1.0)

    def test_mismatched_labels(self):
        with pytest.raises(StateError, match="matching labels"):
            fidelity(PureState.basis([P1], [0]), PureState.basis([P2], [0]))

    @settings(max_examples=50)
    @given(polar_angles, azimuths)
    def test_global_phase_is_ignored(self, theta, phi):
        state = qubit_from_bloch(theta, phi)
        rotated = PureState([P1], np.exp(1j * 0.7) * state.amplitudes)
        assert fidelity(state, rotated) == pytest.approx(1.0)


def random_state(rng, labels):
    vector = rng.normal(size=2 ** len(labels)) + 1j * rng.normal(size=2 ** len(labels))
    return PureState.from_amplitudes(labels, vector, normalize=True)


def random_gate(rng):
    choice = rng.integers(7)
    if choice == 6:
        return gates.rotation_x(rng.uniform(-math.pi, math.pi))
    return gates.STANDARD[choice]


def random_basis(rng):
    matrix = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    unitary, _ = np.linalg.qr(matrix)
    return SingleQubitBasis(unitary[:, 0], unitary[:, 1])


class TestUnitaryInvariants:
    def test_gate_then_dagger_restores_state(self, rng):
        for _ in range(100):
            state = random_state(rng, [P1, P2, P3])
            target = [P1, P2, P3][rng.integers(3)]
            gate = random_gate(rng)
            restored = apply_single(apply_single(state, target, gate), target, gates.dagger(gate))
            np.testing.assert_allclose(restored.amplitudes, state.amplitudes, atol=1e-10)

    def test_cnot_is_an_involution(self, rng):
        for _ in range(20):
            state = random_state(rng, [P1, P2, P3])
            twice = apply_cnot(apply_cnot(state, P1, P3), P1, P3)
            np.testing.assert_allclose(twice.amplitudes, state.amplitudes, atol=1e-12)

    def test_operations_preserve_the_norm(self, rng):
        spare = [QubitLabel.ARM_A, QubitLabel.ARM_B, QubitLabel.ANCILLA_1]
        state = random_state(rng, [P1, P2])
        for _ in range(60):
            labels = list(state.labels)
            step = rng.integers(4)
            if step == 0:
                state = apply_single(state, labels[rng.integers(len(labels))], random_gate(rng))
            elif step == 1:
                control, target = rng.choice(len(labels), size=2, replace=False)
                state = apply_cnot(state, labels[control], labels[target])
            elif step == 2 and spare:
                state = tensor(state, random_state(rng, [spare.pop()]))
            else:
                state = permute(state, [labels[i] for i in rng.permutation(len(labels))])
            assert state.norm() == pytest.approx(1.0, abs=1e-12)
        assert state.num_qubits == 5


class TestBornRule:
    def test_sampling_of_plus_state(self, rng):
        plus = qubit_from_bloch(math.pi / 2, 0.0)
        samples = 100_000
        ones = sum(measure(plus, P1, rng=rng).outcome for _ in range(samples))
        assert abs(ones / samples - 0.5) < 3 * math.sqrt(0.25 / samples)

    def test_completeness_in_random_bases(self, rng):
        for _ in range(50):
            basis = random_basis(rng)
            state = random_state(rng, [P1, P2])
            probabilities = outcome_probabilities(state, P1, basis)
            assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)
            rebuilt = np.zeros(4, dtype=complex)
            for outcome in (0, 1):
                if probabilities[outcome] <= 1e-12:
                    continue
                result = measure(state, P1, basis, forced=outcome)
                assert result.probability == pytest.approx(probabilities[outcome])
                rebuilt += np.kron(
                    basis.vectors[outcome],
                    math.sqrt(result.probability) * result.post_state.amplitudes,
                )
            np.testing.assert_allclose(rebuilt, state.amplitudes, atol=1e-12)

    def test_measuring_one_half_of_a_correlated_pair(self):
        alpha, beta = 0.6, 0.8j
        state = PureState([P1, P2], [alpha, 0, 0, beta])
        result = measure(state, P2, forced=1)
        assert result.probability == pytest.approx(0.64)
        assert result.post_state.labels == (P1,)
        np.testing.assert_allclose(result.post_state.amplitudes, [0, 1j], atol=1e-15)
