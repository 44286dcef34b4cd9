import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rejectq.core.channels.models import (
    NO_ERROR,
    BitFlip,
    CoherentRotation,
    ErrorSequence,
    PhaseFlip,
    describe,
    enumerate_branches,
    is_deterministic,
    parse_error_model,
)
from rejectq.core.channels.noise import RandomSource, apply_channel, apply_channels
from rejectq.core.errors import ChannelError
from rejectq.core.statevec.state import PureState, QubitLabel, ghz_state

P3, P4 = QubitLabel.PARTICLE3, QubitLabel.PARTICLE4

probabilities = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestModels:
    def test_parse_nested_sequence(self):
        model = parse_error_model(
            {
                "kind": "sequence",
                "members": [
                    {"kind": "coherent_rotation", "theta": 0.3},
                    {"kind": "phase_flip", "pz": 0.05},
                ],
            }
        )
        assert isinstance(model, ErrorSequence)
        assert isinstance(model.members[0], CoherentRotation)
        assert describe(model) == "rotation(theta=0.3) -> phase_flip(pz=0.05)"

    @pytest.mark.parametrize(
        "document",
        [
            {"kind": "bit_flip", "p": 1.5},
            {"kind": "phase_flip", "pz": -0.1},
            {"kind": "amplitude_damping", "gamma": 0.1},
            {"kind": "sequence", "members": []},
            {"kind": "coherent_rotation", "theta": float("nan")},
        ],
    )
    def test_invalid_documents(self, document):
        with pytest.raises(ChannelError):
            parse_error_model(document)

    def test_models_are_immutable(self):
        model = BitFlip(p=0.1)
        with pytest.raises(Exception):
            model.p = 0.2

    def test_determinism(self):
        assert is_deterministic(NO_ERROR)
        assert is_deterministic(BitFlip(p=1.0))
        assert is_deterministic(CoherentRotation(theta=0.4))
        assert not is_deterministic(BitFlip(p=0.3))
        assert not is_deterministic(ErrorSequence(members=[NO_ERROR, PhaseFlip(pz=0.5)]))

    @given(probabilities, probabilities)
    def test_branch_weights_sum_to_one(self, p, pz):
        model = ErrorSequence(members=[BitFlip(p=p), PhaseFlip(pz=pz)])
        branches = enumerate_branches(model)
        assert math.fsum(w for w, _ in branches) == pytest.approx(1.0)
        assert all(is_deterministic(m) for _, m in branches)

    def test_bit_flip_branches(self):
        assert enumerate_branches(BitFlip(p=0.1)) == [
            (0.9, NO_ERROR),
            (0.1, BitFlip(p=1.0)),
        ]


class TestApplication:
    def test_certain_flip(self):
        state, record = apply_channel(PureState.basis([P3], [0]), P3, BitFlip(p=1.0))
        assert state.amplitude([1]) == 1
        assert record.flipped_labels() == ["particle3"]

    def test_double_flip_cancels(self):
        model = ErrorSequence(members=[BitFlip(p=1.0), BitFlip(p=1.0)])
        state, record = apply_channel(PureState.basis([P3], [0]), P3, model)
        assert state.amplitude([0]) == 1
        assert record.flip_count() == 0

    def test_rotation_is_recorded(self):
        _, record = apply_channel(
            PureState.basis([P3], [0]), P3, CoherentRotation(theta=0.25)
        )
        assert record.events[0].angle == pytest.approx(0.25)
        assert not record.events[0].flipped

    def test_phase_flip(self):
        state, record = apply_channel(ghz_state([P3, P4]), P3, PhaseFlip(pz=1.0))
        assert state.amplitude([1, 1]) == pytest.approx(-1 / math.sqrt(2))
        assert record.events[0].phase_flipped

    def test_stochastic_model_needs_rng(self):
        with pytest.raises(ChannelError, match="stochastic"):
            apply_channel(PureState.basis([P3], [0]), P3, BitFlip(p=0.5))

    def test_unknown_target(self):
        with pytest.raises(Exception, match="not part of the state"):
            apply_channel(PureState.basis([P3], [0]), P4, NO_ERROR)

    def test_one_event_per_photon(self, rng):
        _, record = apply_channels(
            ghz_state([P3, P4]), [(P3, BitFlip(p=0.5)), (P4, NO_ERROR)], rng
        )
        assert [event.label for event in record.events] == ["particle3", "particle4"]

    @pytest.mark.parametrize("p", [0.1, 0.3])
    def test_flip_frequency(self, p, rng):
        samples = 20000
        flips = sum(
            apply_channel(PureState.basis([P3], [0]), P3, BitFlip(p=p), rng)[1].flip_count()
            for _ in range(samples)
        )
        sigma = math.sqrt(p * (1 - p) * samples)
        assert abs(flips - p * samples) < 4 * sigma

    @given(st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False))
    def test_rotation_is_undone_by_the_opposite_angle(self, theta):
        state = ghz_state([P3, P4])
        rotated, _ = apply_channel(state, P3, CoherentRotation(theta=theta))
        restored, record = apply_channel(rotated, P3, CoherentRotation(theta=-theta))
        np.testing.assert_allclose(restored.amplitudes, state.amplitudes, atol=1e-12)
        assert record.events[0].angle == -theta

    def test_records_are_merged_in_channel_order(self):
        _, record = apply_channels(
            ghz_state([P3, P4]), [(P4, BitFlip(p=1.0)), (P3, CoherentRotation(theta=0.2))]
        )
        assert [event.label for event in record.events] == ["particle4", "particle3"]
        assert record.flipped_labels() == ["particle4"]
        assert record.events[1].angle == 0.2


class TestRandomSource:
    def test_substreams_are_reproducible(self):
        source = RandomSource(master_seed=7)
        np.testing.assert_array_equal(
            source.substream(3).random(5), RandomSource(master_seed=7).substream(3).random(5)
        )

    def test_substreams_differ(self):
        source = RandomSource(master_seed=7)
        assert source.substream(0).random() != source.substream(1).random()
        assert source.substream(0).random() != RandomSource(master_seed=8).substream(0).random()

    def test_seed_must_fit_64_bits(self):
        with pytest.raises(Exception):
            RandomSource(master_seed=2**64)
