"""
Occupation-number model of a polarizing beam splitter followed by coincidence
detection.

Photons are tracked only by how many occupy each (arm, polarization) mode, so
identical photons need no symmetrization. The routing is deterministic per
polarization: H is transmitted (in1 -> out_a, in2 -> out_b) and V is reflected
(in1 -> out_b, in2 -> out_a), all with amplitude +1.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from rejectq.core.errors import PhotonNumberError, StateError
from rejectq.core.statevec.state import (
    DEFAULT_ATOL,
    LabelLike,
    PureState,
    QubitLabel,
)

ACCEPT_THRESHOLD = 1e-12

Occupation = Tuple[int, ...]


class Arm(str, Enum):
    IN1 = "in1"
    IN2 = "in2"
    OUT_A = "out_a"
    OUT_B = "out_b"

    def __str__(self) -> str:
        return self.value


class Polarization(str, Enum):
    """H encodes |0>, V encodes |1>."""

    H = "H"
    V = "V"

    def __str__(self) -> str:
        return self.value

    @property
    def bit(self) -> int:
        return 0 if self is Polarization.H else 1

    @classmethod
    def from_bit(cls, bit: int) -> Polarization:
        return cls.H if bit == 0 else cls.V


class ModeLabel(BaseModel):
    """One optical mode: an arm and a polarization."""

    model_config = ConfigDict(frozen=True)

    arm: Arm
    polarization: Polarization

    def __str__(self) -> str:
        return f"{self.arm}:{self.polarization}"


OUTPUT_MODES: Tuple[ModeLabel, ...] = tuple(
    ModeLabel(arm=arm, polarization=pol)
    for arm in (Arm.OUT_A, Arm.OUT_B)
    for pol in (Polarization.H, Polarization.V)
)

PBS_ROUTING: Dict[Tuple[Arm, Polarization], ModeLabel] = {
    (Arm.IN1, Polarization.H): ModeLabel(arm=Arm.OUT_A, polarization=Polarization.H),
    (Arm.IN1, Polarization.V): ModeLabel(arm=Arm.OUT_B, polarization=Polarization.V),
    (Arm.IN2, Polarization.H): ModeLabel(arm=Arm.OUT_B, polarization=Polarization.H),
    (Arm.IN2, Polarization.V): ModeLabel(arm=Arm.OUT_A, polarization=Polarization.V),
}


class FockState:
    """Superposition of photon-occupation configurations over a fixed mode list."""

    __slots__ = ("modes", "terms")

    def __init__(
        self,
        modes: Tuple[ModeLabel, ...],
        terms: Dict[Occupation, complex],
        atol: float = DEFAULT_ATOL,
    ) -> None:
        if len(set(modes)) != len(modes):
            raise StateError("Duplicate modes in Fock state")
        photon_numbers = {sum(config) for config in terms}
        if len(photon_numbers) > 1:
            raise PhotonNumberError(
                f"Terms mix photon numbers {sorted(photon_numbers)}"
            )
        for config in terms:
            if len(config) != len(modes) or any(n < 0 for n in config):
                raise StateError(f"Malformed occupation {config} for {len(modes)} modes")
        weight = math.fsum(abs(amp) ** 2 for amp in terms.values())
        if abs(weight - 1.0) > atol:
            raise StateError(f"Fock state is not normalized: squared norm {weight:.12g}")
        self.modes = modes
        self.terms = dict(terms)

    def photon_number(self) -> int:
        return sum(next(iter(self.terms))) if self.terms else 0

    def probability(self, config: Occupation) -> float:
        return abs(self.terms.get(tuple(config), 0.0)) ** 2

    def arm_occupation(self, config: Occupation, arm: Arm) -> int:
        """Photons found in one arm for a given configuration."""
        return sum(n for n, mode in zip(config, self.modes) if mode.arm == arm)

    def describe(self, config: Occupation) -> str:
        return " ".join(
            f"{mode}={n}" for n, mode in zip(config, self.modes) if n
        )

    def __repr__(self) -> str:
        parts = [f"{amp:.4g}·[{self.describe(cfg)}]" for cfg, amp in self.terms.items()]
        return f"FockState({' + '.join(parts)})"


class CoincidenceResult(NamedTuple):
    accepted: bool
    accept_probability: float
    conditional: Optional[PureState]


def pbs_transform(state: PureState) -> FockState:
    """Route a two-photon polarization state through the PBS.

    The first label of ``state`` is the photon entering in1, the second the
    photon entering in2.
    """
    if state.num_qubits != 2:
        raise StateError(
            f"PBS input must be a two-photon polarization state, got {state.num_qubits} qubits"
        )
    mode_index = {mode: i for i, mode in enumerate(OUTPUT_MODES)}
    terms: Dict[Occupation, complex] = {}
    for index, amplitude in enumerate(state.amplitudes):
        if amplitude == 0:
            continue
        pol1 = Polarization.from_bit(index >> 1)
        pol2 = Polarization.from_bit(index & 1)
        counts = [0] * len(OUTPUT_MODES)
        counts[mode_index[PBS_ROUTING[(Arm.IN1, pol1)]]] += 1
        counts[mode_index[PBS_ROUTING[(Arm.IN2, pol2)]]] += 1
        config = tuple(counts)
        terms[config] = terms.get(config, 0j) + complex(amplitude)
    return FockState(OUTPUT_MODES, terms)


def coincidence_project(
    fock: FockState,
    arm_a: LabelLike = QubitLabel.ARM_A,
    arm_b: LabelLike = QubitLabel.ARM_B,
) -> CoincidenceResult:
    """Keep configurations with exactly one photon in each output arm.

    Returns the probability of a coincidence and, when it exceeds 1e-12, the
    renormalized polarization state of the two detected photons as qubits
    ``(arm_a, arm_b)``. Otherwise the result carries the reject verdict.
    """
    if fock.photon_number() != 2:
        raise PhotonNumberError(
            f"Coincidence detection needs two photons, got {fock.photon_number()}"
        )
    vector = np.zeros(4, dtype=np.complex128)
    for config, amplitude in fock.terms.items():
        if fock.arm_occupation(config, Arm.OUT_A) != 1:
            continue
        if fock.arm_occupation(config, Arm.OUT_B) != 1:
            continue
        bits = {}
        for n, mode in zip(config, fock.modes):
            if n:
                bits[mode.arm] = mode.polarization.bit
        vector[2 * bits[Arm.OUT_A] + bits[Arm.OUT_B]] += amplitude

    accept_probability = float(np.sum(np.abs(vector) ** 2))
    if accept_probability < ACCEPT_THRESHOLD:
        return CoincidenceResult(False, accept_probability, None)
    conditional = PureState([arm_a, arm_b], vector / math.sqrt(accept_probability))
    return CoincidenceResult(True, accept_probability, conditional)
