"""
Dense pure-state vectors over labeled qubits.

Amplitudes are stored big-endian: the first label is the most significant bit
of the basis index, so ``|q0 q1 ... q(n-1)>`` maps to index ``q0·2^(n-1) + ...``.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from rejectq.core.errors import StateError
from rejectq.core.statevec.gates import STANDARD, unitarity_deviation

MAX_QUBITS = 5
DEFAULT_ATOL = 1e-10
IDENTITY_ATOL = 1e-12


class QubitLabel(str, Enum):
    """Protocol roles a qubit can play. The tensor position is held by PureState."""

    PARTICLE1 = "particle1"
    PARTICLE2 = "particle2"
    PARTICLE3 = "particle3"
    PARTICLE4 = "particle4"
    ANCILLA_1 = "ancilla_1"
    ANCILLA_2 = "ancilla_2"
    ARM_A = "arm_a"
    ARM_B = "arm_b"
    # Two-sided distribution: one parity check per side.
    PARTICLE3_LEFT = "particle3L"
    PARTICLE4_LEFT = "particle4L"
    PARTICLE3_RIGHT = "particle3R"
    PARTICLE4_RIGHT = "particle4R"
    ARM_A_LEFT = "arm_aL"
    ARM_B_LEFT = "arm_bL"
    ARM_A_RIGHT = "arm_aR"
    ARM_B_RIGHT = "arm_bR"

    def __str__(self) -> str:
        """Return the enum value instead of the full enum representation."""
        return self.value


LabelLike = Union[QubitLabel, str]


def as_label(label: LabelLike) -> QubitLabel:
    """Coerce a string or enum member into a QubitLabel."""
    if isinstance(label, QubitLabel):
        return label
    try:
        return QubitLabel(label)
    except ValueError:
        raise StateError(f"Unknown qubit label: {label!r}") from None


class PureState:
    """Normalized state vector over an ordered list of unique qubit labels.

    Instances are immutable: every operation in this package returns a new
    PureState and the amplitude buffer is read-only.
    """

    __slots__ = ("_labels", "_amplitudes")

    def __init__(
        self,
        labels: Sequence[LabelLike],
        amplitudes: Iterable[complex],
        atol: float = DEFAULT_ATOL,
    ) -> None:
        qubits = tuple(as_label(label) for label in labels)
        if len(set(qubits)) != len(qubits):
            raise StateError(f"Duplicate qubit labels in {[str(q) for q in qubits]}")
        if len(qubits) > MAX_QUBITS:
            raise StateError(
                f"{len(qubits)} qubits requested; at most {MAX_QUBITS} are supported"
            )

        if not isinstance(amplitudes, np.ndarray):
            amplitudes = list(amplitudes)
        vector = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if vector.size != 2 ** len(qubits):
            raise StateError(
                f"Expected {2 ** len(qubits)} amplitudes for {len(qubits)} qubits, "
                f"got {vector.size}"
            )
        if not np.all(np.isfinite(vector)):
            raise StateError("Amplitudes must be finite")
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > atol:
            raise StateError(f"State is not normalized: norm is {norm:.12g}")

        vector.flags.writeable = False
        self._labels = qubits
        self._amplitudes = vector

    @classmethod
    def _trusted(
        cls, labels: Sequence[QubitLabel], amplitudes: np.ndarray
    ) -> PureState:
        """Wrap amplitudes produced by a norm-preserving operation without revalidating."""
        state = object.__new__(cls)
        vector = np.ascontiguousarray(amplitudes, dtype=np.complex128).reshape(-1)
        vector.flags.writeable = False
        state._labels = tuple(labels)
        state._amplitudes = vector
        return state

    @classmethod
    def basis(cls, labels: Sequence[LabelLike], bits: Sequence[int]) -> PureState:
        """Computational basis state ``|bits>`` on the given labels."""
        if len(bits) != len(labels):
            raise StateError(f"Got {len(bits)} bits for {len(labels)} labels")
        index = 0
        for bit in bits:
            if bit not in (0, 1):
                raise StateError(f"Basis bits must be 0 or 1, got {bit!r}")
            index = (index << 1) | bit
        vector = np.zeros(2 ** len(labels), dtype=np.complex128)
        vector[index] = 1.0
        return cls(labels, vector)

    @classmethod
    def from_amplitudes(
        cls,
        labels: Sequence[LabelLike],
        amplitudes: Iterable[complex],
        normalize: bool = False,
    ) -> PureState:
        """Build a state, optionally rescaling the amplitudes to unit norm."""
        vector = np.array(list(amplitudes), dtype=np.complex128)
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0:
                raise StateError("Cannot normalize the zero vector")
            vector = vector / norm
        return cls(labels, vector)

    @property
    def labels(self) -> tuple[QubitLabel, ...]:
        return self._labels

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def num_qubits(self) -> int:
        return len(self._labels)

    def index(self, label: LabelLike) -> int:
        """Tensor position of a label."""
        qubit = as_label(label)
        try:
            return self._labels.index(qubit)
        except ValueError:
            raise StateError(
                f"Qubit {qubit} is not part of the state {[str(q) for q in self._labels]}"
            ) from None

    def tensor_view(self) -> np.ndarray:
        """Amplitudes reshaped to one axis of length 2 per qubit."""
        return self._amplitudes.reshape([2] * self.num_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self._amplitudes))

    def amplitude(self, bits: Sequence[int]) -> complex:
        """Amplitude of the computational basis state ``|bits>``."""
        return complex(self.tensor_view()[tuple(bits)])

    def allclose(
        self, other: PureState, atol: float = IDENTITY_ATOL, up_to_phase: bool = False
    ) -> bool:
        """Amplitude-wise comparison after aligning label order."""
        if set(self._labels) != set(other.labels):
            return False
        aligned = permute(other, self._labels).amplitudes
        if up_to_phase:
            overlap = np.vdot(aligned, self._amplitudes)
            if abs(overlap) > 0:
                aligned = aligned * (overlap / abs(overlap))
        return bool(np.allclose(self._amplitudes, aligned, rtol=0.0, atol=atol))

    def ket(self, precision: int = 4) -> str:
        """Human-readable Dirac notation, skipping negligible terms."""
        n = self.num_qubits
        terms = []
        for index, amp in enumerate(self._amplitudes):
            if abs(amp) < 10 ** (-precision):
                continue
            bits = format(index, f"0{n}b") if n else ""
            value = complex(round(amp.real, precision), round(amp.imag, precision))
            coefficient = f"{value.real:g}" if value.imag == 0 else f"({value:g})"
            terms.append(f"{coefficient}|{bits}>")
        return " + ".join(terms) or "0"

    def __repr__(self) -> str:
        labels = ",".join(str(label) for label in self._labels)
        return f"PureState[{labels}]({self.ket()})"


def apply_single(
    state: PureState, target: LabelLike, gate: np.ndarray, atol: float = DEFAULT_ATOL
) -> PureState:
    """Apply a 2×2 unitary to one qubit.

    Raises:
        StateError: if the label is missing or the gate deviates from unitarity
            by more than ``atol``.
    """
    matrix = np.asarray(gate, dtype=np.complex128)
    known = any(matrix is standard for standard in STANDARD)
    deviation = 0.0 if known else unitarity_deviation(matrix)
    if deviation > atol:
        raise StateError(
            f"Gate is not unitary: max |U†U - I| = {deviation:.3e} exceeds {atol:.0e}"
        )
    axis = state.index(target)
    updated = np.tensordot(matrix, state.tensor_view(), axes=([1], [axis]))
    updated = np.moveaxis(updated, 0, axis)
    return PureState._trusted(state.labels, updated)


def apply_cnot(state: PureState, control: LabelLike, target: LabelLike) -> PureState:
    """Flip ``target`` on every basis term where ``control`` is 1."""
    c_axis, t_axis = state.index(control), state.index(target)
    if c_axis == t_axis:
        raise StateError(f"CNOT control and target coincide ({as_label(control)})")

    psi = state.tensor_view()
    updated = psi.copy()
    n = state.num_qubits

    def where(c_bit: int, t_bit: int) -> tuple:
        selector: list = [slice(None)] * n
        selector[c_axis], selector[t_axis] = c_bit, t_bit
        return tuple(selector)

    updated[where(1, 0)] = psi[where(1, 1)]
    updated[where(1, 1)] = psi[where(1, 0)]
    return PureState._trusted(state.labels, updated)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product ``a ⊗ b``; labels of ``a`` come first."""
    collision = set(a.labels) & set(b.labels)
    if collision:
        raise StateError(f"Label collision in tensor product: {sorted(map(str, collision))}")
    if a.num_qubits + b.num_qubits > MAX_QUBITS:
        raise StateError(f"Tensor product would exceed {MAX_QUBITS} qubits")
    return PureState._trusted(a.labels + b.labels, np.kron(a.amplitudes, b.amplitudes))


def permute(state: PureState, order: Sequence[LabelLike]) -> PureState:
    """Reorder the tensor factors so the labels appear in ``order``."""
    new_order = tuple(as_label(label) for label in order)
    if sorted(new_order) != sorted(state.labels) or len(new_order) != state.num_qubits:
        raise StateError(
            f"{[str(q) for q in new_order]} is not a permutation of "
            f"{[str(q) for q in state.labels]}"
        )
    if new_order == state.labels:
        return state
    axes = [state.index(label) for label in new_order]
    return PureState._trusted(new_order, np.transpose(state.tensor_view(), axes))


def relabel(state: PureState, mapping: Mapping[LabelLike, LabelLike]) -> PureState:
    """Rename qubits in place of their tensor position."""
    renames = {as_label(old): as_label(new) for old, new in mapping.items()}
    for old in renames:
        state.index(old)
    labels = [renames.get(label, label) for label in state.labels]
    if len(set(labels)) != len(labels):
        raise StateError(f"Relabeling produces duplicate labels: {[str(q) for q in labels]}")
    return PureState._trusted(labels, state.amplitudes)


def qubit(alpha: complex, beta: complex, label: LabelLike = QubitLabel.PARTICLE1) -> PureState:
    """Single-qubit state alpha|0> + beta|1>; the pair must already be normalized."""
    return PureState([label], [alpha, beta])


def qubit_from_bloch(
    theta: float, phi: float, label: LabelLike = QubitLabel.PARTICLE1
) -> PureState:
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return PureState(
        [label],
        [math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)],
    )


def random_qubit(
    rng: np.random.Generator, label: LabelLike = QubitLabel.PARTICLE1
) -> PureState:
    """Haar-random qubit: cos(theta) uniform on [-1, 1], phi uniform on [0, 2pi)."""
    cos_theta = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2 * math.pi)
    return qubit_from_bloch(math.acos(cos_theta), phi, label)


def bell_state(index: int, labels: Sequence[LabelLike]) -> PureState:
    """Bell state in the fixed order 0:Φ+, 1:Φ−, 2:Ψ+, 3:Ψ−."""
    if index not in range(4):
        raise StateError(f"Bell index must be 0..3, got {index!r}")
    if len(labels) != 2:
        raise StateError("A Bell state needs exactly two labels")
    from rejectq.core.statevec.measurement import BELL_BASIS

    return PureState(labels, BELL_BASIS[index])


def ghz_state(labels: Sequence[LabelLike], sign: int = 1) -> PureState:
    """(|0...0> ± |1...1>)/√2 on the given labels."""
    vector = np.zeros(2 ** len(labels), dtype=np.complex128)
    vector[0] = 1 / math.sqrt(2)
    vector[-1] = sign / math.sqrt(2)
    return PureState(labels, vector)
