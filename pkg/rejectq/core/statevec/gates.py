"""
Single-qubit gate matrices and unitarity checks.
"""

from __future__ import annotations

import math

import numpy as np

_SQRT2_INV = 1 / math.sqrt(2)


def _frozen(matrix: list[list[complex]]) -> np.ndarray:
    array = np.array(matrix, dtype=np.complex128)
    array.flags.writeable = False
    return array


I = _frozen([[1, 0], [0, 1]])  # noqa: E741
X = _frozen([[0, 1], [1, 0]])
Y = _frozen([[0, -1j], [1j, 0]])
Z = _frozen([[1, 0], [0, -1]])
H = _frozen([[_SQRT2_INV, _SQRT2_INV], [_SQRT2_INV, -_SQRT2_INV]])
XZ = _frozen((X @ Z).tolist())

# Fixed unitaries; apply_single skips the unitarity check for these.
STANDARD = (I, X, Y, Z, H, XZ)


def rotation_x(theta: float) -> np.ndarray:
    """Coherent bit-flip rotation cos(theta)·I + i·sin(theta)·X.

    At theta = pi/2 this is i·X, a full flip up to a global phase.
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


def dagger(gate: np.ndarray) -> np.ndarray:
    """Return the conjugate transpose of a gate."""
    return np.conjugate(np.asarray(gate, dtype=np.complex128)).T


def unitarity_deviation(gate: np.ndarray) -> float:
    """Largest entry of |U†U − I|, the distance from unitarity used in diagnostics."""
    matrix = np.asarray(gate, dtype=np.complex128)
    if matrix.shape != (2, 2):
        return math.inf
    return float(np.max(np.abs(dagger(matrix) @ matrix - np.eye(2))))
