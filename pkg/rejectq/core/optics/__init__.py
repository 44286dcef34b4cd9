"""Dual-rail model of the polarizing beam splitter used as the parity-check oracle."""

from rejectq.core.optics.fock import (
    OUTPUT_MODES,
    Arm,
    CoincidenceResult,
    FockState,
    ModeLabel,
    Polarization,
    coincidence_project,
    pbs_transform,
)

__all__ = [
    "OUTPUT_MODES",
    "Arm",
    "CoincidenceResult",
    "FockState",
    "ModeLabel",
    "Polarization",
    "coincidence_project",
    "pbs_transform",
]
