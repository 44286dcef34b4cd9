"""rejectq: exact simulation of CNOT-free optical bit-flip error rejection."""
