from .readout import (NotSeparable, SampleResult, ZeroReference, decode_value, distribution,
                      format_value, marginal_amplitude, register_values, relative_phases, sample)
from .statevector import (BACKENDS, DEFAULT_MAX_QUBITS, RELEASE_TOLERANCE, AncillaLeak, DenseBackend,
                          NonZeroRelease, ReleaseRecord, RunResult, SimulationError, SparseBackend,
                          StateVector, WidthExceeded, run)

__all__ = [
    "AncillaLeak", "BACKENDS", "DEFAULT_MAX_QUBITS", "DenseBackend", "NonZeroRelease", "NotSeparable",
    "RELEASE_TOLERANCE", "ReleaseRecord", "RunResult", "SampleResult", "SimulationError",
    "SparseBackend", "StateVector", "WidthExceeded", "ZeroReference", "decode_value", "distribution",
    "format_value", "marginal_amplitude", "register_values", "relative_phases", "run", "sample",
]
