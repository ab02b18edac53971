"""Qudit GHZ-state sorting: simulation, decoding, and exhaustive verification.

Builds hyperentangled N-photon, d-level GHZ states over a spatial and an
OAM register, runs the two-stage sorting pipeline (per-photon path
control, then the d-level QFT on the spatial register), and verifies that
the parity and phase decoders recover every one of the d**N labels with
certainty.
"""

from .catalog import (
    GhzLabel,
    all_labels,
    ghz_register,
    ghz_spatial,
    hyper_initial,
    oam_auxiliary,
    oam_register,
)
from .gates import (
    QftMatrix,
    apply_path_control_all,
    apply_qft_spatial_all,
    path_control,
    qft_matrix,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .protocol import (
    MeasurementRecord,
    Outcome,
    OutcomeDistribution,
    decode_parity,
    decode_phase,
    measure_register,
    run_protocol,
    sample_records,
    sample_register,
)
from .state import (
    CapExceededError,
    DegenerateStateError,
    RegisterState,
    StateVector,
    SystemShape,
    basis_state,
    convert_representation,
    factor_across_registers,
    fidelity,
    from_register_factors,
    inner_product,
    superpose,
)
from .verify import (
    DEFAULT_GRID,
    VerificationReport,
    brute_force_oracle,
    parity_detection_table,
    phase_detection_table,
    verify_grid,
    verify_shape,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "DEFAULT_GRID",
    "DegenerateStateError",
    "GhzLabel",
    "KERNEL_BACKEND",
    "MeasurementRecord",
    "Outcome",
    "OutcomeDistribution",
    "QftMatrix",
    "RegisterState",
    "StateVector",
    "SystemShape",
    "VerificationReport",
    "all_labels",
    "apply_path_control_all",
    "apply_qft_spatial_all",
    "basis_state",
    "brute_force_oracle",
    "convert_representation",
    "decode_parity",
    "decode_phase",
    "factor_across_registers",
    "fidelity",
    "from_register_factors",
    "ghz_register",
    "ghz_spatial",
    "hyper_initial",
    "inner_product",
    "measure_register",
    "oam_auxiliary",
    "oam_register",
    "parity_detection_table",
    "path_control",
    "phase_detection_table",
    "qft_matrix",
    "run_protocol",
    "sample_records",
    "sample_register",
    "superpose",
    "verify_grid",
    "verify_shape",
]
