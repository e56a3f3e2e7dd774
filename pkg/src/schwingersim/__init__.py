"""Classical simulation and gate-protocol compilation for the encoded
lattice Schwinger model: exact, Trotterized, and dephasing-noise dynamics of
particle-antiparticle creation on a staggered spin chain."""

from .compiler import TrotterSchedule, compile_step, section_z_angles, step_target, trotter_evolve
from .engine import (
    DephasingModel,
    ExactPropagator,
    apply_dephasing,
    evolve_exact,
    evolve_exact_density,
    partial_transpose,
    postselect,
    postselect_pure,
    sample_shots,
    to_density,
)
from .errors import (
    ParameterError,
    PulseSyntaxError,
    StructureError,
    UnboundSymbolError,
    ZeroSupportError,
)
from .gates import (
    AddressedZ,
    Circuit,
    CollectiveRotation,
    EntanglingMS,
    Hide,
    Unhide,
    apply_circuit,
    circuit_unitary,
    validate_circuit,
)
from .model import (
    BasisState,
    CouplingMatrix,
    ModelParams,
    build_spin_hamiltonian,
    build_split_hamiltonians,
    coupling_matrix,
    gauss_fields,
    hz_coefficients,
    physical_projector,
    vacuum_index,
    vacuum_state,
)
from .observables import (
    CSV_COLUMNS,
    ObservableRecord,
    dominant_frequency,
    negativities,
    negativities_pure,
    particle_number_density,
    rate_function,
    time_series,
    vacuum_persistence,
)
from .pulses import (
    PulseProgram,
    emit_pulse_program,
    evaluate_angle,
    format_pulse_program,
    parse_pulse_program,
    pulses_to_circuit,
)

__version__ = "0.1.0"

__all__ = [
    "AddressedZ",
    "BasisState",
    "CSV_COLUMNS",
    "Circuit",
    "CollectiveRotation",
    "CouplingMatrix",
    "DephasingModel",
    "EntanglingMS",
    "ExactPropagator",
    "Hide",
    "ModelParams",
    "ObservableRecord",
    "ParameterError",
    "PulseProgram",
    "PulseSyntaxError",
    "StructureError",
    "TrotterSchedule",
    "Unhide",
    "UnboundSymbolError",
    "ZeroSupportError",
    "apply_circuit",
    "apply_dephasing",
    "build_spin_hamiltonian",
    "build_split_hamiltonians",
    "circuit_unitary",
    "compile_step",
    "coupling_matrix",
    "dominant_frequency",
    "emit_pulse_program",
    "evaluate_angle",
    "evolve_exact",
    "evolve_exact_density",
    "format_pulse_program",
    "gauss_fields",
    "hz_coefficients",
    "negativities",
    "negativities_pure",
    "parse_pulse_program",
    "partial_transpose",
    "particle_number_density",
    "physical_projector",
    "postselect",
    "postselect_pure",
    "pulses_to_circuit",
    "rate_function",
    "sample_shots",
    "section_z_angles",
    "step_target",
    "time_series",
    "to_density",
    "trotter_evolve",
    "vacuum_index",
    "vacuum_persistence",
    "vacuum_state",
    "validate_circuit",
]
