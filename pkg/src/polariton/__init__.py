"""Steady-state spectroscopy of a driven transmon-resonator system.

The package models a multilevel transmon coupled to a readout resonator
in the non-dispersive regime, driven by a strong coupler tone and read
out by a weak probe.  It provides rotating-frame Hamiltonians, driven
eigenmode analysis with polariton branch labels, time-periodic Lindblad
steady states via matrix continued fractions, direct time integration
for cross-checks, and closed-form dispersive and perturbative results
with crossing criteria.
"""

__version__ = "0.1.0"

from .errors import (
    AmbiguousTracking,
    AnchorAmbiguous,
    ConfigError,
    DegenerateDetuning,
    DegenerateSteadyState,
    DimensionMismatch,
    DispersiveValidityWarning,
    FlatGrid,
    NoConvergence,
    NoCrossing,
    NonHermitianInput,
    PolaritonError,
    SingularLadderMatrix,
    StepTooLarge,
    SweepFailed,
)
from .model import (
    GHZ_TO_ANGULAR,
    MHZ_TO_ANGULAR,
    DeviceParams,
    DerivedParams,
    DriveTone,
    ProbeTone,
    derive_params,
    power_from_rabi,
    rabi_from_power,
    reference_device,
)
from .hilbert import (
    HilbertSpec,
    annihilation,
    embed,
    number,
    resonator_lowering,
    transmon_lowering,
    transmon_projector,
)
from .hamiltonian import (
    PeriodicHamiltonian,
    RotatingFrameHamiltonian,
    build_coupler_frame,
    build_lab_jc,
    build_multilevel_dispersive,
    build_two_tone,
)
from .eigenmode import (
    EigenSolution,
    TransitionRow,
    diagonalize,
    dressed_frequencies,
    polariton_labels,
    track_branches,
    transition_table,
)
from .steadystate import (
    LiouvillianTriple,
    SteadyState,
    build_liouvillian,
    dissipator,
    solve_mcf,
    solve_static,
    spost,
    spre,
    time_integrate,
    unvec,
    vec,
)
from .analytic import (
    CrossingEstimate,
    DispersivePolaritonSet,
    PerturbedLevels,
    dispersive_dressed_states,
    dispersive_transitions,
    driven_cavity_photon,
    find_crossing,
    perturbed_transitions,
    resolvability_threshold,
)
from .spectroscopy import (
    DispersiveComparison,
    SpectrumGrid,
    SweepResult,
    SweepSpec,
    count_resolved_lines,
    default_power_sweep,
    detuned_twin,
    dispersive_compare,
    find_spectral_peaks,
    run_sweep,
)

__all__ = [
    "__version__",
    "AmbiguousTracking",
    "AnchorAmbiguous",
    "ConfigError",
    "CrossingEstimate",
    "DegenerateDetuning",
    "DegenerateSteadyState",
    "DerivedParams",
    "DeviceParams",
    "DimensionMismatch",
    "DispersiveComparison",
    "DispersivePolaritonSet",
    "DispersiveValidityWarning",
    "DriveTone",
    "EigenSolution",
    "FlatGrid",
    "GHZ_TO_ANGULAR",
    "HilbertSpec",
    "LiouvillianTriple",
    "MHZ_TO_ANGULAR",
    "NoConvergence",
    "NoCrossing",
    "NonHermitianInput",
    "PeriodicHamiltonian",
    "PerturbedLevels",
    "PolaritonError",
    "ProbeTone",
    "RotatingFrameHamiltonian",
    "SingularLadderMatrix",
    "SpectrumGrid",
    "SteadyState",
    "StepTooLarge",
    "SweepFailed",
    "SweepResult",
    "SweepSpec",
    "TransitionRow",
    "annihilation",
    "build_coupler_frame",
    "build_lab_jc",
    "build_liouvillian",
    "build_multilevel_dispersive",
    "build_two_tone",
    "count_resolved_lines",
    "default_power_sweep",
    "derive_params",
    "detuned_twin",
    "diagonalize",
    "dispersive_compare",
    "dispersive_dressed_states",
    "dispersive_transitions",
    "dissipator",
    "dressed_frequencies",
    "driven_cavity_photon",
    "embed",
    "find_crossing",
    "find_spectral_peaks",
    "number",
    "perturbed_transitions",
    "polariton_labels",
    "power_from_rabi",
    "rabi_from_power",
    "reference_device",
    "resolvability_threshold",
    "resonator_lowering",
    "run_sweep",
    "solve_mcf",
    "solve_static",
    "spost",
    "spre",
    "time_integrate",
    "track_branches",
    "transition_table",
    "transmon_lowering",
    "transmon_projector",
    "unvec",
    "vec",
]
