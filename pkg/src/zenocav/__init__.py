"""Quantum Zeno dynamics of a photon shared by two lossy cavities.

A single microwave photon in cavity A coherently leaks into cavity B
at rate g.  Two-level atoms crossing B act as repeated meters: each
atom picks up whatever excitation reached B (via a resonant pulse) and
is then read out by state-selective detectors.  Frequent interrogation
freezes the photon in A; inefficient or missing detectors, and cavity
decay at rate k, degrade that freezing in different, exactly solvable
ways.

The package computes the click statistics three independent ways that
must agree: closed-form expressions, step-wise density-matrix
propagation, and Monte Carlo sampling of individual click records.  A
fixed-step RK4 integrator for the underlying master equations serves
as the numerical cross-check for every closed form.
"""
from .core import (
    BasisState,
    DensityMatrix,
    StateValidationError,
    SystemParams,
    ValidationReport,
    new_pure,
    population,
    require_valid,
    validate,
)
from .detection import (
    DetectorMode,
    DetectorSetup,
    MeasurementOutcome,
    OutcomeLabel,
    measure,
    trace_out_atom,
)
from .dynamics import (
    ExchangeAmplitudes,
    LossyAmplitudes,
    evolve_coupled_lossy,
    evolve_coupled_unitary,
    exchange_amplitudes,
    lossy_amplitudes,
    pi_pulse_ideal,
    pi_pulse_ideal_mode_a,
    pi_pulse_lossy,
    tau_pi,
)
from .lindblad import (
    GeneratorSpec,
    IntegrationError,
    coupled_cavities_generator,
    default_step,
    integrate,
    jaynes_cummings_generator,
)
from .montecarlo import (
    FinalLabel,
    McEstimate,
    SeededSampler,
    Trajectory,
    estimate,
    sample_trajectory,
)
from .protocols import (
    Conditioning,
    CurvePoint,
    CurveSeries,
    CurveSource,
    ProtocolKind,
    ProtocolRun,
    StepRecord,
    canonical_conditioning,
    closed_form_probability,
    prob_clicks_dg,
    prob_de_click_lossy,
    prob_noclicks_de,
    prob_survival_no_measurement,
    run_protocol,
    sweep_curve,
)

__version__ = "0.1.0"

__all__ = [
    "BasisState",
    "Conditioning",
    "CurvePoint",
    "CurveSeries",
    "CurveSource",
    "DensityMatrix",
    "DetectorMode",
    "DetectorSetup",
    "ExchangeAmplitudes",
    "FinalLabel",
    "GeneratorSpec",
    "IntegrationError",
    "LossyAmplitudes",
    "McEstimate",
    "MeasurementOutcome",
    "OutcomeLabel",
    "ProtocolKind",
    "ProtocolRun",
    "SeededSampler",
    "StateValidationError",
    "StepRecord",
    "SystemParams",
    "Trajectory",
    "ValidationReport",
    "canonical_conditioning",
    "closed_form_probability",
    "coupled_cavities_generator",
    "default_step",
    "estimate",
    "evolve_coupled_lossy",
    "evolve_coupled_unitary",
    "exchange_amplitudes",
    "integrate",
    "jaynes_cummings_generator",
    "lossy_amplitudes",
    "measure",
    "new_pure",
    "pi_pulse_ideal",
    "pi_pulse_ideal_mode_a",
    "pi_pulse_lossy",
    "population",
    "prob_clicks_dg",
    "prob_de_click_lossy",
    "prob_noclicks_de",
    "prob_survival_no_measurement",
    "require_valid",
    "run_protocol",
    "sample_trajectory",
    "sweep_curve",
    "tau_pi",
    "trace_out_atom",
    "validate",
    "__version__",
]
