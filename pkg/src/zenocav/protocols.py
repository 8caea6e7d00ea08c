"""Measurement protocols built from exchange intervals and probe atoms.

Every protocol starts with the photon in cavity A and splits the total
exchange budget t0 into n_atoms equal free-evolution intervals.  After
each interval a probe atom extracts the mode-B population with a pi
pulse and flies to the detectors.  Five protocol kinds cover the
regimes of interest:

  perfect-detectors      both detectors ideal; repeated g-clicks freeze
                         the photon in cavity A (the Zeno sequence)
  only-dg-inefficient    only the ground-state detector, efficiency p_g
  only-de-noclick        only the excited-state detector, efficiency
                         p_e; conditioning on seeing no click
  no-intermediate-ideal  atoms cross unmeasured (traced out); a final
                         probe atom interrogates cavity A
  no-intermediate-lossy  same, with cavity decay running during the
                         exchange intervals and the extraction pulses

Each kind has a closed-form probability for its canonical event and an
equivalent step-wise density-matrix state machine; the two routes must
agree to high accuracy, which the test suite enforces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Tuple, Union

from .core import BasisState, DensityMatrix, SystemParams, new_pure
from .detection import DetectorSetup, OutcomeLabel, measure
from .dynamics import (
    evolve_coupled_lossy,
    evolve_coupled_unitary,
    pi_pulse_ideal,
    pi_pulse_ideal_mode_a,
    pi_pulse_lossy,
    tau_pi,
)


class ProtocolKind(str, Enum):
    PERFECT_DETECTORS = "perfect-detectors"
    ONLY_DG_INEFFICIENT = "only-dg-inefficient"
    ONLY_DE_NOCLICK = "only-de-noclick"
    NO_INTERMEDIATE_IDEAL = "no-intermediate-ideal"
    NO_INTERMEDIATE_LOSSY = "no-intermediate-lossy"


_NO_INTERMEDIATE = (ProtocolKind.NO_INTERMEDIATE_IDEAL, ProtocolKind.NO_INTERMEDIATE_LOSSY)


class Conditioning(str, Enum):
    """Named outcome sequences a run can be conditioned on."""

    ALL_CLICK_G = "all-click-g"
    ALL_NO_CLICK = "all-no-click"
    FINAL_CLICK_E = "final-click-e"
    UNCONDITIONED = "unconditioned"


ConditioningLike = Union[Conditioning, Sequence[OutcomeLabel]]


def canonical_conditioning(kind: ProtocolKind) -> Conditioning:
    """The event each protocol kind is designed to study."""
    if kind in (ProtocolKind.PERFECT_DETECTORS, ProtocolKind.ONLY_DG_INEFFICIENT):
        return Conditioning.ALL_CLICK_G
    if kind == ProtocolKind.ONLY_DE_NOCLICK:
        return Conditioning.ALL_NO_CLICK
    return Conditioning.FINAL_CLICK_E


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def _check_closed_form_args(n: int, g: float, t0: float) -> float:
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"atom count must be an integer >= 1, got {n}")
    if g <= 0.0 or t0 <= 0.0:
        raise ValueError(f"need g > 0 and t0 > 0, got g={g}, t0={t0}")
    return g * t0 / n


def prob_clicks_dg(n: int, p_g: float, g: float, t0: float) -> float:
    """Probability that all n probe atoms fire the ground-state detector.

    Equals (cos^2(g t0 / n) * p_g)^n: each atom must both find the
    photon still in cavity A and actually trigger the detector.
    """
    angle = _check_closed_form_args(n, g, t0)
    if not 0.0 <= p_g <= 1.0:
        raise ValueError(f"efficiency p_g must lie in [0, 1], got {p_g}")
    return (math.cos(angle) ** 2 * p_g) ** n


def prob_noclicks_de(n: int, p_e: float, g: float, t0: float) -> float:
    """Probability that the excited-state detector stays silent n times.

    The survival weight telescopes with ratio c^2 = cos^2(g t0 / n);
    excitation that reaches an atom escapes detection with 1 - p_e and
    parks the field in the absorbing vacuum, silent forever after:

        (c^2)^n + (1 - p_e) (1 - (c^2)^n)

    which tends to 1 for any p_e as n grows.
    """
    angle = _check_closed_form_args(n, g, t0)
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"efficiency p_e must lie in [0, 1], got {p_e}")
    survival = math.cos(angle) ** (2 * n)
    return survival + (1.0 - p_e) * (1.0 - survival)


def prob_survival_no_measurement(n: int, g: float, t0: float) -> float:
    """Probability the photon is still in cavity A after n unmeasured atoms."""
    angle = _check_closed_form_args(n, g, t0)
    return math.cos(angle) ** (2 * n)


def prob_de_click_lossy(n: int, params: SystemParams) -> float:
    """Final-probe click probability with cavity decay, unmeasured atoms.

    Dissipation is measurement independent, so it factorizes: the decay
    envelope over the total exposure time t0 + n tau_pi multiplies the
    lossless survival probability and the detector efficiency.
    """
    survival = prob_survival_no_measurement(n, params.g, params.t0)
    exposure = params.t0 + n * tau_pi(params.omega0, params.k)
    return params.p_e * math.exp(-2.0 * params.k * exposure) * survival


def closed_form_probability(params: SystemParams, kind: ProtocolKind, n: Optional[int] = None) -> float:
    """Canonical-event probability of a protocol kind, closed form."""
    if n is None:
        n = params.n_atoms
    if kind == ProtocolKind.PERFECT_DETECTORS:
        return prob_clicks_dg(n, 1.0, params.g, params.t0)
    if kind == ProtocolKind.ONLY_DG_INEFFICIENT:
        return prob_clicks_dg(n, params.p_g, params.g, params.t0)
    if kind == ProtocolKind.ONLY_DE_NOCLICK:
        return prob_noclicks_de(n, params.p_e, params.g, params.t0)
    if kind == ProtocolKind.NO_INTERMEDIATE_IDEAL:
        # the run ends with a D_e measurement, so its efficiency scales
        # the bare survival probability
        return params.p_e * prob_survival_no_measurement(n, params.g, params.t0)
    return prob_de_click_lossy(n, params)


# --------------------------------------------------------------------------
# step-wise state machine
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    """Bookkeeping for one protocol step.

    pre_state is the state before the step's free evolution; outcome is
    the selected label, or None when the step was left unconditioned
    (non-selective mixing).  The branch probabilities of a full run
    multiply to the run probability.
    """

    step_index: int
    pre_state: DensityMatrix
    outcome: Optional[OutcomeLabel]
    branch_probability: float


@dataclass(frozen=True)
class ProtocolRun:
    """Result of one conditioned run of the state machine.

    probability is the joint probability of the conditioned outcome
    sequence.  When the sequence is impossible (some branch has exactly
    zero probability) the run stops, impossible is set, and the final
    state is a vacuum placeholder.
    """

    probability: float
    steps: Tuple[StepRecord, ...]
    final_state: DensityMatrix
    impossible: bool = False


def _intermediate_setup(params: SystemParams, kind: ProtocolKind) -> DetectorSetup:
    if kind == ProtocolKind.PERFECT_DETECTORS:
        return DetectorSetup.both_perfect()
    if kind == ProtocolKind.ONLY_DG_INEFFICIENT:
        return DetectorSetup.only_dg(params.p_g)
    if kind == ProtocolKind.ONLY_DE_NOCLICK:
        return DetectorSetup.only_de(params.p_e)
    return DetectorSetup.no_detector()


def _required_labels(
    conditioning: ConditioningLike, kind: ProtocolKind, n: int
) -> Tuple[list, Optional[OutcomeLabel]]:
    """Resolve conditioning into per-step required labels plus final-probe label.

    None entries mean non-selective (keep the full mixture).  Explicit
    label sequences are only meaningful for the measured kinds.
    """
    has_probe = kind in _NO_INTERMEDIATE
    if isinstance(conditioning, Conditioning):
        if conditioning == Conditioning.UNCONDITIONED:
            return [None] * n, None
        if conditioning == Conditioning.ALL_CLICK_G:
            return [OutcomeLabel.CLICK_G] * n, None
        if conditioning == Conditioning.ALL_NO_CLICK:
            return [OutcomeLabel.NO_CLICK] * n, (OutcomeLabel.NO_CLICK if has_probe else None)
        if not has_probe:
            raise ValueError(
                f"conditioning {conditioning.value} needs a final probe, which "
                f"kind {kind.value} does not perform"
            )
        return [OutcomeLabel.NO_CLICK] * n, OutcomeLabel.CLICK_E
    labels = [OutcomeLabel(item) for item in conditioning]
    if has_probe:
        raise ValueError(
            "explicit outcome sequences apply to the measured kinds; use the named "
            "Conditioning values for the no-intermediate kinds"
        )
    if len(labels) != n:
        raise ValueError(f"conditioning sequence has length {len(labels)}, expected {n}")
    return labels, None


def _select(outcomes, required):
    for outcome in outcomes:
        if outcome.label == required:
            return outcome
    return None


def run_protocol(
    params: SystemParams,
    kind: ProtocolKind,
    conditioning: Optional[ConditioningLike] = None,
) -> ProtocolRun:
    """Run the step-wise density-matrix state machine for one protocol.

    The run starts from |1,0;g> and performs n_atoms steps of free
    exchange over t0/n_atoms followed by a pulse and a detection event.
    The no-intermediate kinds trace out each atom and append a final
    probe (ideal pulse on cavity A, then the excited-state detector).
    Conditioning defaults to the kind's canonical event.
    """
    if conditioning is None:
        conditioning = canonical_conditioning(kind)
    n = params.n_atoms
    required, probe_required = _required_labels(conditioning, kind, n)
    setup = _intermediate_setup(params, kind)
    lossy = kind == ProtocolKind.NO_INTERMEDIATE_LOSSY
    interval = params.t0 / n

    rho = new_pure(BasisState.KET_10G)
    probability = 1.0
    records: list = []

    def fail(step_index, pre):
        records.append(StepRecord(step_index, pre, required_label, 0.0))
        return ProtocolRun(0.0, tuple(records), new_pure(BasisState.KET_00G), impossible=True)

    for i in range(1, n + 1):
        pre = rho
        if lossy:
            rho = evolve_coupled_lossy(rho, params, interval)
            rho = pi_pulse_lossy(rho, params)
        else:
            rho = evolve_coupled_unitary(rho, params, interval)
            rho = pi_pulse_ideal(rho)
        outcomes = measure(rho, setup)
        required_label = required[i - 1]
        if required_label is None:
            mixed = sum(o.probability * o.post_state.mat for o in outcomes)
            rho = DensityMatrix(mixed)
            step_prob = 1.0
        else:
            selected = _select(outcomes, required_label)
            if selected is None or selected.probability <= 0.0:
                return fail(i, pre)
            rho = selected.post_state
            step_prob = selected.probability
        probability *= step_prob
        records.append(StepRecord(i, pre, required_label, step_prob))

    if kind in _NO_INTERMEDIATE:
        pre = rho
        rho = pi_pulse_ideal_mode_a(rho)
        outcomes = measure(rho, DetectorSetup.only_de(params.p_e))
        required_label = probe_required
        if required_label is None:
            mixed = sum(o.probability * o.post_state.mat for o in outcomes)
            rho = DensityMatrix(mixed)
            step_prob = 1.0
        else:
            selected = _select(outcomes, required_label)
            if selected is None or selected.probability <= 0.0:
                return fail(n + 1, pre)
            rho = selected.post_state
            step_prob = selected.probability
        probability *= step_prob
        records.append(StepRecord(n + 1, pre, required_label, step_prob))

    return ProtocolRun(probability, tuple(records), rho)


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------

class CurveSource(str, Enum):
    CLOSED_FORM = "closed-form"
    STATE_MACHINE = "state-machine"
    MONTE_CARLO = "monte-carlo"


class CurvePoint(NamedTuple):
    n: int
    value: float
    std_error: Optional[float]


@dataclass(frozen=True)
class CurveSeries:
    """Canonical-event probability versus atom count, from one source."""

    kind: ProtocolKind
    source: CurveSource
    params: SystemParams
    points: Tuple[CurvePoint, ...]


def sweep_curve(
    params: SystemParams,
    kind: ProtocolKind,
    n_values: Sequence[int],
    source: CurveSource,
    n_runs: int = 100_000,
    seed: int = 0,
) -> CurveSeries:
    """Evaluate the canonical-event probability over a range of atom counts.

    The closed-form and state-machine sources are exact and carry no
    standard error.  The Monte Carlo source estimates each point from
    n_runs sampled trajectories; point N uses the stream seed + N so
    different points draw independent randomness while staying fully
    reproducible.
    """
    for n in n_values:
        if not (isinstance(n, (int,)) and n >= 1):
            raise ValueError(f"n_values must contain integers >= 1, got {n!r}")
    points = []
    if source == CurveSource.MONTE_CARLO:
        from .montecarlo import estimate  # local import breaks the module cycle

        for n in n_values:
            value, std_error = estimate(
                replace(params, n_atoms=n), kind, n_runs=n_runs, seed=seed + n
            )
            points.append(CurvePoint(int(n), value, std_error))
    elif source == CurveSource.STATE_MACHINE:
        for n in n_values:
            run = run_protocol(replace(params, n_atoms=n), kind)
            points.append(CurvePoint(int(n), run.probability, None))
    elif source == CurveSource.CLOSED_FORM:
        for n in n_values:
            points.append(CurvePoint(int(n), closed_form_probability(params, kind, int(n)), None))
    else:
        raise ValueError(f"unknown curve source {source!r}")
    return CurveSeries(kind, source, params, tuple(points))
