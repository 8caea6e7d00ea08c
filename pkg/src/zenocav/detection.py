"""Classical detection channel applied after each probe atom.

A probe atom leaving the cavities is sent to one or two state-selective
ionization detectors.  Detection is modeled as a two-stage classical
channel: the atom's internal state decides which detector can fire, and
the detector fires with its efficiency.  Conditioning on an outcome
updates the field state; the atom register is reset to |g> afterwards
because every protocol step uses a fresh atom.

A click in the ground-state detector projects onto the atom-ground
sector (in the Zeno sequence this re-prepares the photon in cavity A).
A click in the excited-state detector certifies the excitation left the
field, projecting it onto the vacuum.  A no-click mixes the unmonitored
possibilities with the detector inefficiency; coherences between the
atom-ground and atom-excited sectors are discarded, as the atom has
flown away and its state, measured or not, is classical information.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import BasisState, DensityMatrix, new_pure, require_valid


class OutcomeLabel(str, Enum):
    CLICK_G = "click_g"
    CLICK_E = "click_e"
    NO_CLICK = "no_click"


class DetectorMode(str, Enum):
    BOTH_PERFECT = "both_perfect"
    ONLY_DG = "only_dg"
    ONLY_DE = "only_de"
    NO_DETECTOR = "no_detector"


@dataclass(frozen=True)
class DetectorSetup:
    """Which detectors are present and how efficient they are.

    The BOTH_PERFECT mode fixes both efficiencies to 1; the single-
    detector modes use only their own efficiency.  Prefer the factory
    classmethods over the raw constructor.
    """

    mode: DetectorMode
    p_g: float = 1.0
    p_e: float = 1.0

    def __post_init__(self):
        for name in ("p_g", "p_e"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"detector efficiency {name} must lie in [0, 1], got {value}")
        if self.mode == DetectorMode.BOTH_PERFECT and (self.p_g != 1.0 or self.p_e != 1.0):
            raise ValueError("BOTH_PERFECT mode requires p_g = p_e = 1")

    @classmethod
    def both_perfect(cls) -> "DetectorSetup":
        return cls(DetectorMode.BOTH_PERFECT)

    @classmethod
    def only_dg(cls, p_g: float) -> "DetectorSetup":
        return cls(DetectorMode.ONLY_DG, p_g=p_g)

    @classmethod
    def only_de(cls, p_e: float) -> "DetectorSetup":
        return cls(DetectorMode.ONLY_DE, p_e=p_e)

    @classmethod
    def no_detector(cls) -> "DetectorSetup":
        return cls(DetectorMode.NO_DETECTOR)


@dataclass(frozen=True)
class MeasurementOutcome:
    """One branch of the detection channel: label, weight, post state.

    Zero-probability branches carry the vacuum as a placeholder post
    state; they are never selected by sampling or conditioning.
    """

    label: OutcomeLabel
    probability: float
    post_state: DensityMatrix


def _clamp(p: float) -> float:
    return float(min(max(p, 0.0), 1.0))


def _ground_projection(mat: np.ndarray) -> np.ndarray:
    """P_g rho P_g: zero out the excited-atom row and column."""
    out = mat.copy()
    out[BasisState.KET_00E, :] = 0.0
    out[:, BasisState.KET_00E] = 0.0
    return out


def trace_out_atom(rho: DensityMatrix) -> DensityMatrix:
    """Discard the unmeasured atom and re-embed the field with a fresh |g>.

    The excited-atom population moves to the empty-field ground state
    and every coherence between the two atom sectors is dropped; field
    coherences inside the atom-ground sector survive.  Trace preserving.
    """
    require_valid(rho, "trace_out_atom")
    out = _ground_projection(rho.mat)
    out[BasisState.KET_00G, BasisState.KET_00G] += rho.mat[
        BasisState.KET_00E, BasisState.KET_00E
    ].real
    return DensityMatrix(out)


def measure(rho: DensityMatrix, setup: DetectorSetup) -> list[MeasurementOutcome]:
    """All outcome branches of one detection event, probabilities summing to 1.

    The offered outcome set depends on the setup: both perfect detectors
    partition into {click_g, click_e}; a single detector offers its
    click and no_click; no detector offers the certain no_click whose
    post state is the atom traced out.
    """
    require_valid(rho, "measure")
    mat = rho.mat
    p_excited = _clamp(mat[BasisState.KET_00E, BasisState.KET_00E].real)
    p_ground = _clamp(np.trace(mat).real - p_excited)
    ground_proj = _ground_projection(mat)
    vacuum = new_pure(BasisState.KET_00G)

    def branch(label, prob, unnormalized):
        if prob > 0.0:
            post = DensityMatrix(unnormalized / np.trace(unnormalized).real)
        else:
            post = vacuum
        return MeasurementOutcome(label, _clamp(prob), post)

    mode = setup.mode
    if mode == DetectorMode.BOTH_PERFECT:
        return [
            branch(OutcomeLabel.CLICK_G, p_ground, ground_proj),
            MeasurementOutcome(OutcomeLabel.CLICK_E, _clamp(p_excited), vacuum),
        ]
    if mode == DetectorMode.ONLY_DG:
        click_prob = setup.p_g * p_ground
        noclick = (1.0 - setup.p_g) * ground_proj + p_excited * vacuum.mat
        return [
            branch(OutcomeLabel.CLICK_G, click_prob, ground_proj),
            branch(OutcomeLabel.NO_CLICK, 1.0 - click_prob, noclick),
        ]
    if mode == DetectorMode.ONLY_DE:
        click_prob = setup.p_e * p_excited
        noclick = ground_proj + (1.0 - setup.p_e) * p_excited * vacuum.mat
        return [
            MeasurementOutcome(OutcomeLabel.CLICK_E, _clamp(click_prob), vacuum),
            branch(OutcomeLabel.NO_CLICK, 1.0 - click_prob, noclick),
        ]
    return [MeasurementOutcome(OutcomeLabel.NO_CLICK, 1.0, trace_out_atom(rho))]
