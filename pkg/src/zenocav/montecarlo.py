"""Trajectory sampling with exact per-step Bernoulli branching.

Conditioned on the detection record, every protocol reduces to a hidden
classical Markov chain for the fate of the photon: it is either still
in cavity A, absorbed by a probe atom (detected or not), or lost to the
environment.  Each step branches with the exact probabilities of the
density-matrix channel (no time discretization), so the sampled
statistics converge to the closed forms with binomial scatter only.

Reproducibility scheme: trajectory i draws from a dedicated stream
derived from SeedSequence(seed, spawn_key=(0, i)), and the vectorized
estimator draws fixed-shape uniform blocks per 4096-run chunk from
SeedSequence(seed, spawn_key=(1, chunk)).  Both schemes depend only on
the seed and the run/chunk index, never on scheduling, so results are
bit-identical under any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .core import SystemParams
from .detection import OutcomeLabel
from .dynamics import lossy_amplitudes, tau_pi
from .protocols import (
    ConditioningLike,
    ProtocolKind,
    _required_labels,
    canonical_conditioning,
)

CHUNK = 4096

_CODE = {OutcomeLabel.CLICK_G: 0, OutcomeLabel.CLICK_E: 1, OutcomeLabel.NO_CLICK: 2}
_LABEL = {code: label for label, code in _CODE.items()}

# fate codes of the hidden chain
_IN_A, _ABSORBED, _LOST, _DETECTED = 0, 1, 2, 3


class FinalLabel(str, Enum):
    """Fate of the photon when a trajectory ends."""

    PHOTON_IN_A = "photon_in_a"
    PHOTON_IN_B_ABSORBED = "photon_in_b_absorbed"
    LOST = "lost"
    VACUUM = "vacuum"


_FATE_TO_LABEL = {
    _IN_A: FinalLabel.PHOTON_IN_A,
    _ABSORBED: FinalLabel.PHOTON_IN_B_ABSORBED,
    _LOST: FinalLabel.LOST,
    _DETECTED: FinalLabel.VACUUM,  # a click in D_e projects the field onto vacuum
}


@dataclass(frozen=True)
class Trajectory:
    """Click record of one sampled run.

    outcomes has one label per completed step (steps without detectors
    record the trivially true no_click); final_outcome is the final
    probe's result for the no-intermediate kinds.  terminated_early is
    set when the conditioned event became impossible before all steps
    ran, in which case outcomes is shorter than n_atoms.
    """

    outcomes: Tuple[OutcomeLabel, ...]
    terminated_early: bool
    final_label: FinalLabel
    final_outcome: Optional[OutcomeLabel] = None


@dataclass(frozen=True)
class SeededSampler:
    """Value-type handle on a reproducible family of random streams.

    Equal (seed, counter) pairs always yield identical streams; advance
    returns a fresh handle rather than mutating, so samplers can be
    cloned freely across workers.
    """

    seed: int
    counter: int = 0

    def __post_init__(self):
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not (isinstance(self.counter, (int, np.integer)) and self.counter >= 0):
            raise ValueError(f"counter must be a nonnegative integer, got {self.counter!r}")

    def stream(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(0, self.counter)))

    def advance(self, steps: int = 1) -> "SeededSampler":
        return SeededSampler(self.seed, self.counter + steps)


class McEstimate(NamedTuple):
    value: float
    std_error: float


@dataclass(frozen=True)
class _StepModel:
    """Categorical tables of the hidden chain for one (params, kind)."""

    a_edges: np.ndarray      # cumulative probabilities from the in-A fate
    a_outcomes: np.ndarray   # outcome code per category
    a_fates: np.ndarray      # next fate per category
    v_edges: np.ndarray      # cumulative probabilities once the photon is gone
    v_outcomes: np.ndarray
    has_probe: bool
    probe_p_e: float


def _step_model(params: SystemParams, kind: ProtocolKind) -> _StepModel:
    interval = params.t0 / params.n_atoms
    angle = params.g * interval
    c2 = math.cos(angle) ** 2
    s2 = 1.0 - c2

    def tables(a_rows, v_rows, has_probe=False):
        a_probs, a_out, a_fate = zip(*a_rows)
        v_probs, v_out = zip(*v_rows)
        return _StepModel(
            np.cumsum(a_probs),
            np.array([_CODE[o] for o in a_out], dtype=np.int8),
            np.array(a_fate, dtype=np.int8),
            np.cumsum(v_probs),
            np.array([_CODE[o] for o in v_out], dtype=np.int8),
            has_probe,
            params.p_e,
        )

    click_g, click_e, no_click = OutcomeLabel.CLICK_G, OutcomeLabel.CLICK_E, OutcomeLabel.NO_CLICK
    if kind == ProtocolKind.PERFECT_DETECTORS:
        return tables(
            [(c2, click_g, _IN_A), (s2, click_e, _DETECTED)],
            [(1.0, click_g)],
        )
    if kind == ProtocolKind.ONLY_DG_INEFFICIENT:
        p_g = params.p_g
        return tables(
            [(c2 * p_g, click_g, _IN_A), (c2 * (1.0 - p_g), no_click, _IN_A), (s2, no_click, _ABSORBED)],
            [(p_g, click_g), (1.0 - p_g, no_click)],
        )
    if kind == ProtocolKind.ONLY_DE_NOCLICK:
        p_e = params.p_e
        return tables(
            [(c2, no_click, _IN_A), (s2 * p_e, click_e, _DETECTED), (s2 * (1.0 - p_e), no_click, _ABSORBED)],
            [(1.0, no_click)],
        )
    if kind == ProtocolKind.NO_INTERMEDIATE_IDEAL:
        return tables(
            [(c2, no_click, _IN_A), (s2, no_click, _ABSORBED)],
            [(1.0, no_click)],
            has_probe=True,
        )
    # dissipative: survival and atom-absorption weights carry the decay
    # envelopes of the exchange interval and the extraction pulse
    f1, l2 = lossy_amplitudes(params, interval)
    pulse = tau_pi(params.omega0, params.k)
    survive = abs(f1) ** 2 * math.exp(-2.0 * params.k * pulse)
    absorbed = abs(l2) ** 2 * math.exp(-params.k * pulse)
    lost = max(1.0 - survive - absorbed, 0.0)
    return tables(
        [(survive, no_click, _IN_A), (absorbed, no_click, _ABSORBED), (lost, no_click, _LOST)],
        [(1.0, no_click)],
        has_probe=True,
    )


def _required_codes(kind: ProtocolKind, n: int, event: ConditioningLike):
    """Per-step required outcome codes (-1 for none) plus the probe rule.

    probe rule: +1 requires the final click, -1 forbids it, 0 ignores it.
    """
    labels, probe_label = _required_labels(event, kind, n)
    codes = np.array([-1 if lab is None else _CODE[lab] for lab in labels], dtype=np.int8)
    if probe_label is None:
        probe = 0
    elif probe_label == OutcomeLabel.CLICK_E:
        probe = 1
    else:
        probe = -1
    return codes, probe


def _categorize(edges: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.minimum(np.searchsorted(edges, u, side="right"), len(edges) - 1)


def _chunk_successes(model: _StepModel, codes, probe_rule, uniforms) -> int:
    """Count event successes over one pre-drawn uniform block."""
    m = uniforms.shape[1]
    fates = np.zeros(m, dtype=np.int8)
    ok = np.ones(m, dtype=bool)
    for i, code in enumerate(codes):
        u = uniforms[i]
        in_a = fates == _IN_A
        outcome = np.empty(m, dtype=np.int8)
        cat_a = _categorize(model.a_edges, u[in_a])
        outcome[in_a] = model.a_outcomes[cat_a]
        gone = ~in_a
        cat_v = _categorize(model.v_edges, u[gone])
        outcome[gone] = model.v_outcomes[cat_v]
        new_fates = fates.copy()
        new_fates[in_a] = model.a_fates[cat_a]
        fates = new_fates
        if code >= 0:
            ok &= outcome == code
    if model.has_probe and probe_rule != 0:
        clicked = (fates == _IN_A) & (uniforms[len(codes)] < model.probe_p_e)
        ok &= clicked if probe_rule > 0 else ~clicked
    return int(np.count_nonzero(ok))


def estimate(
    params: SystemParams,
    kind: ProtocolKind,
    event: Optional[ConditioningLike] = None,
    n_runs: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    """Empirical probability of an event over n_runs independent runs.

    Samples unconditioned trajectories with the exact per-step branch
    probabilities and counts how often the event holds.  The returned
    standard error is the binomial sqrt(p(1-p)/n).  Results depend only
    on (params, kind, event, n_runs, seed): the chunked stream layout
    makes them bit-identical for any workers value.
    """
    if not (isinstance(n_runs, (int, np.integer)) and n_runs >= 1):
        raise ValueError(f"n_runs must be a positive integer, got {n_runs!r}")
    if not (isinstance(seed, (int, np.integer)) and seed >= 0):
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    if event is None:
        event = canonical_conditioning(kind)
    n = params.n_atoms
    model = _step_model(params, kind)
    codes, probe_rule = _required_codes(kind, n, event)
    rows = n + 1 if model.has_probe else n
    n_chunks = (n_runs + CHUNK - 1) // CHUNK

    def run_chunk(index: int) -> int:
        size = min(CHUNK, n_runs - index * CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, index)))
        uniforms = rng.random((rows, size))
        return _chunk_successes(model, codes, probe_rule, uniforms)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            successes = sum(pool.map(run_chunk, range(n_chunks)))
    else:
        successes = sum(run_chunk(c) for c in range(n_chunks))

    p_hat = successes / n_runs
    return McEstimate(p_hat, math.sqrt(p_hat * (1.0 - p_hat) / n_runs))


def sample_trajectory(
    params: SystemParams,
    kind: ProtocolKind,
    sampler: SeededSampler,
    event: Optional[ConditioningLike] = None,
) -> Trajectory:
    """Sample one full trajectory, stopping once the event is impossible.

    The event defaults to the kind's canonical conditioning.  Repeated
    calls with an equal sampler value reproduce the trajectory exactly.
    """
    if event is None:
        event = canonical_conditioning(kind)
    n = params.n_atoms
    model = _step_model(params, kind)
    codes, probe_rule = _required_codes(kind, n, event)
    rng = sampler.stream()

    fate = _IN_A
    outcomes = []
    terminated = False
    for i in range(n):
        u = rng.random()
        if fate == _IN_A:
            cat = int(_categorize(model.a_edges, np.array([u]))[0])
            outcome_code = int(model.a_outcomes[cat])
            fate = int(model.a_fates[cat])
        else:
            cat = int(_categorize(model.v_edges, np.array([u]))[0])
            outcome_code = int(model.v_outcomes[cat])
        outcomes.append(_LABEL[outcome_code])
        if codes[i] >= 0 and outcome_code != codes[i]:
            terminated = True
            break
        if probe_rule > 0 and fate != _IN_A:
            # the final click can no longer happen
            terminated = True
            break

    final_outcome = None
    if model.has_probe and not terminated:
        u = rng.random()
        clicked = fate == _IN_A and u < model.probe_p_e
        final_outcome = OutcomeLabel.CLICK_E if clicked else OutcomeLabel.NO_CLICK
        if probe_rule > 0 and not clicked:
            terminated = True
        elif probe_rule < 0 and clicked:
            terminated = True

    return Trajectory(tuple(outcomes), terminated, _FATE_TO_LABEL[fate], final_outcome)
