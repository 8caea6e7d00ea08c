"""Individual click records and what happens to the photon.

Each run of the protocol produces a concrete sequence of detector
outcomes; the library samples them with the exact per-step branching
probabilities.  This script prints a handful of records, tallies the
photon's fate over many unconditioned runs, and shows the empirical
event frequency converging to the closed form.
"""
import math
from collections import Counter

from zenocav import (
    Conditioning,
    ProtocolKind,
    SeededSampler,
    SystemParams,
    closed_form_probability,
    estimate,
    sample_trajectory,
)

kind = ProtocolKind.ONLY_DG_INEFFICIENT
params = SystemParams(g=1.0e3, p_g=0.9, n_atoms=8)

print("ten conditioned runs (stop at the first missing click):")
for i in range(10):
    traj = sample_trajectory(params, kind, SeededSampler(seed=4, counter=i))
    marks = " ".join("G" if o.value == "click_g" else "-" for o in traj.outcomes)
    state = "stopped" if traj.terminated_early else "complete"
    print(f"  run {i}: {marks:23s} {state:8s} photon: {traj.final_label.value}")

fates = Counter()
for i in range(20_000):
    traj = sample_trajectory(params, kind, SeededSampler(seed=99, counter=i),
                             Conditioning.UNCONDITIONED)
    fates[traj.final_label.value] += 1
print("\nphoton fate over 20000 unconditioned runs:")
for label, count in sorted(fates.items()):
    print(f"  {label:22s} {count / 20_000:.4f}")

print("\nevent frequency versus closed form (100000 runs each):")
print("  N    closed form   Monte Carlo   deviation / sigma")
for n in (2, 5, 10, 20):
    p = SystemParams(g=1.0e3, p_g=0.9, n_atoms=n)
    exact = closed_form_probability(p, kind)
    mc = estimate(p, kind, n_runs=100_000, seed=1)
    sigma = math.sqrt(exact * (1.0 - exact) / 100_000)
    print(f"  {n:3d}  {exact:.6f}      {mc.value:.6f}      {abs(mc.value - exact) / sigma:4.2f}")
