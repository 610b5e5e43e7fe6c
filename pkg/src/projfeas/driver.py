"""Fixed-point iteration engine: traces, rate fitting and fixed-point probes."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .linalg import AffineFrame, as_point, complement_basis, subspace_intersection
from .operators import DouglasRachford, FixedPointOperator
from .regularity import Region
from .sets import AffineSubspace
from .solution import SolutionSet

STAGNATION_STEP = 1e-15  # below this, the iterate is a numerical fixed point
DIVERGENCE_NORM = 1e12


@dataclass
class IterationTrace:
    """Picard iteration record.

    ``iterates`` has one row per recorded point (the start included), the
    distance arrays have matching length, and ``step_norms`` is one entry
    shorter with ``step_norms[n] == |iterates[n+1] - iterates[n]|``.
    """

    iterates: np.ndarray
    dist_to_a: np.ndarray
    dist_to_b: np.ndarray
    dist_to_s: np.ndarray
    step_norms: np.ndarray
    stop_reason: str

    def __len__(self):
        return self.iterates.shape[0]

    @property
    def final(self):
        return self.iterates[-1]

    @property
    def final_dist_to_s(self):
        return float(self.dist_to_s[-1])


def _pair_sets(op):
    sets = op.constituent_sets()
    if len(sets) >= 2:
        return sets[0], sets[1]
    if len(sets) == 1:
        return sets[0], sets[0]
    raise ValueError("operator exposes no constituent sets to trace distances to")


def iterate(op: FixedPointOperator, x0, sol: SolutionSet, max_iters=1000, tol=1e-12):
    """Run the Picard iteration with the deterministic branch selection.

    Stops on ``dist_to_s < tol`` ("tolerance"), on exhausting ``max_iters``,
    on a step shorter than ``STAGNATION_STEP`` while still off the solution
    set ("stagnation": a fixed point away from the intersection), or on the
    iterate norm exceeding ``DIVERGENCE_NORM`` ("divergence").
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = _pair_sets(op)
    x = as_point(x0, op.dim)
    X = np.empty((max_iters + 1, op.dim))
    d_s = np.empty(max_iters + 1)
    steps = np.empty(max_iters)
    X[0] = x
    d_s[0] = sol.distance(x)
    used = 0  # number of steps actually taken
    stop = None
    for n in range(max_iters):
        if d_s[n] < tol:
            stop = "tolerance"
            break
        x_next = op.step(x)
        step = float(np.linalg.norm(x_next - x))
        used = n + 1
        X[used] = x_next
        steps[n] = step
        d_s[used] = sol.distance(x_next)
        x = x_next
        if float(np.linalg.norm(x)) > DIVERGENCE_NORM:
            stop = "divergence"
            break
        if step < STAGNATION_STEP:
            stop = "tolerance" if d_s[used] < tol else "stagnation"
            break
    if stop is None:
        stop = "tolerance" if d_s[used] < tol else "max_iters"
    X = X[: used + 1].copy()
    return IterationTrace(
        iterates=X,
        dist_to_a=a.distance_many(X),
        dist_to_b=b.distance_many(X),
        dist_to_s=d_s[: used + 1].copy(),
        step_norms=steps[:used].copy(),
        stop_reason=stop,
    )


@dataclass
class RateFit:
    """Least-squares geometric rate of the tail of ``dist_to_s``.

    ``linear`` requires a clean fit (r_squared >= 0.98) at a rate bounded
    away from one (<= 0.999).
    """

    observed_rate: float
    r_squared: float
    tail_start: int
    linear: bool


def fit_rate(trace: IterationTrace, tail_fraction=0.5):
    """Fit ``log dist_to_s ~ slope * n`` over the trailing part of the trace.

    Uses the trailing ``tail_fraction`` of entries with distance above 1e-14
    (earlier iterates are transient); needs at least ten usable entries.
    """
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must be in (0, 1]")
    usable = np.flatnonzero(trace.dist_to_s > 1e-14)
    if usable.size < 10:
        raise ValueError(f"only {usable.size} usable entries; need at least 10")
    k = max(2, int(math.ceil(tail_fraction * usable.size)))
    tail = usable[-k:]
    n = tail.astype(float)
    y = np.log(trace.dist_to_s[tail])
    slope, intercept = np.polyfit(n, y, 1)
    pred = slope * n + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot <= 1e-30 else max(0.0, 1.0 - ss_res / ss_tot)
    rate = float(np.exp(slope))
    return RateFit(
        observed_rate=rate,
        r_squared=r2,
        tail_start=int(tail[0]),
        linear=bool(r2 >= 0.98 and rate <= 0.999),
    )


@dataclass
class ProbeResult:
    """Limit points of sampled starts, classified by distance to the
    solution set; for an affine Douglas-Rachford pair also the exact
    fixed-point subspace (intersection plus the meet of the normal spaces)."""

    limits: list
    fixed_point_frame: AffineFrame | None


def probe_fixed_points(op, region: Region, samples, seed, sol: SolutionSet,
                       max_iters=2000, tol=1e-9):
    """Iterate from sampled starting points until stagnation or tolerance and
    report each limit with its distance to the solution set."""
    starts = region.sample(samples, seed)
    limits = []
    for x0 in starts:
        trace = iterate(op, x0, sol, max_iters=max_iters, tol=tol)
        limits.append((trace.final, trace.final_dist_to_s))
    frame = None
    if isinstance(op, DouglasRachford):
        a, b = op.constituent_sets()
        if isinstance(a, AffineSubspace) and isinstance(b, AffineSubspace):
            meet = subspace_intersection(a.frame.basis, b.frame.basis)
            normal_meet = subspace_intersection(
                complement_basis(a.frame.basis, op.dim),
                complement_basis(b.frame.basis, op.dim),
            )
            frame = AffineFrame.from_span(
                sol.witness, np.vstack([meet, normal_meet]) if meet.size + normal_meet.size else []
            )
    return ProbeResult(limits=limits, fixed_point_frame=frame)


def trace_to_csv(trace: IterationTrace, path):
    """Write ``iter, x_0..x_{d-1}, dist_A, dist_B, dist_S, step_norm`` rows;
    the final row has no forward step and leaves the field empty."""
    d = trace.iterates.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["iter"] + [f"x_{i}" for i in range(d)] + ["dist_A", "dist_B", "dist_S", "step_norm"]
        )
        for n in range(len(trace)):
            step = f"{trace.step_norms[n]:.17g}" if n < trace.step_norms.size else ""
            writer.writerow(
                [n]
                + [f"{v:.17g}" for v in trace.iterates[n]]
                + [
                    f"{trace.dist_to_a[n]:.17g}",
                    f"{trace.dist_to_b[n]:.17g}",
                    f"{trace.dist_to_s[n]:.17g}",
                    step,
                ]
            )

