"""Deterministic sample generation for the supremum estimators.

All estimators are sampled suprema.  Samples come from seeded, scrambled
Halton sequences, which are prefix-nested: the first ``n`` points drawn for a
given seed are a prefix of the first ``2n``.  Every chart additionally mixes
in a dyadic radius ladder ``delta * 2**-j`` whose depth grows with
``log2(n)``, so suprema attained in shrinking-ratio limits (points sliding
into a corner or a tangency) are approached at a fixed rate per doubling of
the sample budget, and doubling the budget never decreases an estimate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import norm as _gauss
from scipy.stats import qmc

from .linalg import complement_basis
from .sets import (
    AffineSubspace,
    Ball,
    KinkedRegion,
    Sphere,
    UnionOfSubspaces,
)


def qmc_unit(n, dim, seed):
    """First ``n`` points of the seeded scrambled Halton sequence in [0,1)^dim."""
    if n <= 0:
        return np.zeros((0, dim))
    engine = qmc.Halton(d=dim, scramble=True, seed=int(seed))
    return engine.random(int(n))


def ladder_depth(n):
    # four levels past log2(n) so ratio limits are resolved well below the
    # quasirandom scale; still advances one level per budget doubling
    return max(0, int(math.floor(math.log2(max(n, 1))))) + 4


def dyadic_ladder(n):
    """Radii ``2**-j`` for j = 0 .. ladder_depth(n); nested as ``n`` doubles."""
    return 2.0 ** -np.arange(ladder_depth(n) + 1, dtype=float)


def ball_points(center, radius, n, seed, floor_radius=0.0):
    """Deterministic points filling the closed ball, center included.

    ``floor_radius`` pushes samples off the center out to that radius; the
    supremum estimators use it so that their finest resolved scale is the
    dyadic ladder, never a stray quasirandom point.
    """
    center = np.asarray(center, dtype=float)
    d = center.shape[0]
    u = qmc_unit(n, d + 1, seed)
    g = _gauss.ppf(np.clip(u[:, :d], 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    dirs = g / norms[:, None]
    radii = np.maximum(radius * u[:, d] ** (1.0 / d), floor_radius)
    pts = center + radii[:, None] * dirs
    return np.vstack([center[None, :], pts])


def _clip_small(values, floor):
    """Clamp magnitudes below ``floor`` up to it, keeping signs."""
    signs = np.where(values >= 0, 1.0, -1.0)
    return signs * np.maximum(np.abs(values), floor)


def _in_ball(points, anchor, delta):
    points = np.asarray(points, dtype=float).reshape(-1, len(anchor))
    keep = np.linalg.norm(points - anchor, axis=1) <= delta * (1 + 1e-12)
    return points[keep]


def _affine_chart(s, anchor, delta, n, seed):
    frame = s.frame
    p0 = frame.project(anchor)
    k = frame.dim_subspace
    pts = [p0[None, :]]
    if k > 0:
        ladder = dyadic_ladder(n) * delta
        u = qmc_unit(n, k, seed)
        coeff = _clip_small((2.0 * u - 1.0) * delta, ladder[-1])
        pts.append(p0 + coeff @ frame.basis)
        for r in ladder:
            for i in range(k):
                step = r * frame.basis[i]
                pts.append(np.vstack([p0 + step, p0 - step]))
    return _in_ball(np.vstack(pts), anchor, delta)


def _boundary_chart(center, radius, anchor, delta, n, seed):
    center = np.asarray(center, dtype=float)
    d = center.shape[0]
    n0 = anchor - center
    nn = np.linalg.norm(n0)
    n0 = n0 / nn if nn > 1e-12 else np.eye(d)[0]
    W = complement_basis(n0[None, :], d)
    phi_max = 2.0 * math.asin(min(delta / (2.0 * radius), 1.0))
    phi_cap = min(phi_max, 1.45)
    s_max = math.tan(phi_cap) if phi_max < math.pi / 2 else 50.0
    pts = [(center + radius * n0)[None, :]]
    if d > 1 and W.shape[0]:
        ladder = dyadic_ladder(n)
        u = qmc_unit(n, d - 1, seed)
        t = _clip_small((2.0 * u - 1.0) * s_max, math.tan(phi_cap * ladder[-1]))
        dirs = n0 + t @ W
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        pts.append(center + radius * dirs)
        for r in ladder:
            ang = phi_cap * r
            for i in range(W.shape[0]):
                for sign in (1.0, -1.0):
                    v = n0 + sign * math.tan(ang) * W[i]
                    pts.append((center + radius * v / np.linalg.norm(v))[None, :])
    if delta >= 2.0 * radius - 1e-12:
        pts.append((center - radius * n0)[None, :])
    return _in_ball(np.vstack(pts), anchor, delta)


def _kinked_chart(anchor, delta, n, seed):
    anchor = np.asarray(anchor, dtype=float)
    span = float(np.linalg.norm(anchor)) + delta
    ladder = dyadic_ladder(n)
    u = qmc_unit(n, 2, seed)
    radii = np.concatenate([
        np.maximum(span * u[:, 0], span * ladder[-1]),
        span * ladder,
    ])
    neg = np.column_stack([-radii, radii]) / math.sqrt(2.0)
    pos = np.column_stack([radii, np.zeros_like(radii)])
    corner = np.zeros((1, 2))
    boundary = np.vstack([neg, pos, corner])
    # a few interior points: drop boundary samples straight down
    drops = delta * np.array([0.25, 0.5])
    interior = np.vstack([boundary - np.array([0.0, h]) for h in drops])
    interior = interior[[KinkedRegion().contains(p, tol=0.0) for p in interior]]
    return _in_ball(np.vstack([boundary, interior]), anchor, delta)


def on_set_points(s, anchor, delta, n, seed):
    """Deterministic points of ``s`` within ``delta`` of ``anchor``.

    The charts parameterize each variant directly (basis coefficients for
    subspaces, angles for spheres and ball boundaries, edge coordinates for
    the kinked region) and include the dyadic ladder toward the anchor.
    """
    anchor = np.asarray(anchor, dtype=float)
    if isinstance(s, AffineSubspace):
        return _affine_chart(s, anchor, delta, n, seed)
    if isinstance(s, (Ball, Sphere)):
        pts = _boundary_chart(s.center, s.radius, anchor, delta, n, seed)
        if isinstance(s, Ball) and s.contains(anchor):
            pts = np.vstack([anchor[None, :], pts])
        return pts
    if isinstance(s, UnionOfSubspaces):
        per = max(1, n // len(s.frames))
        parts = [
            _affine_chart(AffineSubspace(f), anchor, delta, per, seed + 911 * i)
            for i, f in enumerate(s.frames)
        ]
        return np.vstack(parts)
    if isinstance(s, KinkedRegion):
        return _kinked_chart(anchor, delta, n, seed)
    raise NotImplementedError(f"no sampling chart for {type(s).__name__}")
