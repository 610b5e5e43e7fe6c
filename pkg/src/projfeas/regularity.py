"""Estimators for the constants that drive the linear-rate guarantees.

The constants are defined as suprema over continua, so every estimator here
reports the supremum over a deterministic, seeded, prefix-nested sample set:
a lower bound that never decreases when the sample budget doubles.  Rates
predicted from estimated constants are therefore optimistic; callers that
certify observed rates against them inflate the estimates by
``SAFETY_INFLATION`` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    complement_basis,
    largest_principal_cosine,
    orthonormalize,
    subspace_intersection,
)
from .sampling import ball_points, on_set_points
from .sets import (
    AffineSubspace,
    Ball,
    ClosedSet,
    KinkedRegion,
    Sphere,
    UnionOfSubspaces,
)
from .solution import SolutionSet

DEFAULT_SAMPLES = 4096
SAFETY_INFLATION = 1.05
STRONG_REGULARITY_TOL = 1e-6


def eps_tilde_projector(eps):
    """Firm-nonexpansiveness violation of a projector onto a set with
    subregularity constant ``eps``."""
    return 2.0 * eps + 2.0 * eps**2


def eps_tilde_reflector(eps):
    """Nonexpansiveness violation of the corresponding reflector."""
    return 4.0 * eps + 4.0 * eps**2


def eps_tilde_douglas_rachford(eps_a, eps_b):
    """Firm-nonexpansiveness violation of the Douglas-Rachford step built
    from sets with subregularity constants ``eps_a`` and ``eps_b``."""
    qa = eps_a * (1.0 + eps_a)
    qb = eps_b * (1.0 + eps_b)
    return 2.0 * qa + 2.0 * qb + 8.0 * qa * qb


def _proximal_components(s, x):
    """Proximal normal cone at a set point as (rays, subspaces).

    Rays are unit one-sided generators; subspaces are orthonormal row bases
    whose full span lies in the cone.  Both empty means the zero cone.
    """
    dim = s.dim
    if isinstance(s, AffineSubspace):
        comp = complement_basis(s.frame.basis, dim)
        return [], ([comp] if comp.shape[0] else [])
    if isinstance(s, Ball):
        rays = s.proximal_normals(x)
        return list(rays), []
    if isinstance(s, Sphere):
        u = (np.asarray(x, float) - s.center)
        u = u / np.linalg.norm(u)
        return [], [u[None, :]]
    if isinstance(s, UnionOfSubspaces):
        holding = s._containing_frames(x)
        if len(holding) != 1:
            return [], []
        comp = complement_basis(holding[0].basis, dim)
        return [], ([comp] if comp.shape[0] else [])
    if isinstance(s, KinkedRegion):
        return list(s.proximal_normals(x)), []
    raise NotImplementedError(f"no proximal components for {type(s).__name__}")


def _sup_alignment(x, targets, rays, subspaces):
    """sup over normals v in the cone of <v, (t - x)/|t - x|> over targets t."""
    diffs = targets - x
    norms = np.linalg.norm(diffs, axis=1)
    mask = norms > 1e-14
    if not mask.any():
        return 0.0
    U = diffs[mask] / norms[mask][:, None]
    best = 0.0
    for g in rays:
        best = max(best, float(np.max(U @ g)))
    for W in subspaces:
        best = max(best, float(np.max(np.linalg.norm(U @ W.T, axis=1))))
    return best


def estimate_subregularity(s, sol: SolutionSet, delta, samples=DEFAULT_SAMPLES, seed=0):
    """Sampled subregularity constant of ``s`` with respect to the solution
    set, around the witness within radius ``delta``.

    Supremum of ``<v, xbar - x> / (|v| |xbar - x|)`` over set points ``x`` in
    the ball, unit proximal normals ``v`` at ``x`` and solution points
    ``xbar`` in the ball; clamped to ``[0, 1]``.  Zero for convex sets.
    """
    anchor = sol.witness
    X = on_set_points(s, anchor, delta, samples, seed)
    if X.shape[0] == 0:
        raise ValueError("no set samples found in the ball; delta too small")
    targets = sol.sample_points(delta, max(64, samples // 8), seed + 1)
    best = 0.0
    for x in X:
        rays, subs = _proximal_components(s, x)
        if rays or subs:
            best = max(best, _sup_alignment(x, targets, rays, subs))
    return float(np.clip(best, 0.0, 1.0))


def estimate_pair_regularity(s, anchor, delta, samples=DEFAULT_SAMPLES, seed=0):
    """Sampled pair-regularity constant of ``s`` at ``anchor``: as
    ``estimate_subregularity`` but with the comparison points ranging over
    the set itself instead of a solution set."""
    anchor = np.asarray(anchor, dtype=float)
    X = on_set_points(s, anchor, delta, samples, seed)
    if X.shape[0] == 0:
        raise ValueError("no set samples found in the ball; delta too small")
    best = 0.0
    for x in X:
        rays, subs = _proximal_components(s, x)
        if rays or subs:
            best = max(best, _sup_alignment(x, X, rays, subs))
    return float(np.clip(best, 0.0, 1.0))


def estimate_kappa(a, b, sol: SolutionSet, delta, samples=DEFAULT_SAMPLES, seed=0):
    """Sampled local linear-regularity modulus of the pair at the witness.

    Supremum of ``dist(x, S) / max(dist(x, a), dist(x, b))`` over ambient
    ball samples plus on-set samples of both sets (whose dyadic ladders drive
    the supremum when it is infinite, as at a tangency: refining the budget
    then roughly doubles the estimate per doubling).
    """
    anchor = sol.witness
    X = np.vstack([
        ball_points(anchor, delta, samples, seed),
        on_set_points(a, anchor, delta, max(16, samples // 4), seed + 2),
        on_set_points(b, anchor, delta, max(16, samples // 4), seed + 3),
    ])
    d_s = sol.distance_many(X)
    gap = np.maximum(a.distance_many(X), b.distance_many(X))
    mask = gap > 1e-12
    if not mask.any():
        raise ValueError("all samples lie in both sets; nothing to estimate")
    return float(np.max(d_s[mask] / gap[mask]))


def _collect_components(s, points):
    rays, subs = [], []
    seen = set()
    for x in points:
        r, w = _proximal_components(s, x)
        rays.extend(r)
        for W in w:
            key = W.round(12).tobytes()
            if key not in seen:
                seen.add(key)
                subs.append(W)
    R = np.vstack(rays) if rays else np.zeros((0, s.dim))
    return R, subs


def estimate_c(a, b, anchor, delta, samples=DEFAULT_SAMPLES, seed=0):
    """Worst opposition ``max(0, sup -<u, v>)`` between unit proximal normals
    of the two sets at points within ``delta`` of ``anchor``.

    For a pair of affine subspaces this is exact: the largest principal
    cosine between the two normal spaces.
    """
    anchor = np.asarray(anchor, dtype=float)
    if isinstance(a, AffineSubspace) and isinstance(b, AffineSubspace):
        comp_a = complement_basis(a.frame.basis, a.dim)
        comp_b = complement_basis(b.frame.basis, b.dim)
        return largest_principal_cosine(comp_a, comp_b)
    Ra, subs_a = _collect_components(a, on_set_points(a, anchor, delta, samples, seed))
    Rb, subs_b = _collect_components(b, on_set_points(b, anchor, delta, samples, seed + 1))
    best = 0.0
    if Ra.shape[0] and Rb.shape[0]:
        best = max(best, float(np.max(-(Ra @ Rb.T))))
    for W in subs_b:
        if Ra.shape[0]:
            best = max(best, float(np.max(np.linalg.norm(Ra @ W.T, axis=1))))
    for W in subs_a:
        if Rb.shape[0]:
            best = max(best, float(np.max(np.linalg.norm(Rb @ W.T, axis=1))))
    for Wa in subs_a:
        for Wb in subs_b:
            best = max(best, largest_principal_cosine(Wa, Wb))
    return float(np.clip(best, 0.0, 1.0))


def check_strong_regularity(a, b, point):
    """Whether the limiting normal cones at ``point`` oppose only trivially,
    i.e. no unit normal of one set is (nearly) the negative of a unit normal
    of the other.

    Exact for affine pairs via the rank of the stacked direction bases; for
    the other variants the analytic limiting cones are compared component by
    component with alignment threshold ``1 - STRONG_REGULARITY_TOL``.
    """
    point = np.asarray(point, dtype=float)
    if not (a.contains(point) and b.contains(point)):
        raise ValueError("point is not in the intersection")
    if isinstance(a, AffineSubspace) and isinstance(b, AffineSubspace):
        # normal spaces meet trivially iff the direction spans fill the space
        stacked = np.vstack([a.frame.basis, b.frame.basis])
        rank = orthonormalize(stacked).shape[0] if stacked.size else 0
        return bool(rank == a.dim)
    na = a.limiting_normals(point)
    nb = b.limiting_normals(point)
    if na.is_zero or nb.is_zero:
        return True
    align = 0.0
    if na.rays.shape[0] and nb.rays.shape[0]:
        align = max(align, float(np.max(-(na.rays @ nb.rays.T))))
    for W in nb.subspaces:
        if na.rays.shape[0]:
            align = max(align, float(np.max(np.linalg.norm(na.rays @ W.T, axis=1))))
    for W in na.subspaces:
        if nb.rays.shape[0]:
            align = max(align, float(np.max(np.linalg.norm(nb.rays @ W.T, axis=1))))
    for Wa in na.subspaces:
        for Wb in nb.subspaces:
            align = max(align, largest_principal_cosine(Wa, Wb))
    return bool(align <= 1.0 - STRONG_REGULARITY_TOL)


def friedrichs_cosine(frame_a, frame_b):
    """Cosine of the angle between two subspaces modulo their intersection.

    Exact: the largest principal cosine between ``A n (A n B)^perp`` and
    ``B n (A n B)^perp``; zero when either factor is trivial.
    """
    if frame_a.dim_ambient != frame_b.dim_ambient:
        raise ValueError("frames have mixed ambient dimensions")
    meet = subspace_intersection(frame_a.basis, frame_b.basis)

    def _mod_meet(basis):
        if basis.shape[0] == 0:
            return basis
        if meet.shape[0] == 0:
            return basis
        reduced = basis - (basis @ meet.T) @ meet
        return orthonormalize(reduced)

    a_part = _mod_meet(frame_a.basis)
    b_part = _mod_meet(frame_b.basis)
    if a_part.shape[0] == 0 or b_part.shape[0] == 0:
        return 0.0
    return largest_principal_cosine(a_part, b_part)


@dataclass(frozen=True)
class Region:
    """A sampling region: a ball, optionally restricted to a set."""

    center: np.ndarray
    radius: float
    within: ClosedSet | None = None

    def sample(self, n, seed):
        center = np.asarray(self.center, dtype=float)
        if self.within is None:
            return ball_points(center, self.radius, n, seed)
        return on_set_points(self.within, center, self.radius, n, seed)


def verify_coercivity(op, sol: SolutionSet, lam, region: Region, samples=512, seed=0):
    """Worst sampled margin of ``|x - T x| >= lam * dist(x, S)``.

    A non-negative return certifies the coercivity hypothesis on the sample;
    points of the solution set contribute a zero margin.
    """
    X = region.sample(samples, seed)
    worst = math.inf
    for x in X:
        step = float(np.linalg.norm(x - op.step(x)))
        worst = min(worst, step - lam * sol.distance(x))
    return float(worst)


@dataclass
class RegularityReport:
    """Estimated constants plus the rates they predict.

    ``predicted_rate_map`` is a per-cycle factor (one full alternating
    projection), ``predicted_rate_dr`` a per-step factor.  Either may exceed
    one, in which case the matching ``*_certified`` flag is False and the
    value only signals "no guarantee".  ``inflation`` records the safety
    factor that was applied to the estimated constants.
    """

    eps_a: float
    eps_b: float
    delta: float
    kappa: float
    gamma: float
    c: float
    eps_tilde_map: float
    eps_tilde_dr: float
    eta: float
    predicted_rate_map: float
    predicted_rate_dr: float
    regime: str
    map_certified: bool
    dr_certified: bool
    inflation: float = 1.0
    friedrichs_cos: float | None = None
    strongly_regular: bool | None = None

    def to_dict(self):
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, (bool, str)) or v is None:
                out[k] = v
            else:
                out[k] = float(v)
        return out


def predicted_rates(
    eps_a,
    eps_b,
    kappa,
    c,
    *,
    a_convex,
    b_convex,
    b_affine,
    delta,
    friedrichs_cos=None,
    strongly_regular=None,
    inflation=1.0,
):
    """Assemble a ``RegularityReport`` from raw constants.

    ``inflation > 1`` scales the estimated constants in the pessimistic
    direction (larger eps and kappa, larger c) before the rates are formed,
    compensating for the estimators being sampled lower bounds.
    """
    eps_a = float(eps_a) * inflation
    eps_b = float(eps_b) * inflation
    kappa = float(kappa) * inflation
    c = min(float(c) * inflation, 1.0)
    if kappa < 1.0:
        # the modulus is >= 1 by definition; sampling noise may undershoot
        kappa = 1.0
    gamma = 1.0 / kappa

    if a_convex and b_convex:
        regime = "both_convex"
        eps_map = 0.0
    elif a_convex or b_convex:
        regime = "one_convex"
        eps_map = eps_b if a_convex else eps_a
    else:
        regime = "both_nonconvex"
        eps_map = max(eps_a, eps_b)
    etm = eps_tilde_projector(eps_map)

    if regime == "both_convex":
        rate_map = 1.0 - gamma**2
        map_ok = rate_map < 1.0
    elif regime == "one_convex":
        rate_map = math.sqrt(max(1.0 - gamma**2 + etm, 0.0)) * math.sqrt(1.0 - gamma**2)
        cond = (1.0 - gamma**2) < 1e-15 or etm <= (2.0 * gamma - gamma**2) / (1.0 - gamma**2)
        map_ok = cond and rate_map < 1.0
    else:
        rate_map = 1.0 - gamma**2 + etm
        map_ok = etm <= gamma**2 and rate_map < 1.0

    etd = eps_tilde_douglas_rachford(eps_a, eps_b)
    eta = (1.0 - c) / kappa**2
    radicand = 1.0 + etd - eta
    rate_dr = math.sqrt(max(radicand, 0.0))
    dr_ok = bool(b_affine and c < 1.0 and radicand < 1.0 and radicand >= 0.0)

    return RegularityReport(
        eps_a=eps_a,
        eps_b=eps_b,
        delta=float(delta),
        kappa=kappa,
        gamma=gamma,
        c=c,
        eps_tilde_map=etm,
        eps_tilde_dr=etd,
        eta=eta,
        predicted_rate_map=rate_map,
        predicted_rate_dr=rate_dr,
        regime=regime,
        map_certified=bool(map_ok),
        dr_certified=dr_ok,
        inflation=float(inflation),
        friedrichs_cos=friedrichs_cos,
        strongly_regular=strongly_regular,
    )
