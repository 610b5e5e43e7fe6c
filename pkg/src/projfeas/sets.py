"""Closed-set descriptors with exact distances, projectors, reflectors and
analytic normal cones.

Projectors may be multi-valued on the nonconvex variants.  Every projection
returns the complete finite branch set together with one deterministic
``selected`` branch, so iterations are reproducible: ties are broken by the
lexicographically smallest coordinate vector, and for unions of subspaces by
the lowest frame index first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import AffineFrame, as_point, complement_basis

MEMBERSHIP_TOL = 1e-9   # iterates land on sets only up to floating error
TIE_TOL = 1e-10         # branch distances within this slack count as tied
CENTER_TOL = 1e-13      # relative radius below which a point sits at a sphere center

INFINITE = math.inf


@dataclass(frozen=True)
class ProjectionOutcome:
    """Result of projecting a point onto a set.

    ``branches`` lists all best-approximation points when there are finitely
    many; ``branch_count`` is ``math.inf`` for the sphere-center singularity,
    in which case ``branches`` holds only the canonical representative.
    """

    selected: np.ndarray
    branches: tuple
    branch_count: float
    distance: float

    def reflected(self, x):
        """Outcome of ``2p - x`` over every branch; keeps the projection distance."""
        refl = tuple(2.0 * p - x for p in self.branches)
        return ProjectionOutcome(
            selected=2.0 * self.selected - x,
            branches=refl,
            branch_count=self.branch_count,
            distance=self.distance,
        )


def _lex_smaller(p, q):
    for a, b in zip(p, q):
        if a < b - 1e-15:
            return True
        if a > b + 1e-15:
            return False
    return False


def _select_ties(candidates, tie="lex"):
    """Deterministic outcome from (point, distance) candidates.

    Keeps every global minimizer within ``TIE_TOL`` slack.  Tie rule "lex"
    selects the lexicographically smallest branch; "order" selects the first
    candidate in input order (unions pass frames lowest index first).
    """
    dists = np.array([d for _, d in candidates])
    dmin = float(dists.min())
    window = TIE_TOL * max(1.0, dmin)
    kept = []
    for p, d in candidates:
        if d <= dmin + window:
            if not any(np.linalg.norm(p - q) <= 1e-12 * max(1.0, dmin) for q in kept):
                kept.append(p)
    selected = kept[0]
    if tie == "lex":
        for p in kept[1:]:
            if _lex_smaller(p, selected):
                selected = p
    return ProjectionOutcome(
        selected=selected,
        branches=tuple(kept),
        branch_count=len(kept),
        distance=dmin,
    )


@dataclass(frozen=True)
class NormalCone:
    """Limiting normal cone at a point, as a union of components.

    ``rays`` is a (m, dim) array of unit generators of one-sided rays;
    ``subspaces`` is a tuple of orthonormal row-bases whose full spans belong
    to the cone (the normal space of an affine set, the radial line of a
    sphere).  The zero cone has no components.
    """

    rays: np.ndarray
    subspaces: tuple

    @property
    def is_zero(self):
        return self.rays.shape[0] == 0 and len(self.subspaces) == 0

    def unit_directions(self):
        """All ray generators plus +/- each subspace basis vector."""
        out = [self.rays] if self.rays.shape[0] else []
        for W in self.subspaces:
            out.append(W)
            out.append(-W)
        if not out:
            return np.zeros((0, self.rays.shape[1]))
        return np.vstack(out)


def _cone(dim, rays=(), subspaces=()):
    R = np.vstack(rays) if len(rays) else np.zeros((0, dim))
    return NormalCone(rays=R, subspaces=tuple(subspaces))


class ClosedSet:
    """Base class: a nonempty closed subset of Euclidean space."""

    dim: int

    def distance(self, x):
        return self.project(x).distance

    def distance_many(self, X):
        X = np.asarray(X, dtype=float)
        return np.array([self.distance(x) for x in X])

    def project(self, x) -> ProjectionOutcome:
        raise NotImplementedError

    def reflect(self, x) -> ProjectionOutcome:
        """All branches of ``2 P(x) - x``."""
        x = as_point(x, self.dim)
        return self.project(x).reflected(x)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return self.distance(x) <= tol

    def proximal_normals(self, x, max_samples=64):
        """Unit generators of the proximal normal cone at ``x`` (in the set).

        An empty list means the zero cone.  Raises if ``x`` is not in the set
        to ``MEMBERSHIP_TOL``.
        """
        raise NotImplementedError

    def limiting_normals(self, x) -> NormalCone:
        """Limiting normal cone at ``x``, assembled from nearby proximal cones."""
        raise NotImplementedError

    def is_convex(self):
        return False

    def is_affine(self):
        return False

    def _check_member(self, x):
        x = as_point(x, self.dim)
        if not self.contains(x):
            raise ValueError(f"point {x} is not in the set (tol {MEMBERSHIP_TOL})")
        return x

    def to_dict(self):
        raise NotImplementedError

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self.to_dict()))


class AffineSubspace(ClosedSet):
    """Affine subspace given by an orthonormal frame."""

    def __init__(self, frame: AffineFrame):
        self.frame = frame
        self.dim = frame.dim_ambient

    @classmethod
    def from_span(cls, offset, vectors):
        return cls(AffineFrame.from_span(offset, vectors))

    def project(self, x):
        x = as_point(x, self.dim)
        p = self.frame.project(x)
        return ProjectionOutcome(p, (p,), 1, float(np.linalg.norm(x - p)))

    def distance(self, x):
        x = as_point(x, self.dim)
        return float(np.linalg.norm(x - self.frame.project(x)))

    def distance_many(self, X):
        X = np.asarray(X, dtype=float)
        return np.linalg.norm(X - self.frame.project_many(X), axis=-1)

    def proximal_normals(self, x, max_samples=64):
        self._check_member(x)
        comp = complement_basis(self.frame.basis, self.dim)
        gens = np.vstack([comp, -comp]) if comp.shape[0] else comp
        return [g for g in gens[:max_samples]]

    def limiting_normals(self, x):
        self._check_member(x)
        comp = complement_basis(self.frame.basis, self.dim)
        if comp.shape[0] == 0:
            return _cone(self.dim)
        return _cone(self.dim, subspaces=[comp])

    def is_convex(self):
        return True

    def is_affine(self):
        return True

    def to_dict(self):
        return {
            "variant": "affine",
            "offset": [float(v) for v in self.frame.offset],
            "basis": [[float(v) for v in row] for row in self.frame.basis],
        }


class Ball(ClosedSet):
    """Closed Euclidean ball."""

    def __init__(self, center, radius):
        self.center = as_point(center)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = self.center.shape[0]

    def distance(self, x):
        x = as_point(x, self.dim)
        return max(float(np.linalg.norm(x - self.center)) - self.radius, 0.0)

    def distance_many(self, X):
        X = np.asarray(X, dtype=float)
        return np.maximum(np.linalg.norm(X - self.center, axis=-1) - self.radius, 0.0)

    def project(self, x):
        x = as_point(x, self.dim)
        r = float(np.linalg.norm(x - self.center))
        if r <= self.radius:
            return ProjectionOutcome(x.copy(), (x.copy(),), 1, 0.0)
        p = self.center + (self.radius / r) * (x - self.center)
        return ProjectionOutcome(p, (p,), 1, r - self.radius)

    def proximal_normals(self, x, max_samples=64):
        x = self._check_member(x)
        r = float(np.linalg.norm(x - self.center))
        if r < self.radius - MEMBERSHIP_TOL:
            return []
        return [(x - self.center) / r]

    def limiting_normals(self, x):
        x = self._check_member(x)
        r = float(np.linalg.norm(x - self.center))
        if r < self.radius - MEMBERSHIP_TOL:
            return _cone(self.dim)
        return _cone(self.dim, rays=[(x - self.center) / r])

    def is_convex(self):
        return True

    def to_dict(self):
        return {
            "variant": "ball",
            "center": [float(v) for v in self.center],
            "radius": float(self.radius),
        }


class Sphere(ClosedSet):
    """Euclidean sphere (boundary only); the model nonconvex smooth set."""

    def __init__(self, center, radius):
        self.center = as_point(center)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = self.center.shape[0]

    def distance(self, x):
        x = as_point(x, self.dim)
        return abs(float(np.linalg.norm(x - self.center)) - self.radius)

    def distance_many(self, X):
        X = np.asarray(X, dtype=float)
        return np.abs(np.linalg.norm(X - self.center, axis=-1) - self.radius)

    def project(self, x):
        x = as_point(x, self.dim)
        r = float(np.linalg.norm(x - self.center))
        if r <= CENTER_TOL * max(1.0, self.radius):
            # the full sphere is nearest; return the canonical representative
            p = self.center.copy()
            p[0] += self.radius
            return ProjectionOutcome(p, (p,), INFINITE, self.radius)
        p = self.center + (self.radius / r) * (x - self.center)
        return ProjectionOutcome(p, (p,), 1, abs(r - self.radius))

    def proximal_normals(self, x, max_samples=64):
        x = self._check_member(x)
        u = (x - self.center) / float(np.linalg.norm(x - self.center))
        return [u, -u]

    def limiting_normals(self, x):
        x = self._check_member(x)
        u = (x - self.center) / float(np.linalg.norm(x - self.center))
        return _cone(self.dim, subspaces=[u.reshape(1, -1)])

    def to_dict(self):
        return {
            "variant": "sphere",
            "center": [float(v) for v in self.center],
            "radius": float(self.radius),
        }


class UnionOfSubspaces(ClosedSet):
    """Finite union of affine subspaces with a common ambient dimension."""

    def __init__(self, frames):
        frames = tuple(frames)
        if not frames:
            raise ValueError("union needs at least one frame")
        dims = {f.dim_ambient for f in frames}
        if len(dims) != 1:
            raise ValueError("frames have mixed ambient dimensions")
        self.frames = frames
        self.dim = dims.pop()

    @classmethod
    def cross(cls, dim=2):
        """Union of the coordinate axes (the sparse-signal model set)."""
        frames = [
            AffineFrame(np.zeros(dim), np.eye(dim)[i : i + 1]) for i in range(dim)
        ]
        return cls(frames)

    def distance(self, x):
        x = as_point(x, self.dim)
        return min(float(np.linalg.norm(x - f.project(x))) for f in self.frames)

    def distance_many(self, X):
        X = np.asarray(X, dtype=float)
        per = [np.linalg.norm(X - f.project_many(X), axis=-1) for f in self.frames]
        return np.min(np.vstack(per), axis=0)

    def project(self, x):
        x = as_point(x, self.dim)
        cands = []
        for f in self.frames:
            p = f.project(x)
            cands.append((p, float(np.linalg.norm(x - p))))
        return _select_ties(cands, tie="order")

    def _containing_frames(self, x, tol=MEMBERSHIP_TOL):
        return [f for f in self.frames if f.contains(x, tol)]

    def proximal_normals(self, x, max_samples=64):
        x = self._check_member(x)
        holding = self._containing_frames(x)
        if len(holding) != 1:
            # at a frame crossing the projector preimage collapses to the
            # point itself, so the proximal cone is the zero cone
            return []
        comp = complement_basis(holding[0].basis, self.dim)
        gens = np.vstack([comp, -comp]) if comp.shape[0] else comp
        return [g for g in gens[:max_samples]]

    def limiting_normals(self, x):
        x = self._check_member(x)
        subs = []
        for f in self._containing_frames(x):
            comp = complement_basis(f.basis, self.dim)
            if comp.shape[0]:
                subs.append(comp)
        return _cone(self.dim, subspaces=subs)

    def to_dict(self):
        return {
            "variant": "union",
            "frames": [
                {
                    "offset": [float(v) for v in f.offset],
                    "basis": [[float(v) for v in row] for row in f.basis],
                }
                for f in self.frames
            ],
        }


class KinkedRegion(ClosedSet):
    """The planar region below a boundary kinked at the origin.

    Points satisfy ``x2 <= -x1`` for ``x1 <= 0`` and ``x2 <= 0`` for
    ``x1 > 0``.  The complement is an open convex wedge, so the region has a
    reflex corner at the origin whose proximal normal cone is the zero cone
    while the limiting cone collects both edge normals.
    """

    EDGE_NEG_NORMAL = np.array([1.0, 1.0]) / np.sqrt(2.0)
    EDGE_POS_NORMAL = np.array([0.0, 1.0])

    def __init__(self):
        self.dim = 2

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = as_point(x, 2)
        if x[0] <= 0:
            return x[1] <= -x[0] + tol
        return x[1] <= tol

    def _boundary_candidates(self, x):
        # nearest points on the two closed boundary rays
        t = min((x[0] - x[1]) / 2.0, 0.0)
        cand_neg = np.array([t, -t])
        cand_pos = np.array([max(x[0], 0.0), 0.0])
        return [
            (cand_neg, float(np.linalg.norm(x - cand_neg))),
            (cand_pos, float(np.linalg.norm(x - cand_pos))),
        ]

    def distance(self, x):
        x = as_point(x, 2)
        if self.contains(x, tol=0.0):
            return 0.0
        return min(d for _, d in self._boundary_candidates(x))

    def distance_many(self, X):
        X = np.asarray(X, dtype=float)
        inside = np.where(X[:, 0] <= 0, X[:, 1] <= -X[:, 0], X[:, 1] <= 0)
        t = np.minimum((X[:, 0] - X[:, 1]) / 2.0, 0.0)
        d_neg = np.hypot(X[:, 0] - t, X[:, 1] + t)
        d_pos = np.hypot(np.minimum(X[:, 0], 0.0), X[:, 1])
        return np.where(inside, 0.0, np.minimum(d_neg, d_pos))

    def project(self, x):
        x = as_point(x, 2)
        if self.contains(x, tol=0.0):
            return ProjectionOutcome(x.copy(), (x.copy(),), 1, 0.0)
        return _select_ties(self._boundary_candidates(x), tie="lex")

    def proximal_normals(self, x, max_samples=64):
        x = self._check_member(x)
        on_neg = x[0] < 0 and abs(x[1] + x[0]) <= MEMBERSHIP_TOL
        on_pos = x[0] > 0 and abs(x[1]) <= MEMBERSHIP_TOL
        at_corner = float(np.linalg.norm(x)) <= MEMBERSHIP_TOL
        if at_corner:
            return []  # reflex corner: zero proximal cone
        if on_neg:
            return [self.EDGE_NEG_NORMAL.copy()]
        if on_pos:
            return [self.EDGE_POS_NORMAL.copy()]
        return []

    def limiting_normals(self, x):
        x = self._check_member(x)
        if float(np.linalg.norm(x)) <= MEMBERSHIP_TOL:
            return _cone(2, rays=[self.EDGE_NEG_NORMAL, self.EDGE_POS_NORMAL])
        rays = self.proximal_normals(x)
        return _cone(2, rays=rays)

    def to_dict(self):
        return {"variant": "kinked"}


class IntersectionSet(ClosedSet):
    """Intersection of member sets; membership and distance queries only.

    Projecting onto an intersection is exactly what the fixed-point algorithms
    avoid, so ``project`` raises.  ``distance`` is exact only when a member
    projection happens to land in every other member; otherwise a solution-set
    description with a closed form must be used.
    """

    def __init__(self, members):
        members = tuple(members)
        if not members:
            raise ValueError("intersection needs at least one member")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise ValueError("members have mixed ambient dimensions")
        self.members = members
        self.dim = dims.pop()

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return all(m.contains(x, tol) for m in self.members)

    def distance(self, x):
        x = as_point(x, self.dim)
        if self.contains(x):
            return 0.0
        best = None
        for m in self.members:
            p = m.project(x).selected
            if all(o.contains(p) for o in self.members):
                d = float(np.linalg.norm(x - p))
                best = d if best is None else min(best, d)
        if best is None:
            raise ValueError(
                "intersection distance is not decidable from member projections; "
                "use a solution set with an exact form"
            )
        return best

    def project(self, x):
        raise NotImplementedError(
            "projection onto an intersection is unsupported by design; "
            "run a feasibility algorithm on the members instead"
        )

    def proximal_normals(self, x, max_samples=64):
        raise NotImplementedError("normal cones of intersections are not provided")

    def limiting_normals(self, x):
        raise NotImplementedError("normal cones of intersections are not provided")

    def to_dict(self):
        return {"variant": "intersection", "members": [m.to_dict() for m in self.members]}


def set_from_dict(data):
    """Inverse of ``ClosedSet.to_dict`` (used by the config layer)."""
    variant = data.get("variant")
    if variant == "affine":
        return AffineSubspace.from_span(data["offset"], data["basis"])
    if variant == "ball":
        return Ball(data["center"], data["radius"])
    if variant == "sphere":
        return Sphere(data["center"], data["radius"])
    if variant == "union":
        frames = [AffineFrame.from_span(f["offset"], f["basis"]) for f in data["frames"]]
        return UnionOfSubspaces(frames)
    if variant == "kinked":
        return KinkedRegion()
    if variant == "intersection":
        return IntersectionSet([set_from_dict(m) for m in data["members"]])
    raise ValueError(f"unknown set variant {variant!r}")
