"""Ball-swept polytopes and the support geometry of background problems.

Every domain needed here (balls, intervals, hulls of translated balls,
boxes) is a convex hull of finitely many vertices fattened by a radius.
Distances then decompose as polytope distance minus the radii, and the
polytope part reduces to a minimum-norm point over a finite Minkowski
difference, computed by a Gilbert-Johnson-Keerthi style iteration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

STRICT_TOL = 1e-10  # numerical proxy for the strict inequalities of open domains


class ConvexBody:
    """hull(vertices) Minkowski-expanded by ``radius`` (>= 0)."""

    __slots__ = ("dim", "vertices", "radius")

    def __init__(self, vertices, radius: float = 0.0):
        verts = [tuple(float(c) for c in v) for v in vertices]
        if not verts:
            raise ValueError("a body needs at least one vertex")
        dim = len(verts[0])
        if dim < 1 or any(len(v) != dim for v in verts):
            raise ValueError("inconsistent vertex dimensions")
        radius = float(radius)
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        # exact duplicates are redundant for every computation below
        self.vertices = tuple(dict.fromkeys(verts))
        self.dim = dim
        self.radius = radius

    @classmethod
    def ball(cls, center, radius: float) -> "ConvexBody":
        center = (center,) if isinstance(center, (int, float)) else tuple(center)
        return cls([center], radius)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "ConvexBody":
        if not lo < hi:
            raise ValueError("interval needs lo < hi")
        return cls([(float(lo),), (float(hi),)], 0.0)

    @classmethod
    def box(cls, lo_corner, hi_corner) -> "ConvexBody":
        lo = tuple(float(c) for c in lo_corner)
        hi = tuple(float(c) for c in hi_corner)
        corners = [
            tuple(hi[j] if mask >> j & 1 else lo[j] for j in range(len(lo)))
            for mask in range(1 << len(lo))
        ]
        return cls(corners, 0.0)

    def translated(self, y) -> "ConvexBody":
        y = (y,) if isinstance(y, (int, float)) else tuple(y)
        return ConvexBody([tuple(c + float(t) for c, t in zip(v, y)) for v in self.vertices],
                          self.radius)

    def negated(self) -> "ConvexBody":
        return ConvexBody([tuple(-c for c in v) for v in self.vertices], self.radius)

    def scale_estimate(self) -> float:
        return max(
            1.0,
            self.radius + max(max(abs(c) for c in v) for v in self.vertices),
        )

    def __repr__(self):
        return f"ConvexBody(vertices={list(self.vertices)!r}, radius={self.radius})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices],
                "radius": self.radius}

    @classmethod
    def from_json(cls, obj: dict) -> "ConvexBody":
        return cls(obj["vertices"], obj.get("radius", 0.0))


# --- minimum-norm point over a finite point set ------------------------------

def _simplex_min_norm(P: np.ndarray, working: list[int]):
    """Min-norm point of hull(P[working]) by brute force over faces.

    Every nonempty subset is solved as an affine least-norm problem via its
    Gram system; infeasible (negative-weight) faces are skipped. Working
    sets stay tiny (at most d+2 points), so the enumeration is cheap.
    """
    best = None
    for r in range(1, len(working) + 1):
        for subset in itertools.combinations(working, r):
            V = P[list(subset)]
            k = len(subset)
            if k == 1:
                lam = np.array([1.0])
            else:
                G = V @ V.T
                A = np.zeros((k + 1, k + 1))
                A[:k, :k] = G
                A[:k, k] = 1.0
                A[k, :k] = 1.0
                b = np.zeros(k + 1)
                b[k] = 1.0
                try:
                    sol = np.linalg.solve(A, b)
                except np.linalg.LinAlgError:
                    continue
                lam = sol[:k]
                if np.any(lam < -1e-12):
                    continue
            x = lam @ V
            n2 = float(x @ x)
            if best is None or n2 < best[0]:
                best = (n2, x, [i for i, l in zip(subset, lam) if l > 1e-12] or list(subset))
    return best[1], best[2]


def min_norm_point(points) -> tuple[float, np.ndarray]:
    """Distance (and witness point) from the origin to hull(points)."""
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    scale = max(1.0, float(np.max(np.linalg.norm(P, axis=1), initial=0.0)))
    start = int(np.argmin(np.einsum("ij,ij->i", P, P)))
    working = [start]
    x = P[start]
    for _ in range(64 + 8 * len(P)):
        x, working = _simplex_min_norm(P, working)
        dots = P @ x
        s = int(np.argmin(dots))
        gap = float(x @ x) - float(dots[s])
        if gap <= 1e-13 * scale * scale:
            break
        if s in working:
            break
        working.append(s)
    return float(np.linalg.norm(x)), x


def hull_distance(vertices1, vertices2) -> float:
    """Distance between two polytopes via their Minkowski difference."""
    V1 = np.asarray(vertices1, dtype=float)
    V2 = np.asarray(vertices2, dtype=float)
    diffs = (V1[:, None, :] - V2[None, :, :]).reshape(-1, V1.shape[1])
    return min_norm_point(diffs)[0]


def point_hull_distance(point, vertices) -> float:
    V = np.asarray(vertices, dtype=float)
    p = np.asarray(point, dtype=float)
    return min_norm_point(V - p)[0]


def point_in_hull(point, vertices, tol: float = 1e-9) -> bool:
    return point_hull_distance(point, vertices) <= tol


# --- body-level operations ----------------------------------------------------

def hull_of_translates(base: ConvexBody, offsets) -> ConvexBody:
    """ch of the union of translates base+y: for a convex base this is the
    base Minkowski-added to ch(offsets), so the vertex set is {v + y}."""
    offsets = list(offsets)
    if not offsets:
        raise PreconditionError("no-remaining-offsets", "need at least one offset")
    verts = []
    for y in offsets:
        y = (y,) if isinstance(y, (int, float)) else tuple(y)
        for v in base.vertices:
            verts.append(tuple(c + float(t) for c, t in zip(v, y)))
    return ConvexBody(verts, base.radius)


def hull_union(b1: ConvexBody, b2: ConvexBody) -> ConvexBody:
    """ch(b1 u b2) for equal sweep radii (that keeps the result ball-swept)."""
    if b1.dim != b2.dim:
        raise ValueError("dimension mismatch")
    if abs(b1.radius - b2.radius) > STRICT_TOL:
        raise ValueError("hull of bodies with different radii is not ball-swept")
    return ConvexBody(list(b1.vertices) + list(b2.vertices), b1.radius)


def distance(b1: ConvexBody, b2: ConvexBody) -> float:
    """dist(hull1, hull2) - r1 - r2, clamped at zero. Closed form in d=1."""
    if b1.dim != b2.dim:
        raise ValueError("dimension mismatch")
    if b1.dim == 1:
        lo1 = min(v[0] for v in b1.vertices) - b1.radius
        hi1 = max(v[0] for v in b1.vertices) + b1.radius
        lo2 = min(v[0] for v in b2.vertices) - b2.radius
        hi2 = max(v[0] for v in b2.vertices) + b2.radius
        return max(0.0, lo2 - hi1, lo1 - hi2)
    gap = hull_distance(b1.vertices, b2.vertices) - b1.radius - b2.radius
    return max(0.0, gap)


def diameter(b: ConvexBody) -> float:
    """Max pairwise vertex distance plus 2*radius."""
    best = 0.0
    for v, w in itertools.combinations(b.vertices, 2):
        best = max(best, math.dist(v, w))
    return best + 2.0 * b.radius


def contains_point(body: ConvexBody, x, tol: float = 1e-9) -> bool:
    """Membership in the open body, with a strictness margin of ``tol``.

    Positive-radius bodies: hull distance strictly below radius. Thin
    bodies (radius ~ 0): in d=1 the open interval; otherwise an interior
    probe that requires axis-neighborhood points to stay on the hull.
    """
    x = (x,) if isinstance(x, (int, float)) else tuple(float(c) for c in x)
    if len(x) != body.dim:
        raise ValueError("dimension mismatch")
    if body.dim == 1:
        lo = min(v[0] for v in body.vertices) - body.radius
        hi = max(v[0] for v in body.vertices) + body.radius
        return lo + tol < x[0] < hi - tol
    d = point_hull_distance(x, body.vertices)
    if body.radius > tol:
        return d < body.radius - tol
    if d > tol:
        return False
    eps = 1e-6 * body.scale_estimate()
    for j in range(body.dim):
        for sgn in (-1.0, 1.0):
            probe = list(x)
            probe[j] += sgn * eps
            if point_hull_distance(probe, body.vertices) > tol:
                return False
    return True


def body_symmetric(b: ConvexBody, tol: float = 1e-9) -> bool:
    """Is the body equal to its negation? Since negation is involutive,
    hull(-V) inside hull(V) already forces equality, so checking each
    negated vertex against the hull decides."""
    return all(
        point_in_hull(tuple(-c for c in v), b.vertices, tol) for v in b.vertices
    )


def lattice_points_inside(body: ConvexBody, tol: float = 1e-9, cap: int = 1_000_000):
    """Integer points of the open body, by scanning the bounding box."""
    los, his = [], []
    total = 1
    for j in range(body.dim):
        lo = min(v[j] for v in body.vertices) - body.radius
        hi = max(v[j] for v in body.vertices) + body.radius
        a, b = math.ceil(lo - tol), math.floor(hi + tol)
        los.append(a)
        his.append(b)
        total *= max(0, b - a + 1)
    if total > cap:
        raise ValueError("bounding box too large to scan")
    pts = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(los, his))):
        if contains_point(body, p, tol):
            pts.append(p)
    return pts


@dataclass(frozen=True)
class Problem3Report:
    """Separation report for a background/candidate domain pair."""

    R: float
    diam: float
    ok: bool
    lattice_ok: bool | None
    reason: str | None

    def certificate(self) -> dict:
        return {
            "R": self.R,
            "diam": self.diam,
            "lattice_ok": self.lattice_ok,
            "reason": self.reason,
        }


def check_problem3_geometry(D0: ConvexBody, D: ConvexBody,
                            discrete: bool = False) -> Problem3Report:
    """The regime where background non-uniqueness can live: 0 < R < diam(D),
    with both domains meeting the lattice in discrete mode."""
    R = distance(D, D0)
    dia = diameter(D)
    reason = None
    ok = True
    if R <= STRICT_TOL:
        ok, reason = False, "domains touch or overlap"
    elif R >= dia - STRICT_TOL:
        ok, reason = False, "uniqueness regime"
    lattice_ok = None
    if discrete:
        lattice_ok = bool(lattice_points_inside(D0)) and bool(lattice_points_inside(D))
        if ok and not lattice_ok:
            ok, reason = False, "a domain misses the lattice"
    return Problem3Report(R=R, diam=dia, ok=ok, lattice_ok=lattice_ok, reason=reason)


def _offset_tuple(y):
    return (float(y),) if isinstance(y, (int, float)) else tuple(float(c) for c in y)


def _offset_in(y, offsets, tol: float = 1e-9) -> bool:
    return any(all(abs(a - b) <= tol for a, b in zip(y, z)) for z in offsets)


def reference_separation(B: ConvexBody, offsets, y_star) -> float:
    """Distance between B+y* and ch(union of B+y over remaining offsets).

    The remaining offsets are (T u -T) minus y*; both y* and -y* must belong
    to T. Empty remainders are rejected: the candidate domain would be empty.
    """
    offs = [_offset_tuple(y) for y in offsets]
    ys = _offset_tuple(y_star)
    neg_ys = tuple(-c for c in ys)
    if not _offset_in(ys, offs):
        raise PreconditionError("offset-not-in-taps", f"{y_star} is not a tap offset")
    if not _offset_in(neg_ys, offs):
        raise PreconditionError(
            "reflected-offset-not-in-taps", f"{tuple(neg_ys)} is not a tap offset"
        )
    sym = {o for o in offs} | {tuple(-c for c in o) for o in offs}
    remaining = [o for o in sorted(sym) if any(abs(a - b) > 1e-9 for a, b in zip(o, ys))]
    if not remaining:
        raise PreconditionError("no-remaining-offsets",
                                "every offset equals y*; the candidate domain is empty")
    D0 = B.translated(ys)
    D = hull_of_translates(B, remaining)
    return distance(D0, D)


def reference_separated(B: ConvexBody, offsets, y_star, tol: float = STRICT_TOL) -> bool:
    return reference_separation(B, offsets, y_star) > tol


def offsets_shift_asymmetric(offsets, y_star, tol: float = 1e-9) -> bool:
    """No translate z satisfies T = -T + z, certified geometrically.

    Applicable only when T != -T (z = 0 otherwise). The certificate is the
    hull exclusion y* not in ch((T u -T) \\ {y*}), which any separated
    reference configuration forces; a symmetric-offset input is rejected as
    a precondition violation.
    """
    offs = [_offset_tuple(y) for y in offsets]
    ys = _offset_tuple(y_star)
    neg = [tuple(-c for c in o) for o in offs]
    symmetric = all(_offset_in(o, neg, tol) for o in offs)
    if symmetric:
        raise PreconditionError("offsets-symmetric", "T = -T, so z = 0 gives T = -T + z")
    if not _offset_in(ys, offs) or not _offset_in(tuple(-c for c in ys), offs):
        raise PreconditionError("offset-not-in-taps",
                                "y* and -y* must both be tap offsets")
    sym = {o for o in offs} | {tuple(o) for o in neg}
    remaining = [o for o in sorted(sym) if any(abs(a - b) > tol for a, b in zip(o, ys))]
    if not remaining:
        raise PreconditionError("no-remaining-offsets", "nothing remains besides y*")
    if point_in_hull(ys, remaining, tol):
        raise PreconditionError(
            "separation-not-certified",
            "y* lies in the hull of the remaining offsets; the separated "
            "reference configuration this argument needs cannot exist",
        )
    return True


def shift_symmetry_candidates(offsets) -> list[tuple]:
    """Exhaustive oracle helper: all z with T = -T + z must satisfy
    z = t + s for offsets t, s, so this finite list covers every candidate."""
    offs = [_offset_tuple(y) for y in offsets]
    out = []
    for t in offs:
        for s in offs:
            z = tuple(a + b for a, b in zip(t, s))
            if not _offset_in(z, out, 1e-12):
                out.append(z)
    return out


def offsets_equal_negated_shifted(offsets, z, tol: float = 1e-9) -> bool:
    """Does T = -T + z hold exactly (up to tol)?"""
    offs = [_offset_tuple(y) for y in offsets]
    image = [tuple(-c + zc for c, zc in zip(o, z)) for o in offs]
    return all(_offset_in(o, image, tol) for o in offs) and all(
        _offset_in(o, offs, tol) for o in image
    )
