"""Coherent hypertriangulations: lifted lower hulls, GKZ vectors, the exact
coherence test, and the aging chain check along a fixed height function.

Heights live on the base points; a label's height is the sum over its
indices.  Lifting every labeled sum to (x, y, height) and projecting the
lower hull of the lifted points back to the plane yields the coherent
subdivision for those heights; squared-norm heights give the (order-k)
Delaunay triangulation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import GenericityError, PreconditionError
from .geometry import orient3d, rational, signed_area2
from .hypertriangulations import (
    Hypertriangulation,
    LabeledTriangle,
    require_valid,
)
from .points import KFoldConfig, Label, PointConfig, genericity, label_text


@dataclass(frozen=True)
class HeightFunction:
    """Rational weights on the base points, indexed 1..n."""

    values: tuple[Fraction, ...]

    @classmethod
    def of(cls, values) -> "HeightFunction":
        return cls(tuple(rational(v) for v in values))

    @classmethod
    def squared_norms(cls, config: PointConfig) -> "HeightFunction":
        return cls(tuple(p.x * p.x + p.y * p.y for p in config.points))

    def at(self, i: int) -> Fraction:
        return self.values[i - 1]

    def of_label(self, label: Label) -> Fraction:
        return sum((self.values[i - 1] for i in label), Fraction(0))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class GkzVector:
    """Normalized area-weighted label-incidence vector; coordinates sum to k."""

    coords: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.coords, Fraction(0))


@dataclass(frozen=True)
class NonTriangularReport:
    """Lower-hull faces with more than three lifted points (non-generic h)."""

    faces: tuple[tuple[Label, ...], ...]

    def __str__(self):
        parts = [
            "{" + ", ".join(label_text(lab) for lab in f) + "}" for f in self.faces
        ]
        return f"non-triangular lower faces: {'; '.join(parts)}"


def _require_strong(config: PointConfig, k: int):
    tier = genericity(config, k)
    if not tier.strongly_generic:
        raise GenericityError(
            f"coherent construction needs strong genericity at level {k}: "
            f"{tier.detail}",
            witness=tier.witness,
        )


def _lift(level: KFoldConfig, h: HeightFunction):
    return {
        lab: (level.point(lab).x, level.point(lab).y, h.of_label(lab))
        for lab in level.labels
    }


def lower_hull_faces(level: KFoldConfig, h: HeightFunction):
    """Maximal lower-hull faces of the lifted points, as label tuples.

    Gift-wraps across shared edges starting from a hull edge of the
    projection; every face is verified against all points, so a wrapping
    mistake cannot slip through.  Faces are sets of all lifted points lying
    on the supporting plane.
    """
    lifted = _lift(level, h)
    labels = level.labels

    def plane_face(a: Label, b: Label, c: Label):
        """On-set of the plane through a, b, c, or None if not supporting."""
        if level.orient(a, b, c) < 0:
            a, b, c = a, c, b
        on = []
        for s in labels:
            if s in (a, b, c):
                on.append(s)
                continue
            side = orient3d(lifted[a], lifted[b], lifted[c], lifted[s])
            if side < 0:
                return None
            if side == 0:
                on.append(s)
        return tuple(sorted(on))

    hull = level.hull_labels()
    faces: set[tuple[Label, ...]] = set()
    seen_edges: set[tuple[Label, Label]] = set()
    queue: list[tuple[Label, Label]] = []

    def face_boundary_edges(face):
        """Directed boundary edges (projection hull) of a face's on-set."""
        pts = [level.point(lab) for lab in face]
        from .geometry import convex_hull

        cyc = convex_hull(pts)
        labs = [level.label_of_point(p) for p in cyc]
        return [(labs[i], labs[(i + 1) % len(labs)]) for i in range(len(labs))]

    start = _wrap_initial_face(level, lifted, hull, plane_face)
    faces.add(start)
    for e in face_boundary_edges(start):
        queue.append(e)
    hull_edge_set = level.hull_edges()
    while queue:
        a, b = queue.pop()
        key = (a, b) if a < b else (b, a)
        if key in seen_edges:
            continue
        seen_edges.add(key)
        if key in hull_edge_set:
            continue
        face = _wrap_across_edge(level, lifted, labels, b, a, plane_face)
        if face not in faces:
            faces.add(face)
            for e in face_boundary_edges(face):
                queue.append(e)
    return sorted(faces)


def _wrap_initial_face(level, lifted, hull, plane_face):
    a, b = hull[0], hull[1]
    return _wrap_across_edge(level, lifted, level.labels, a, b, plane_face)


def _wrap_across_edge(level, lifted, labels, a, b, plane_face):
    """The lower-hull face left of directed edge (a, b) in the projection."""
    best = None
    for s in labels:
        if s in (a, b) or level.orient(a, b, s) <= 0:
            continue
        if best is None:
            best = s
        elif orient3d(lifted[a], lifted[b], lifted[best], lifted[s]) < 0:
            best = s
    if best is None:
        raise GenericityError("no candidate on the uncovered side of a hull edge")
    face = plane_face(a, b, best)
    if face is None:
        raise AssertionError("gift-wrapped plane is not supporting")
    return face


def coherent_subdivision(config: PointConfig, k: int, h: HeightFunction):
    """Project the lower hull of the lifted level-k sums.

    Returns a valid Hypertriangulation when every lower face is a triangle,
    otherwise a NonTriangularReport listing the offending faces.
    """
    _require_strong(config, k)
    if len(h) != config.n:
        raise PreconditionError("height function length must match n")
    level = config.level(k)
    faces = lower_hull_faces(level, h)
    fat = [f for f in faces if len(f) != 3]
    if fat:
        return NonTriangularReport(tuple(sorted(fat)))
    triangles = [LabeledTriangle.make(*f) for f in faces]
    result = Hypertriangulation(level, triangles)
    require_valid(result)
    return result


def gkz(t: Hypertriangulation) -> GkzVector:
    """Exact fiber-polytope coordinates of a valid hypertriangulation."""
    require_valid(t)
    config = t.config
    hull_area = config.hull_polygon().area
    coords = [Fraction(0)] * t.n
    for tri in t.triangles:
        a, b, c = (config.point(lab) for lab in tri.labels)
        area = abs(signed_area2(a, b, c)) / 2
        share = area / 3
        for lab in tri.labels:
            for i in lab:
                coords[i - 1] += share
    return GkzVector(tuple(c / hull_area for c in coords))


@dataclass(frozen=True)
class CoherenceResult:
    coherent: bool
    witness: HeightFunction | None = None


def _gauge_indices(config: PointConfig) -> tuple[int, int, int]:
    from .geometry import orientation

    for i, j, l in itertools.combinations(range(1, config.n + 1), 3):
        if orientation(config.point(i), config.point(j), config.point(l)) != 0:
            return (i, j, l)
    raise GenericityError("all base points are collinear")


def is_coherent(t: Hypertriangulation) -> CoherenceResult:
    """Exact linear feasibility for a generating height function.

    Constraints: every interior edge folds strictly convexly, and every
    label not spanning the triangle that covers its point lifts strictly
    above that triangle's plane.  Strictness is normalized to slack >= 1 (the
    system is homogeneous once three gauge heights are pinned to zero), and a
    witness height function is returned on success.
    """
    require_valid(t)
    config = t.config
    base = config.base
    n = base.n
    gauge = _gauge_indices(base)
    free = [i for i in range(1, n + 1) if i not in gauge]
    col = {i: j for j, i in enumerate(free)}

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def add_constraint(p: Label, q: Label, r: Label, s: Label):
        """Lifted point of s strictly above plane of (p, q, r): value >= 1."""
        if config.orient(p, q, r) < 0:
            q, r = r, q
        pp, pq, pr, ps = (config.point(lab) for lab in (p, q, r, s))
        ax, ay = pq.x - pp.x, pq.y - pp.y
        bx, by = pr.x - pp.x, pr.y - pp.y
        cx, cy = ps.x - pp.x, ps.y - pp.y
        ca = bx * cy - by * cx
        cb = -(ax * cy - ay * cx)
        cc = ax * by - ay * bx
        coeff = [Fraction(0)] * (n + 1)

        def bump(lab, weight):
            for i in lab:
                coeff[i] += weight

        bump(q, ca)
        bump(p, -ca)
        bump(r, cb)
        bump(p, -cb)
        bump(s, cc)
        bump(p, -cc)
        row = [coeff[i] for i in free]
        constant = sum(coeff[i] for i in gauge) * 0  # gauge heights are zero
        rows.append(row)
        rhs.append(Fraction(1) - constant)

    for edge, tris in t.edge_map().items():
        if len(tris) != 2:
            continue
        p, q = edge
        r = next(iter(set(tris[0].labels) - set(edge)))
        s = next(iter(set(tris[1].labels) - set(edge)))
        add_constraint(p, q, r, s)

    used = t.used_labels()
    for lab in config.labels:
        if lab in used:
            continue
        for tri in sorted(t.triangles):
            a, b, c = tri.labels
            if config.orient(a, b, c) < 0:
                b, c = c, b
            if (
                config.orient(a, b, lab) > 0
                and config.orient(b, c, lab) > 0
                and config.orient(c, a, lab) > 0
            ):
                add_constraint(a, b, c, lab)
                break

    from .lp import solve_feasibility

    solution = solve_feasibility(rows, rhs, len(free))
    if solution is None:
        return CoherenceResult(False, None)
    heights = [Fraction(0)] * n
    for i, value in zip(free, solution):
        heights[i - 1] = value
    return CoherenceResult(True, HeightFunction(tuple(heights)))


@dataclass(frozen=True)
class AgingChainResult:
    applicable: bool
    ok: bool
    reason: str = ""


def coherent_aging_check(config: PointConfig, k: int, h: HeightFunction) -> AgingChainResult:
    """Check the aging identities along the coherent chain of one h.

    With T the coherent level-k hypertriangulation for h, verifies
    B(level k+1) = aged whites of level k, and B(level k) = aged whites of
    level k-1 (each side only where the level exists).  Skips, with a reason,
    whenever any involved level is non-triangular for h.
    """
    from .aging import age_triangle

    levels = {}
    for kk in (k - 1, k, k + 1):
        if not 1 <= kk <= config.n - 1:
            continue
        try:
            result = coherent_subdivision(config, kk, h)
        except GenericityError as exc:
            return AgingChainResult(
                False, False, f"level {kk} is not strongly generic: {exc}"
            )
        if isinstance(result, NonTriangularReport):
            return AgingChainResult(
                False, False, f"level {kk} is non-triangular for these heights"
            )
        levels[kk] = result

    def aged_whites(t: Hypertriangulation) -> frozenset[LabeledTriangle]:
        return frozenset(age_triangle(w) for w in t.whites)

    ok = True
    if k + 1 in levels:
        ok = ok and levels[k + 1].blacks == aged_whites(levels[k])
    if k - 1 in levels:
        ok = ok and levels[k].blacks == aged_whites(levels[k - 1])
    return AgingChainResult(True, ok)
