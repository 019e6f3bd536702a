"""The aging map between levels: triangle promotion, level-1 <-> level-2
constructions, star-convexity probing, and the overlap diagnostic.

A white triangle with labels I, J, K ages to the black triangle with labels
I|J, J|K, K|I one level up; a black triangle un-ages through pairwise
intersections.  Aging a whole level-1 hypertriangulation tiles the level-2
hull with the aged black triangles plus white gap triangulations; collapsing
inverts that construction.
"""

from __future__ import annotations

from .errors import GenericityError, InvalidHypertriangulation, PreconditionError
from .geometry import Point2, ear_clip, segment_hits_triangle, trace_regions
from .hypertriangulations import (
    Color,
    Hypertriangulation,
    LabeledTriangle,
    require_valid,
    validate,
)
from .points import PointConfig, genericity


def age_triangle(t: LabeledTriangle) -> LabeledTriangle:
    """White level-k triangle -> black level-(k+1) triangle via unions."""
    if t.color is not Color.WHITE:
        raise PreconditionError(f"can only age white triangles, {t.key} is black")
    a, b, c = (set(lab) for lab in t.labels)
    aged = LabeledTriangle.make(sorted(a | b), sorted(b | c), sorted(c | a))
    if aged.color is not Color.BLACK:
        raise AssertionError("aged triangle must be black")
    return aged


def unage_triangle(t: LabeledTriangle) -> LabeledTriangle:
    """Black level-k triangle -> white level-(k-1) triangle via intersections."""
    if t.color is not Color.BLACK:
        raise PreconditionError(f"can only un-age black triangles, {t.key} is white")
    a, b, c = (set(lab) for lab in t.labels)
    young = LabeledTriangle.make(sorted(a & b), sorted(b & c), sorted(c & a))
    if young.color is not Color.WHITE:
        raise AssertionError("un-aged triangle must be white")
    return young


def _require_strong(config: PointConfig, k: int):
    tier = genericity(config, k)
    if not tier.strongly_generic:
        raise GenericityError(
            f"aging needs strong genericity at level {k}: {tier.detail}",
            witness=tier.witness,
        )


def build_level2(config: PointConfig, t1: Hypertriangulation) -> Hypertriangulation:
    """The level-2 hypertriangulation whose black set is the aged level-1 set.

    The aged triangles are placed first; the remaining gaps of the level-2
    hull are traced and ear-clipped.  Every gap's vertices share one base
    index, so the filling triangles are all white.
    """
    if t1.k != 1:
        raise PreconditionError("build_level2 starts from a level-1 hypertriangulation")
    _require_strong(config, 2)
    require_valid(t1)
    level2 = config.level(2)
    blacks = [age_triangle(t) for t in t1.triangles]
    realized = []
    for tri in blacks:
        pts = [level2.point(lab) for lab in tri.labels]
        realized.append(tuple(pts))
    regions = trace_regions(level2.hull_polygon(), realized)
    triangles = set(blacks)
    for region in regions:
        labels = [level2.label_of_point(p) for p in region.vertices]
        shared = set(labels[0])
        for lab in labels[1:]:
            shared &= set(lab)
        if not shared:
            raise AssertionError(
                "gap vertices share no base index; aging hypothesis violated"
            )
        for a, b, c in ear_clip(region):
            tri = LabeledTriangle.make(
                level2.label_of_point(a),
                level2.label_of_point(b),
                level2.label_of_point(c),
            )
            if tri.color is not Color.WHITE:
                raise AssertionError("gap triangulation produced a non-white triangle")
            triangles.add(tri)
    return Hypertriangulation(level2, triangles)


def collapse_level2(u: Hypertriangulation) -> Hypertriangulation:
    """Un-age the black triangles of a valid level-2 hypertriangulation.

    The result is the unique level-1 hypertriangulation whose aging produced
    u's black set; a failing validation of the result means u violated a
    hypothesis and is reported with witnesses.
    """
    if u.k != 2:
        raise PreconditionError("collapse_level2 needs a level-2 hypertriangulation")
    config = u.config.base
    _require_strong(config, 2)
    level1 = config.level(1)
    triangles = [unage_triangle(b) for b in u.blacks]
    t1 = Hypertriangulation(level1, triangles)
    report = validate(t1)
    if not report.ok:
        raise InvalidHypertriangulation(report)
    return t1


def star_convexity_witness(u: Hypertriangulation, i: int, x: Point2) -> bool:
    """Probe the star-shape property of the white region of label i.

    True iff every triangle of u meeting the closed segment from x to twice
    the base point a_i belongs to that white region.  The probe point x must
    be interior to some triangle of the region, and a_i interior to the base
    hull.
    """
    config = u.config
    base = config.base
    hull_indices = set(base.hull_indices())
    if i in hull_indices:
        raise PreconditionError(f"base point {i} must be interior to the hull")
    region = [
        t for t in u.whites if all(i in lab for lab in t.labels)
    ]
    if not _interior_to_some(u, region, x):
        raise PreconditionError("probe point is not interior to the white region")
    target = base.point(i) * 2
    for tri in sorted(u.triangles):
        if segment_hits_triangle(x, target, u.realized(tri)):
            if tri not in region:
                return False
    return True


def _interior_to_some(u, triangles, x) -> bool:
    from .geometry import point_in_triangle

    for tri in triangles:
        a, b, c = u.realized(tri)
        if point_in_triangle(x, a, b, c) == "inside":
            return True
    return False


def aging_overlap(t: Hypertriangulation):
    """Pairs of white triangles whose aged images have intersecting interiors.

    Empty means the aged white set is a packing; level-1 inputs are always
    empty, but level-2 hypertriangulations of five points can already fail.
    """
    from .geometry import triangles_overlap

    if t.k > t.n - 2:
        raise PreconditionError("aging needs k <= n-2")
    base = t.config.base
    whites = sorted(t.whites)
    aged = []
    for tri in whites:
        up = age_triangle(tri)
        aged.append(tuple(base.sum_of(lab) for lab in up.labels))
    out = []
    for i in range(len(whites)):
        for j in range(i + 1, len(whites)):
            if triangles_overlap(aged[i], aged[j]):
                out.append((whites[i], whites[j]))
    return out
