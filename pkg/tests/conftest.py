"""Shared fixtures and independent test oracles.

The oracles here deliberately avoid the production code paths they check:
overlap via segment crossings and containment, Delaunay via empty-circle
enumeration, lower hulls via brute-force supporting planes, and a second
advancing-front enumerator with a different branch order.
"""

import itertools
import random
from fractions import Fraction

import pytest

from hyperflip import (
    Hypertriangulation,
    LabeledTriangle,
    PointConfig,
    genericity,
)
from hyperflip.geometry import (
    orientation,
    point_in_triangle,
    segments_properly_cross,
)

Q4_COORDS = [(0, 0), (6, 0), (7, 5), (1, 6)]
T4_COORDS = [(0, 0), (6, 0), (3, 6), (3, 2)]


@pytest.fixture
def q4():
    return PointConfig.from_coords(Q4_COORDS)


@pytest.fixture
def t4():
    return PointConfig.from_coords(T4_COORDS)


def q4_level2_fixture(config: PointConfig) -> Hypertriangulation:
    return Hypertriangulation(
        config.level(2),
        [
            LabeledTriangle.make((1, 2), (2, 3), (1, 3)),
            LabeledTriangle.make((2, 3), (3, 4), (1, 3)),
            LabeledTriangle.make((3, 4), (1, 4), (1, 3)),
            LabeledTriangle.make((1, 4), (1, 2), (1, 3)),
        ],
    )


def random_strongly_generic(rng: random.Random, n: int, k: int = 2, box: int = 60,
                            require_interior: bool = False,
                            convex: bool = False) -> PointConfig:
    """Rejection-sample an integer configuration with the requested shape."""
    while True:
        coords = set()
        while len(coords) < n:
            coords.add((rng.randint(0, box), rng.randint(0, box)))
        config = PointConfig.from_coords(sorted(coords))
        if not genericity(config, k).strongly_generic:
            continue
        hull = len(config.hull_indices())
        if require_interior and hull == n:
            continue
        if convex and hull != n:
            continue
        return config


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def oracle_triangles_overlap(t1, t2) -> bool:
    """Open-interior intersection via crossings, containment and midpoints."""
    for a, b in _edges(t1):
        for c, d in _edges(t2):
            if segments_properly_cross(a, b, c, d):
                return True
    for p in t1:
        if point_in_triangle(p, *t2) == "inside":
            return True
    for p in t2:
        if point_in_triangle(p, *t1) == "inside":
            return True
    # Shared-boundary configurations: probe edge midpoints and the centroid.
    for tri, other in ((t1, t2), (t2, t1)):
        probes = [
            (a + b) * Fraction(1, 2) for a, b in _edges(tri)
        ] + [(tri[0] + tri[1] + tri[2]) * Fraction(1, 3)]
        for p in probes:
            if (
                point_in_triangle(p, *tri) == "inside"
                and point_in_triangle(p, *other) == "inside"
            ):
                return True
    return False


def _edges(t):
    return ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))


def oracle_delaunay_triangles(config: PointConfig):
    """All triangles with empty circumcircles, by brute enumeration."""
    out = []
    n = config.n
    for i, j, l in itertools.combinations(range(1, n + 1), 3):
        a, b, c = config.point(i), config.point(j), config.point(l)
        if orientation(a, b, c) == 0:
            continue
        sign = orientation(a, b, c)
        empty = True
        for m in range(1, n + 1):
            if m in (i, j, l):
                continue
            if sign * config.incircle(i, j, l, m) > 0:
                empty = False
                break
        if empty:
            out.append(LabeledTriangle.make((i,), (j,), (l,)))
    return frozenset(out)


def oracle_lower_hull_faces(level, heights):
    """Brute-force supporting-plane enumeration of the lifted lower hull."""
    from hyperflip.geometry import orient3d

    lifted = {
        lab: (level.point(lab).x, level.point(lab).y, heights.of_label(lab))
        for lab in level.labels
    }
    faces = set()
    for a, b, c in itertools.combinations(level.labels, 3):
        if level.orient(a, b, c) == 0:
            continue
        if level.orient(a, b, c) < 0:
            b, c = c, b
        on = []
        supporting = True
        for s in level.labels:
            if s in (a, b, c):
                on.append(s)
                continue
            side = orient3d(lifted[a], lifted[b], lifted[c], lifted[s])
            if side < 0:
                supporting = False
                break
            if side == 0:
                on.append(s)
        if supporting:
            faces.add(tuple(sorted(on)))
    return sorted(faces)


def oracle_enumerate_all(config: PointConfig, k: int):
    """Second advancing-front enumerator: fresh front per call, reversed order.

    Recomputes the uncovered boundary from the placed triangles at every
    node, always fills the LARGEST open edge, and tries candidates in
    reverse; uses the segment-based overlap oracle for attachability.
    """
    level = config.level(k)
    labels = level.labels
    hull = level.hull_labels()
    hull_edges = [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]
    results = {}

    def realized(tri):
        return tuple(level.point(lab) for lab in _ccw(tri))

    def _ccw(tri):
        a, b, c = tri
        return (a, b, c) if level.orient(a, b, c) > 0 else (a, c, b)

    def boundary(placed):
        front = set(hull_edges)
        for tri in placed:
            for x, y in _tri_edges(_ccw(tri.labels)):
                if (x, y) in front:
                    front.discard((x, y))
                else:
                    front.add((y, x))
        return front

    def _tri_edges(t):
        return ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))

    def recurse(placed):
        front = boundary(placed)
        if not front:
            key = frozenset(placed)
            results[key] = Hypertriangulation(level, key)
            return
        u, v = max(front)
        for c in sorted(labels, reverse=True):
            if c in (u, v) or level.orient(u, v, c) <= 0:
                continue
            try:
                tri = LabeledTriangle.make(u, v, c)
            except Exception:
                continue
            r = realized(tri.labels)
            if any(
                oracle_triangles_overlap(r, realized(other.labels))
                for other in placed
            ):
                continue
            recurse(placed + [tri])

    recurse([])
    return sorted(results.values(), key=lambda t: sorted(x.key for x in t.triangles).__repr__())


def polygon_area(points) -> Fraction:
    total = Fraction(0)
    m = len(points)
    for i in range(m):
        total += points[i].cross(points[(i + 1) % m])
    return total / 2
