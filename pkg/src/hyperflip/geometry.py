"""Exact rational planar geometry kernel.

All predicates work on arbitrary-precision rationals (`fractions.Fraction`),
so every sign test is decided, never approximated.  No floating point is used
anywhere in this module.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError, RegionTraceError

# A rational number in lowest terms with positive denominator.  The stdlib
# Fraction already guarantees both invariants plus value equality.
Rational = Fraction

CCW = 1
COLLINEAR = 0
CW = -1


def rational(value) -> Fraction:
    """Coerce ints, strings ("3", "-7/2", "1.25") or Fractions to Rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise GeometryError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Canonical text form: "3" or "-7/2"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Point2:
    """A point of the plane with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __mul__(self, s) -> "Point2":
        s = rational(s)
        return Point2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def cross(self, other: "Point2") -> Fraction:
        return self.x * other.y - self.y * other.x

    def __repr__(self):
        return f"({format_rational(self.x)}, {format_rational(self.y)})"


def pt(x, y) -> Point2:
    return Point2(rational(x), rational(y))


def _sign(value) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def orientation(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of the determinant of (q-p, r-p): CCW, CW or COLLINEAR."""
    return _sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def signed_area2(p: Point2, q: Point2, r: Point2) -> Fraction:
    """Twice the signed area of triangle pqr (positive iff CCW)."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def triangle_area(p: Point2, q: Point2, r: Point2) -> Fraction:
    return abs(signed_area2(p, q, r)) / 2


def in_circle(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    """Sign of the lifted-paraboloid determinant.

    Positive iff d lies strictly inside the circle through a, b, c when
    (a, b, c) is counterclockwise; the sign flips with the orientation.
    Zero iff the four points are cocircular (or the circle degenerates).
    """
    adx, ady = a.x - d.x, a.y - d.y
    bdx, bdy = b.x - d.x, b.y - d.y
    cdx, cdy = c.x - d.x, c.y - d.y
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    det = (
        ad * (bdx * cdy - bdy * cdx)
        - bd * (adx * cdy - ady * cdx)
        + cd * (adx * bdy - ady * bdx)
    )
    return _sign(det)


def orient3d(p, q, r, s) -> int:
    """Sign of the 3x3 determinant of (q-p, r-p, s-p) for lifted 3D points.

    Points are (x, y, z) triples of rationals.  With (p, q, r) counter-
    clockwise in the xy-projection, positive means s lies above the plane.
    """
    ax, ay, az = q[0] - p[0], q[1] - p[1], q[2] - p[2]
    bx, by, bz = r[0] - p[0], r[1] - p[1], r[2] - p[2]
    cx, cy, cz = s[0] - p[0], s[1] - p[1], s[2] - p[2]
    det = (
        az * (bx * cy - by * cx)
        - bz * (ax * cy - ay * cx)
        + cz * (ax * by - ay * bx)
    )
    return _sign(det)


def convex_hull(points) -> list[Point2]:
    """Counterclockwise hull cycle, collinear boundary points excluded.

    Starts at the lexicographically smallest (x, y) vertex.  Degenerate
    inputs return the 1- or 2-point hull.
    """
    unique = sorted(set((p.x, p.y) for p in points))
    pts = [Point2(x, y) for x, y in unique]
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: list[Point2] = []
        for p in seq:
            while len(chain) >= 2 and orientation(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all points collinear
        return [pts[0], pts[-1]]
    return hull


def point_in_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> str:
    """Classify p against the closed triangle abc: inside/boundary/outside."""
    if orientation(a, b, c) == COLLINEAR:
        raise GeometryError("degenerate triangle")
    if orientation(a, b, c) == CW:
        a, b = b, a
    s1 = orientation(a, b, p)
    s2 = orientation(b, c, p)
    s3 = orientation(c, a, p)
    if s1 > 0 and s2 > 0 and s3 > 0:
        return "inside"
    if s1 >= 0 and s2 >= 0 and s3 >= 0:
        return "boundary"
    return "outside"


def point_on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """True iff p lies on the closed segment ab."""
    if orientation(a, b, p) != COLLINEAR:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def segments_properly_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    """True iff open segments ab and cd intersect in a single interior point."""
    d1 = orientation(a, b, c)
    d2 = orientation(a, b, d)
    d3 = orientation(c, d, a)
    d4 = orientation(c, d, b)
    return d1 * d2 < 0 and d3 * d4 < 0


def segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    """True iff the closed segments ab and cd share at least one point."""
    if segments_properly_cross(a, b, c, d):
        return True
    return (
        point_on_segment(c, a, b)
        or point_on_segment(d, a, b)
        or point_on_segment(a, c, d)
        or point_on_segment(b, c, d)
    )


def triangles_overlap(t1, t2) -> bool:
    """True iff the open interiors of the two triangles intersect.

    Shared edges and vertices do not count.  Uses exact separating-axis
    tests over the six edge-supporting lines.
    """
    t1 = _ccw_triangle(t1)
    t2 = _ccw_triangle(t2)
    # Cheap exact bounding-box rejection first.
    if max(p.x for p in t1) <= min(p.x for p in t2):
        return False
    if max(p.x for p in t2) <= min(p.x for p in t1):
        return False
    if max(p.y for p in t1) <= min(p.y for p in t2):
        return False
    if max(p.y for p in t2) <= min(p.y for p in t1):
        return False
    return not (_has_separating_edge(t1, t2) or _has_separating_edge(t2, t1))


def _ccw_triangle(t):
    a, b, c = t
    s = orientation(a, b, c)
    if s == COLLINEAR:
        raise GeometryError(f"degenerate triangle {t}")
    return (a, b, c) if s == CCW else (a, c, b)


def _has_separating_edge(t1, t2) -> bool:
    for i in range(3):
        a, b = t1[i], t1[(i + 1) % 3]
        if all(orientation(a, b, p) <= 0 for p in t2):
            return True
    return False


def segment_hits_triangle(p: Point2, q: Point2, t) -> bool:
    """True iff closed segment pq meets the closed triangle t."""
    a, b, c = t
    if point_in_triangle(p, a, b, c) != "outside":
        return True
    if point_in_triangle(q, a, b, c) != "outside":
        return True
    for u, v in ((a, b), (b, c), (c, a)):
        if segments_intersect(p, q, u, v):
            return True
    return False


class SimplePolygon:
    """A simple polygon with counterclockwise rational vertices.

    Invariants checked on construction: at least 3 vertices, no repeated
    vertex, positive signed area, no collinear consecutive triple, and a
    non-self-intersecting boundary.  The vertex cycle is rotated to start at
    the lexicographically smallest vertex, so equal polygons compare equal.
    """

    __slots__ = ("vertices", "_area")

    def __init__(self, vertices):
        verts = tuple(vertices)
        if len(verts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise GeometryError("polygon has repeated vertices")
        start = min(range(len(verts)), key=lambda i: (verts[i].x, verts[i].y))
        verts = verts[start:] + verts[:start]
        m = len(verts)
        doubled = Fraction(0)
        for i in range(m):
            doubled += verts[i].cross(verts[(i + 1) % m])
        if doubled <= 0:
            raise GeometryError("polygon must be counterclockwise with positive area")
        for i in range(m):
            if orientation(verts[i - 1], verts[i], verts[(i + 1) % m]) == COLLINEAR:
                raise GeometryError(f"collinear consecutive vertices at {verts[i]}")
        edges = [(verts[i], verts[(i + 1) % m]) for i in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                a, b = edges[i]
                c, d = edges[j]
                adjacent = j == i + 1 or (i == 0 and j == m - 1)
                if adjacent:
                    continue
                if segments_intersect(a, b, c, d):
                    raise GeometryError("polygon boundary self-intersects")
        self.vertices = verts
        self._area = doubled / 2

    @property
    def area(self) -> Fraction:
        return self._area

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return isinstance(other, SimplePolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"SimplePolygon({list(self.vertices)})"

    def edges(self):
        m = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % m]) for i in range(m)]

    def contains(self, p: Point2) -> str:
        """Classify p against the closed polygon: inside/boundary/outside."""
        for a, b in self.edges():
            if point_on_segment(p, a, b):
                return "boundary"
        crossings = 0
        m = len(self.vertices)
        for i in range(m):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % m]
            if (a.y > p.y) != (b.y > p.y):
                # x-coordinate where edge crosses the horizontal through p
                x_hit = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
                if x_hit > p.x:
                    crossings += 1
        return "inside" if crossings % 2 == 1 else "outside"


def ear_clip(poly: SimplePolygon) -> list[tuple[Point2, Point2, Point2]]:
    """Triangulate a simple polygon by repeatedly clipping ears.

    Deterministic: among all valid ears the one whose apex has the smallest
    index in the polygon's canonical vertex order is clipped first.  Returns
    len(poly) - 2 counterclockwise triangles using boundary vertices only.
    """
    verts = list(poly.vertices)
    index = list(range(len(verts)))
    triangles: list[tuple[Point2, Point2, Point2]] = []

    def is_ear(j: int) -> bool:
        m = len(verts)
        a, b, c = verts[j - 1], verts[j], verts[(j + 1) % m]
        if orientation(a, b, c) != CCW:
            return False
        for t in range(m):
            if t in (j - 1 if j > 0 else m - 1, j, (j + 1) % m):
                continue
            if point_in_triangle(verts[t], a, b, c) != "outside":
                return False
        return True

    while len(verts) > 3:
        best = None
        for j in range(len(verts)):
            if is_ear(j) and (best is None or index[j] < index[best]):
                best = j
        if best is None:
            raise GeometryError("no clippable ear found")
        m = len(verts)
        triangles.append((verts[best - 1], verts[best], verts[(best + 1) % m]))
        del verts[best]
        del index[best]
    a, b, c = verts
    if orientation(a, b, c) != CCW:
        raise GeometryError("degenerate final triangle in ear clipping")
    triangles.append((a, b, c))
    return triangles


# ---------------------------------------------------------------------------
# Planar-subdivision face tracing
# ---------------------------------------------------------------------------


def _direction_sort_key_factory(origin: Point2):
    def cmp(p: Point2, q: Point2) -> int:
        d1 = p - origin
        d2 = q - origin
        h1 = 0 if (d1.y > 0 or (d1.y == 0 and d1.x > 0)) else 1
        h2 = 0 if (d2.y > 0 or (d2.y == 0 and d2.x > 0)) else 1
        if h1 != h2:
            return -1 if h1 < h2 else 1
        c = d1.cross(d2)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return functools.cmp_to_key(cmp)


def _split_segments(segments, vertices):
    """Split segments at every other vertex lying in their interior."""
    out = set()
    for a, b in segments:
        on = [v for v in vertices if v not in (a, b) and point_on_segment(v, a, b)]
        if (b.x, b.y) < (a.x, a.y):
            a, b = b, a
        chain = sorted(on + [a, b], key=lambda v: (v.x, v.y))
        for u, v in zip(chain, chain[1:]):
            out.add((u, v))
    return out


def _simplify_cycle(cycle):
    """Drop straight-through vertices so the cycle can form a SimplePolygon."""
    verts = list(cycle)
    changed = True
    while changed and len(verts) > 3:
        changed = False
        for i in range(len(verts)):
            a = verts[i - 1]
            b = verts[i]
            c = verts[(i + 1) % len(verts)]
            if orientation(a, b, c) == COLLINEAR:
                del verts[i]
                changed = True
                break
    return verts


def trace_regions(hull: SimplePolygon, blocked) -> list[SimplePolygon]:
    """Closures of the components of hull minus the blocked triangles.

    The blocked triangles must be pairwise interior-disjoint and contained in
    the hull; they may touch each other and the hull boundary.  Walks the
    faces of the planar subdivision induced by the hull and triangle edges,
    so non-convex gap polygons come out correctly.
    """
    blocked = [_ccw_triangle(t) for t in blocked]
    for t in blocked:
        for v in t:
            if hull.contains(v) == "outside":
                raise GeometryError(f"blocked triangle vertex {v} escapes the hull")
    for i in range(len(blocked)):
        for j in range(i + 1, len(blocked)):
            if triangles_overlap(blocked[i], blocked[j]):
                raise GeometryError("blocked triangles overlap each other")

    segments = set()
    for a, b in hull.edges():
        segments.add((a, b) if (a.x, a.y) < (b.x, b.y) else (b, a))
    for t in blocked:
        for i in range(3):
            a, b = t[i], t[(i + 1) % 3]
            segments.add((a, b) if (a.x, a.y) < (b.x, b.y) else (b, a))

    vertices = set()
    for a, b in segments:
        vertices.add(a)
        vertices.add(b)
    segments = _split_segments(segments, vertices)

    seg_list = list(segments)
    for i in range(len(seg_list)):
        for j in range(i + 1, len(seg_list)):
            a, b = seg_list[i]
            c, d = seg_list[j]
            if len({a, b} & {c, d}) == 0 and segments_properly_cross(a, b, c, d):
                raise RegionTraceError("subdivision edges cross off-vertex")

    adjacency: dict[Point2, list[Point2]] = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    order: dict[Point2, list[Point2]] = {}
    position: dict[tuple[Point2, Point2], int] = {}
    for v, nbrs in adjacency.items():
        nbrs = sorted(set(nbrs), key=_direction_sort_key_factory(v))
        order[v] = nbrs
        for i, w in enumerate(nbrs):
            position[(v, w)] = i

    visited: set[tuple[Point2, Point2]] = set()
    cycles: list[list[Point2]] = []
    for a, b in segments:
        for start in ((a, b), (b, a)):
            if start in visited:
                continue
            cycle = []
            edge = start
            while edge not in visited:
                visited.add(edge)
                cycle.append(edge[0])
                u, v = edge
                nbrs = order[v]
                idx = position[(v, u)]
                edge = (v, nbrs[(idx - 1) % len(nbrs)])
            if edge != start:
                raise RegionTraceError("face walk did not close")
            cycles.append(cycle)

    def cycle_area2(cycle) -> Fraction:
        s = Fraction(0)
        for i in range(len(cycle)):
            s += cycle[i].cross(cycle[(i + 1) % len(cycle)])
        return s

    negatives = [c for c in cycles if cycle_area2(c) < 0]
    positives = [c for c in cycles if cycle_area2(c) > 0]
    if len(negatives) != 1:
        raise RegionTraceError(
            "gap region is not simply connected (a blocked island floats freely)"
        )

    regions = []
    blocked_seen = 0
    for cycle in positives:
        verts = _simplify_cycle(cycle)
        if len(set(verts)) != len(verts):
            raise RegionTraceError("gap region pinches at a vertex")
        face = SimplePolygon(verts)
        probe_tri = ear_clip(face)[0]
        probe = (probe_tri[0] + probe_tri[1] + probe_tri[2]) * Fraction(1, 3)
        inside_blocked = any(
            point_in_triangle(probe, *t) == "inside" for t in blocked
        )
        if inside_blocked:
            blocked_seen += 1
        else:
            regions.append(face)

    if blocked_seen != len(blocked):
        raise RegionTraceError("blocked triangles do not match traced faces")
    total = sum((r.area for r in regions), Fraction(0))
    total += sum((triangle_area(*t) for t in blocked), Fraction(0))
    if total != hull.area:
        raise RegionTraceError("traced regions do not tile the hull exactly")
    regions.sort(key=lambda r: tuple((v.x, v.y) for v in r.vertices))
    return regions
