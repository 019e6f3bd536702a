"""Detection and application of the four flip types.

Type I swaps the diagonal of a strictly convex quadrangle made of two
same-colored triangles.  Type II inserts a vertex into a triangle (forward)
or removes an interior degree-3 vertex (backward), keeping the color.
Type III reflects four alternating-color triangles around an interior vertex
through the center of their parallelogram.  Type IV reflects a centrally
symmetric convex hexagon tiled by one triangle of one color surrounded by
three of the other.  Types III and IV switch every color.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    ColorUndefined,
    EdgeConditionViolated,
    FlipNotApplicable,
    LabelError,
)
from .hypertriangulations import Hypertriangulation, LabeledTriangle
from .points import Label


class FlipType(Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class Flip:
    type: FlipType
    direction: Direction
    before: frozenset[LabeledTriangle]
    after: frozenset[LabeledTriangle]

    def reversed(self) -> "Flip":
        direction = (
            Direction.BACKWARD if self.direction is Direction.FORWARD
            else Direction.FORWARD
        )
        return Flip(self.type, direction, self.after, self.before)

    @property
    def sort_key(self):
        return (self.type.value, tuple(sorted(t.key for t in self.before)))

    def __repr__(self):
        b = ",".join(sorted(t.key for t in self.before))
        a = ",".join(sorted(t.key for t in self.after))
        return f"Flip({self.type.value} {self.direction.value}: {b} -> {a})"


def _swap_direction(before, after) -> Direction:
    """Deterministic orientation for the self-inverse types I, III and IV."""
    b = tuple(sorted(t.key for t in before))
    a = tuple(sorted(t.key for t in after))
    return Direction.FORWARD if b < a else Direction.BACKWARD


def _try_triangle(*labels) -> LabeledTriangle | None:
    try:
        return LabeledTriangle.make(*labels)
    except (EdgeConditionViolated, ColorUndefined, LabelError):
        return None


def _make_flip(ftype, before, after, direction=None) -> Flip:
    before = frozenset(before)
    after = frozenset(after)
    if direction is None:
        direction = _swap_direction(before, after)
    return Flip(ftype, direction, before, after)


def _shared_and_apex(t: LabeledTriangle, edge) -> Label:
    (apex,) = set(t.labels) - set(edge)
    return apex


def enumerate_flips(t: Hypertriangulation) -> tuple[Flip, ...]:
    """Every applicable flip, deduplicated and deterministically ordered."""
    flips: dict[tuple, Flip] = {}

    def add(f: Flip):
        flips[(frozenset(f.before), frozenset(f.after))] = f

    for f in _type_one(t):
        add(f)
    for f in _type_two_forward(t):
        add(f)
    for f in _type_two_backward(t):
        add(f)
    for f in _type_three(t):
        add(f)
    for f in _type_four(t):
        add(f)
    return tuple(sorted(flips.values(), key=lambda f: f.sort_key))


def _type_one(t: Hypertriangulation):
    config = t.config
    for edge, tris in sorted(t.edge_map().items()):
        if len(tris) != 2:
            continue
        t1, t2 = tris
        if t1.color is not t2.color:
            continue
        p, q = edge
        r = _shared_and_apex(t1, edge)
        s = _shared_and_apex(t2, edge)
        # Strictly convex quadrangle: the two diagonals properly cross.
        if config.orient(p, q, r) * config.orient(p, q, s) >= 0:
            continue
        if config.orient(r, s, p) * config.orient(r, s, q) >= 0:
            continue
        n1 = _try_triangle(r, s, p)
        n2 = _try_triangle(r, s, q)
        if n1 is None or n2 is None:
            continue
        if n1.color is not t1.color or n2.color is not t1.color:
            continue
        yield _make_flip(FlipType.I, (t1, t2), (n1, n2))


def _strictly_inside(config, tri: LabeledTriangle, lab: Label) -> bool:
    a, b, c = tri.labels
    if config.orient(a, b, c) < 0:
        b, c = c, b
    return (
        config.orient(a, b, lab) > 0
        and config.orient(b, c, lab) > 0
        and config.orient(c, a, lab) > 0
    )


def _type_two_forward(t: Hypertriangulation):
    config = t.config
    used = t.used_labels()
    candidates = [lab for lab in config.labels if lab not in used]
    for tri in sorted(t.triangles):
        a, b, c = tri.labels
        for lab in candidates:
            if not _strictly_inside(config, tri, lab):
                continue
            n1 = _try_triangle(a, b, lab)
            n2 = _try_triangle(b, c, lab)
            n3 = _try_triangle(c, a, lab)
            if None in (n1, n2, n3):
                continue
            if any(n.color is not tri.color for n in (n1, n2, n3)):
                continue
            yield _make_flip(
                FlipType.II, (tri,), (n1, n2, n3), Direction.FORWARD
            )


def _vertex_map(t: Hypertriangulation):
    out: dict[Label, list[LabeledTriangle]] = {}
    for tri in sorted(t.triangles):
        for lab in tri.labels:
            out.setdefault(lab, []).append(tri)
    return out


def _type_two_backward(t: Hypertriangulation):
    for lab, tris in sorted(_vertex_map(t).items()):
        if len(tris) != 3:
            continue
        if len({tri.color for tri in tris}) != 1:
            continue
        outer: dict[Label, int] = {}
        for tri in tris:
            for other in tri.labels:
                if other != lab:
                    outer[other] = outer.get(other, 0) + 1
        if len(outer) != 3 or set(outer.values()) != {2}:
            continue  # link is not a closed 3-cycle (hull-boundary vertex)
        merged = _try_triangle(*outer)
        if merged is None or merged.color is not tris[0].color:
            continue
        yield _make_flip(FlipType.II, tuple(tris), (merged,), Direction.BACKWARD)


def _link_cycle(tris, center: Label) -> list[Label] | None:
    """Cyclic order of the link vertices around an interior vertex."""
    neighbors: dict[Label, list[Label]] = {}
    for tri in tris:
        others = [lab for lab in tri.labels if lab != center]
        if len(others) != 2:
            return None
        u, v = others
        neighbors.setdefault(u, []).append(v)
        neighbors.setdefault(v, []).append(u)
    if any(len(v) != 2 for v in neighbors.values()):
        return None
    start = min(neighbors)
    cycle = [start]
    prev = None
    while True:
        options = [x for x in neighbors[cycle[-1]] if x != prev]
        if not options:
            return None
        prev = cycle[-1]
        cycle.append(options[0])
        if cycle[-1] == start:
            return cycle[:-1]
        if len(cycle) > len(tris) + 1:
            return None


def _triangle_at(t: Hypertriangulation, a: Label, b: Label, c: Label):
    target = tuple(sorted((a, b, c)))
    for tri in t.triangles:
        if tri.labels == target:
            return tri
    return None


def _type_three(t: Hypertriangulation):
    config = t.config
    for center, tris in sorted(_vertex_map(t).items()):
        if len(tris) != 4:
            continue
        cycle = _link_cycle(tris, center)
        if cycle is None or len(cycle) != 4:
            continue
        around = [
            _triangle_at(t, center, cycle[i], cycle[(i + 1) % 4]) for i in range(4)
        ]
        if any(tri is None for tri in around):
            continue
        colors = [tri.color for tri in around]
        if not (
            colors[0] is colors[2]
            and colors[1] is colors[3]
            and colors[0] is not colors[1]
        ):
            continue  # colors must alternate around the center
        p = [config.point(lab) for lab in cycle]
        if p[0] + p[2] != p[1] + p[3]:
            continue  # not a parallelogram
        mirror = p[0] + p[2] - config.point(center)
        try:
            new_center = config.label_of_point(mirror)
        except LabelError:
            continue
        replacement = []
        ok = True
        for i in range(4):
            new = _try_triangle(new_center, cycle[(i + 2) % 4], cycle[(i + 3) % 4])
            if new is None or new.color is not around[i].color.opposite():
                ok = False
                break
            replacement.append(new)
        if ok:
            yield _make_flip(FlipType.III, around, replacement)


def _type_four(t: Hypertriangulation):
    config = t.config
    edge_map = t.edge_map()
    for central in sorted(t.triangles):
        neighbors = []
        for edge in central.edges():
            tris = edge_map.get(edge, [])
            others = [x for x in tris if x != central]
            if len(others) != 1 or others[0].color is central.color:
                neighbors = None
                break
            neighbors.append(others[0])
        if neighbors is None or len(set(neighbors)) != 3:
            continue
        (v1, v2, v3) = central.labels
        u3 = _shared_and_apex(neighbors[0], (v1, v2))
        u1 = _shared_and_apex(neighbors[1], (v2, v3))
        u2 = _shared_and_apex(neighbors[2], (v1, v3))
        pv = {lab: config.point(lab) for lab in (v1, v2, v3, u1, u2, u3)}
        center2 = pv[v1] + pv[u1]
        if pv[v2] + pv[u2] != center2 or pv[v3] + pv[u3] != center2:
            continue  # hexagon is not centrally symmetric
        hexagon = [v1, u3, v2, u1, v3, u2]
        if not _strictly_convex_cycle(config, hexagon):
            continue
        new_central = _try_triangle(u1, u2, u3)
        if new_central is None or new_central.color is not central.color.opposite():
            continue
        new_outer = [
            _try_triangle(u1, u2, v3),
            _try_triangle(u2, u3, v1),
            _try_triangle(u3, u1, v2),
        ]
        if any(n is None or n.color is not central.color for n in new_outer):
            continue
        yield _make_flip(
            FlipType.IV, [central] + neighbors, [new_central] + new_outer
        )


def _strictly_convex_cycle(config, labels) -> bool:
    m = len(labels)
    signs = {
        config.orient(labels[i - 1], labels[i], labels[(i + 1) % m])
        for i in range(m)
    }
    return signs == {1} or signs == {-1}


def apply_flip(t: Hypertriangulation, flip: Flip) -> Hypertriangulation:
    """Replace flip.before with flip.after; level and total area are kept."""
    if not flip.before <= t.triangles:
        missing = sorted(tri.key for tri in flip.before - t.triangles)
        raise FlipNotApplicable(f"support triangles missing: {missing}")
    overlap = flip.after & (t.triangles - flip.before)
    if overlap:
        raise FlipNotApplicable(
            f"replacement triangles already present: {sorted(x.key for x in overlap)}"
        )
    area = _support_area(t, flip.before)
    if area != _support_area(t, flip.after):
        raise FlipNotApplicable("flip does not preserve the support area")
    return t.replace(flip.before, flip.after)


def _support_area(t: Hypertriangulation, triangles):
    from .geometry import signed_area2

    total = 0
    for tri in triangles:
        a, b, c = (t.config.point(lab) for lab in tri.labels)
        total += abs(signed_area2(a, b, c))
    return total
