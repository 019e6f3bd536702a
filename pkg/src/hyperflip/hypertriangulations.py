"""Labeled triangles, the hypertriangulation container, and its validator."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import (
    ColorUndefined,
    EdgeConditionViolated,
    GenericityError,
    InvalidHypertriangulation,
    LabelError,
)
from .geometry import COLLINEAR, Point2, SimplePolygon, signed_area2
from .points import KFoldConfig, Label, as_label, label_text


class Color(Enum):
    WHITE = "white"
    BLACK = "black"

    def opposite(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


def classify(a: Label, b: Label, c: Label) -> Color:
    """Color of a labeled triangle, checking the edge condition on all sides.

    White iff the triple intersection has size k-1, black iff k-2.
    """
    k = len(a)
    if len(b) != k or len(c) != k:
        raise LabelError(f"labels {a}, {b}, {c} have mixed sizes")
    sa, sb, sc = set(a), set(b), set(c)
    for u, v, su, sv in ((a, b, sa, sb), (b, c, sb, sc), (c, a, sc, sa)):
        size = len(su & sv)
        if size != k - 1:
            raise EdgeConditionViolated(u, v, size)
    triple = len(sa & sb & sc)
    if triple == k - 1:
        return Color.WHITE
    if triple == k - 2:
        return Color.BLACK
    raise ColorUndefined((a, b, c), triple)


@dataclass(frozen=True, order=True)
class LabeledTriangle:
    """Three labels in sorted order plus the derived color."""

    labels: tuple[Label, Label, Label]
    color: Color = field(compare=False)

    @classmethod
    def make(cls, a, b, c) -> "LabeledTriangle":
        a, b, c = as_label(a), as_label(b), as_label(c)
        if len({a, b, c}) != 3:
            raise LabelError(f"triangle labels must be distinct: {a}, {b}, {c}")
        color = classify(a, b, c)
        return cls(labels=tuple(sorted((a, b, c))), color=color)

    @property
    def key(self) -> str:
        return "-".join(label_text(lab) for lab in self.labels)

    def edges(self) -> tuple[tuple[Label, Label], ...]:
        a, b, c = self.labels
        return ((a, b), (b, c), (a, c))

    def __repr__(self):
        return f"{self.key}({self.color.value[0].upper()})"


def triangle(*labels) -> LabeledTriangle:
    return LabeledTriangle.make(*labels)


class Hypertriangulation:
    """A level-k hypertriangulation: a shared config plus a triangle set."""

    def __init__(self, config: KFoldConfig, triangles):
        self.config = config
        self.triangles: frozenset[LabeledTriangle] = frozenset(triangles)
        for t in self.triangles:
            if len(t.labels[0]) != config.k:
                raise LabelError(
                    f"triangle {t.key} has level {len(t.labels[0])}, "
                    f"config has level {config.k}"
                )
            for lab in t.labels:
                if lab[-1] > config.n:
                    raise LabelError(
                        f"label {lab} references a point beyond n={config.n}"
                    )
        self._key: str | None = None
        self._edge_map: dict[tuple[Label, Label], list[LabeledTriangle]] | None = None

    @property
    def k(self) -> int:
        return self.config.k

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def whites(self) -> frozenset[LabeledTriangle]:
        return frozenset(t for t in self.triangles if t.color is Color.WHITE)

    @property
    def blacks(self) -> frozenset[LabeledTriangle]:
        return frozenset(t for t in self.triangles if t.color is Color.BLACK)

    def used_labels(self) -> frozenset[Label]:
        return frozenset(lab for t in self.triangles for lab in t.labels)

    def edge_map(self) -> dict[tuple[Label, Label], list[LabeledTriangle]]:
        if self._edge_map is None:
            out: dict[tuple[Label, Label], list[LabeledTriangle]] = {}
            for t in sorted(self.triangles):
                for e in t.edges():
                    out.setdefault(e, []).append(t)
            self._edge_map = out
        return self._edge_map

    def realized(self, t: LabeledTriangle) -> tuple[Point2, Point2, Point2]:
        """Vertices of the realized triangle, reordered counterclockwise."""
        a, b, c = (self.config.point(lab) for lab in t.labels)
        if self.config.orient(*t.labels) < 0:
            b, c = c, b
        return (a, b, c)

    def replace(self, remove, add) -> "Hypertriangulation":
        return Hypertriangulation(self.config, (self.triangles - frozenset(remove)) | frozenset(add))

    def __eq__(self, other):
        return (
            isinstance(other, Hypertriangulation)
            and self.config is other.config
            and self.triangles == other.triangles
        )

    def __hash__(self):
        return hash((id(self.config), self.triangles))

    def __repr__(self):
        return (
            f"Hypertriangulation(k={self.k}, "
            f"{sorted(t.key for t in self.triangles)})"
        )


def canonical_key(t: Hypertriangulation) -> str:
    """Deterministic dedup key: sorted triangle keys, ';'-joined."""
    if t._key is None:
        t._key = ";".join(sorted(tri.key for tri in t.triangles))
    return t._key


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: tuple = ()


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "OK"
        return "; ".join(f"{v.code}: {v.message}" for v in self.violations)

    def to_json(self):
        return {
            "ok": self.ok,
            "violations": [
                {"code": v.code, "message": v.message} for v in self.violations
            ],
        }


def _bbox(points):
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return (min(xs), min(ys), max(xs), max(ys))


def _overlap_labeled(config: KFoldConfig, t1: LabeledTriangle, t2: LabeledTriangle,
                     box1, box2) -> bool:
    """Open-interior overlap test through the config's cached orientations."""
    if box1[2] <= box2[0] or box2[2] <= box1[0]:
        return False
    if box1[3] <= box2[1] or box2[3] <= box1[1]:
        return False
    for a, b, c in ((t1, t2, None), (t2, t1, None)):
        l1 = _ccw_labels(config, a)
        other = b.labels
        for i in range(3):
            u, v = l1[i], l1[(i + 1) % 3]
            if all(config.orient(u, v, w) <= 0 for w in other):
                return False
    return True


def _ccw_labels(config: KFoldConfig, t: LabeledTriangle):
    a, b, c = t.labels
    return (a, b, c) if config.orient(a, b, c) > 0 else (a, c, b)


def validate(t: Hypertriangulation) -> ValidityReport:
    """Check all tiling clauses and report every violation with witnesses.

    (a) every triangle classifies, (b) every realized triangle has nonzero
    area, (c) triangles are pairwise interior-disjoint, (d) the areas add up
    to the hull area exactly, and (e) the tiling is edge-to-edge: a triangle
    side is either shared with exactly one other triangle or is a hull edge.
    """
    config = t.config
    violations: list[Violation] = []

    order = sorted(t.triangles)
    for tri in order:
        try:
            color = classify(*tri.labels)
            if color is not tri.color:
                violations.append(
                    Violation("COLOR_MISMATCH", f"{tri.key} cached color wrong", (tri,))
                )
        except (EdgeConditionViolated, ColorUndefined) as exc:
            violations.append(Violation("BAD_TRIANGLE", f"{tri.key}: {exc}", (tri,)))

    degenerate = set()
    for tri in order:
        if config.orient(*tri.labels) == COLLINEAR:
            degenerate.add(tri)
            violations.append(
                Violation("DEGENERATE_TRIANGLE", f"{tri.key} has zero area", (tri,))
            )

    live = [tri for tri in order if tri not in degenerate]
    boxes = {tri: _bbox([config.point(lab) for lab in tri.labels]) for tri in live}
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            if _overlap_labeled(config, live[i], live[j], boxes[live[i]], boxes[live[j]]):
                violations.append(
                    Violation(
                        "OVERLAP",
                        f"{live[i].key} and {live[j].key} have intersecting interiors",
                        (live[i], live[j]),
                    )
                )

    total = Fraction(0)
    for tri in live:
        a, b, c = (config.point(lab) for lab in tri.labels)
        total += abs(signed_area2(a, b, c)) / 2
    hull_area = config.hull_polygon().area
    if total != hull_area:
        violations.append(
            Violation(
                "AREA_MISMATCH",
                f"triangle areas sum to {total}, hull area is {hull_area}",
                (total, hull_area),
            )
        )

    hull_edges = config.hull_edges()
    for edge, tris in t.edge_map().items():
        if len(tris) == 1 and edge not in hull_edges:
            violations.append(
                Violation(
                    "OPEN_EDGE",
                    f"interior edge {label_text(edge[0])}-{label_text(edge[1])} "
                    "borders only one triangle",
                    (edge,),
                )
            )
        elif len(tris) > 2:
            violations.append(
                Violation(
                    "EDGE_OVERUSED",
                    f"edge {label_text(edge[0])}-{label_text(edge[1])} "
                    f"borders {len(tris)} triangles",
                    (edge,),
                )
            )
        elif len(tris) == 2 and edge in hull_edges:
            violations.append(
                Violation(
                    "HULL_EDGE_SHARED",
                    f"hull edge {label_text(edge[0])}-{label_text(edge[1])} "
                    "borders two triangles",
                    (edge,),
                )
            )

    return ValidityReport(tuple(violations))


def require_valid(t: Hypertriangulation) -> None:
    report = validate(t)
    if not report.ok:
        raise InvalidHypertriangulation(report)


def white_regions(u: Hypertriangulation, i: int):
    """Connected components of the white triangles whose labels all contain i.

    Returns a list of (SimplePolygon, member triangle frozenset) pairs; the
    boundary polygon uses the realized vertices.  At level 1 the region of i
    is the star of the vertex a_i (every triangle is white there and no label
    can be shared by three distinct singletons).
    """
    if u.k == 1:
        members = sorted(t for t in u.whites if (i,) in t.labels)
    else:
        members = sorted(
            t for t in u.whites if all(i in lab for lab in t.labels)
        )
    if not members:
        return []
    adjacency: dict[LabeledTriangle, set[LabeledTriangle]] = {t: set() for t in members}
    by_edge: dict[tuple[Label, Label], list[LabeledTriangle]] = {}
    for t in members:
        for e in t.edges():
            by_edge.setdefault(e, []).append(t)
    for tris in by_edge.values():
        for a in tris:
            for b in tris:
                if a is not b:
                    adjacency[a].add(b)

    seen: set[LabeledTriangle] = set()
    components = []
    for t in members:
        if t in seen:
            continue
        stack = [t]
        comp = set()
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adjacency[cur] - comp)
        seen |= comp
        components.append(frozenset(comp))

    out = []
    for comp in sorted(components, key=lambda c: min(t.key for t in c)):
        out.append((_component_boundary(u, comp), comp))
    return out


def _component_boundary(u: Hypertriangulation, comp) -> SimplePolygon:
    """Boundary polygon of an edge-connected union of triangles."""
    config = u.config
    counts: dict[tuple[Label, Label], int] = {}
    for t in comp:
        for e in t.edges():
            counts[e] = counts.get(e, 0) + 1
    directed: dict[Label, Label] = {}
    for t in comp:
        a, b, c = _ccw_labels(config, t)
        for un, vn in ((a, b), (b, c), (c, a)):
            e = (un, vn) if un < vn else (vn, un)
            if counts[e] == 1:
                if un in directed:
                    raise GenericityError("white region boundary pinches at a vertex")
                directed[un] = vn
    start = min(directed)
    cycle = [start]
    cur = directed[start]
    while cur != start:
        cycle.append(cur)
        cur = directed[cur]
        if len(cycle) > len(directed):
            raise GenericityError("white region boundary has several loops")
    if len(cycle) != len(directed):
        raise GenericityError("white region boundary has several loops")
    return SimplePolygon([config.point(lab) for lab in cycle])


def complement(t: Hypertriangulation) -> Hypertriangulation:
    """Relabel every vertex I as [n] minus I, mapping level k to level n-k.

    White triangles become black and vice versa; validity is preserved.
    """
    require_valid(t)
    n = t.n
    full = set(range(1, n + 1))
    target = t.config.base.level(n - t.k)
    mapped = []
    for tri in t.triangles:
        labels = [tuple(sorted(full - set(lab))) for lab in tri.labels]
        mapped.append(LabeledTriangle.make(*labels))
    return Hypertriangulation(target, mapped)
