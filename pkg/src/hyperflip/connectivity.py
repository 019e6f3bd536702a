"""Flip graphs: brute-force enumeration, constructive level-2 paths, reports.

`enumerate_all` backtracks over advancing fronts and is the oracle used by
the connectivity tests.  `connect_level2` joins any two level-2
hypertriangulations constructively: collapse both inputs to level 1, walk the
level-1 flip path through the unique Delaunay triangulation, and simulate
each level-1 flip by a Type III or IV flip at level 2, preparing the white
regions with Type I and II flips first.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .aging import collapse_level2
from .errors import BudgetExceeded, GenericityError, PreconditionError
from .flips import Direction, Flip, FlipType, apply_flip, enumerate_flips
from .geometry import SimplePolygon, ear_clip, trace_regions
from .hypertriangulations import (
    Hypertriangulation,
    LabeledTriangle,
    canonical_key,
    require_valid,
)
from .points import KFoldConfig, Label, PointConfig, genericity

DEFAULT_NODE_BUDGET = 2_000_000
BUDGET_ENV_VAR = "HYPERFLIP_BUDGET"


def node_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get(BUDGET_ENV_VAR)
    return int(env) if env else DEFAULT_NODE_BUDGET


def _require_strongly_generic(config: PointConfig, k: int):
    tier = genericity(config, k)
    if not tier.strongly_generic:
        raise GenericityError(
            f"operation needs a strongly generic configuration at level {k}: "
            f"{tier.detail}",
            witness=tier.witness,
        )


# ---------------------------------------------------------------------------
# Brute-force enumeration
# ---------------------------------------------------------------------------


def _edge_candidates(level: KFoldConfig) -> dict[tuple[Label, Label], list[Label]]:
    """For each edge-condition pair, the labels forming a valid triangle."""
    out: dict[tuple[Label, Label], list[Label]] = {}
    k = level.k
    for a, b in itertools.combinations(level.labels, 2):
        if len(set(a) & set(b)) != k - 1:
            continue
        good = []
        for c in level.labels:
            if c in (a, b):
                continue
            sa, sb, sc = set(a), set(b), set(c)
            if len(sa & sc) != k - 1 or len(sb & sc) != k - 1:
                continue
            if len(sa & sb & sc) not in (k - 1, k - 2):
                continue
            good.append(c)
        out[(a, b)] = good
    return out


def enumerate_all(
    config: PointConfig,
    k: int,
    *,
    budget: int | None = None,
    reverse_order: bool = False,
) -> list[Hypertriangulation]:
    """All valid level-k hypertriangulations by advancing-front backtracking.

    The front is the boundary of the uncovered region; at each step the
    lexicographically smallest open boundary edge is filled with every
    attachable triangle.  With this deterministic edge choice each complete
    tiling is generated exactly once.  `reverse_order` flips both the edge
    choice and candidate order, which must not change the result set.
    """
    _require_strongly_generic(config, k)
    level = config.level(k)
    budget_limit = node_budget(budget)
    candidates = _edge_candidates(level)

    hull = level.hull_labels()
    front: set[tuple[Label, Label]] = set()
    for i in range(len(hull)):
        front.add((hull[i], hull[(i + 1) % len(hull)]))

    boxes: dict[LabeledTriangle, tuple] = {}

    def box_of(tri: LabeledTriangle):
        b = boxes.get(tri)
        if b is None:
            pts = [level.point(lab) for lab in tri.labels]
            xs = [p.x for p in pts]
            ys = [p.y for p in pts]
            b = (min(xs), min(ys), max(xs), max(ys))
            boxes[tri] = b
        return b

    def overlaps_placed(tri: LabeledTriangle, placed) -> bool:
        bb = box_of(tri)
        for other in placed:
            ob = box_of(other)
            if bb[2] <= ob[0] or ob[2] <= bb[0] or bb[3] <= ob[1] or ob[3] <= bb[1]:
                continue
            if not _separated(level, tri, other):
                return True
        return False

    results: list[Hypertriangulation] = []
    seen: set[frozenset] = set()
    placed: list[LabeledTriangle] = []
    nodes = 0

    def attachable(u: Label, v: Label) -> list[LabeledTriangle]:
        found = []
        key = (u, v) if u < v else (v, u)
        for c in candidates.get(key, ()):
            if level.orient(u, v, c) <= 0:
                continue  # new triangle must lie left of the open edge
            tri = LabeledTriangle.make(u, v, c)
            if overlaps_placed(tri, placed):
                continue
            found.append(tri)
        found.sort()
        if reverse_order:
            found.reverse()
        return found

    def recurse():
        nonlocal nodes
        nodes += 1
        if nodes > budget_limit:
            raise BudgetExceeded(
                f"enumeration exceeded {budget_limit} search nodes"
            )
        if not front:
            tiling = frozenset(placed)
            if tiling not in seen:
                seen.add(tiling)
                results.append(Hypertriangulation(level, tiling))
            return
        edge = max(front) if reverse_order else min(front)
        u, v = edge
        # the uncovered side is the left of the directed open edge
        for tri in attachable(u, v):
            new_edges = []
            removed = []
            ok = True
            a, b, c = _ccw(level, tri)
            # front edges keep the uncovered region on their left; a CCW
            # triangle edge matching a front edge closes it, otherwise the
            # reversed edge becomes new front
            for x, y in ((a, b), (b, c), (c, a)):
                if (x, y) in front:
                    removed.append((x, y))
                elif (y, x) in front:
                    ok = False
                    break
                else:
                    new_edges.append((y, x))
            if not ok:
                continue
            for e in removed:
                front.remove(e)
            for e in new_edges:
                front.add(e)
            placed.append(tri)
            recurse()
            placed.pop()
            for e in new_edges:
                front.remove(e)
            for e in removed:
                front.add(e)

    recurse()
    results.sort(key=canonical_key)
    return results


def _ccw(level: KFoldConfig, tri: LabeledTriangle):
    a, b, c = tri.labels
    return (a, b, c) if level.orient(a, b, c) > 0 else (a, c, b)


def _separated(level: KFoldConfig, t1: LabeledTriangle, t2: LabeledTriangle) -> bool:
    """True iff the open interiors are disjoint (separating-axis, cached)."""
    for first, second in ((t1, t2), (t2, t1)):
        a, b, c = _ccw(level, first)
        other = second.labels
        for u, v in ((a, b), (b, c), (c, a)):
            if all(level.orient(u, v, w) <= 0 for w in other):
                return True
    return False


# ---------------------------------------------------------------------------
# Flip graph
# ---------------------------------------------------------------------------


@dataclass
class FlipGraph:
    nodes: dict[str, Hypertriangulation]
    edges: set[tuple[str, str, FlipType]] = field(default_factory=set)

    def adjacency(self, types=None) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {key: set() for key in self.nodes}
        for a, b, ftype in self.edges:
            if types is not None and ftype not in types:
                continue
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def components(self, types=None, nodes=None) -> list[set[str]]:
        adj = self.adjacency(types)
        allowed = set(self.nodes if nodes is None else nodes)
        out = []
        seen: set[str] = set()
        for start in sorted(allowed):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                cur = stack.pop()
                for nxt in adj[cur]:
                    if nxt in allowed and nxt not in comp:
                        comp.add(nxt)
                        stack.append(nxt)
            seen |= comp
            out.append(comp)
        return out

    def is_connected(self, types=None, nodes=None) -> bool:
        comps = self.components(types, nodes)
        return len(comps) <= 1

    def bfs_path(self, start: str, goal: str) -> list[str] | None:
        from collections import deque

        adj = self.adjacency()
        prev = {start: None}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            if cur == goal:
                path = [cur]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return list(reversed(path))
            for nxt in sorted(adj[cur]):
                if nxt not in prev:
                    prev[nxt] = cur
                    queue.append(nxt)
        return None


def flip_graph(config: PointConfig, k: int, *, budget: int | None = None) -> FlipGraph:
    """Nodes from enumerate_all, arcs from enumerate_flips (symmetry checked)."""
    nodes = {canonical_key(t): t for t in enumerate_all(config, k, budget=budget)}
    graph = FlipGraph(nodes=nodes)
    directed: set[tuple[str, str, FlipType]] = set()
    for key, t in nodes.items():
        for flip in enumerate_flips(t):
            target = canonical_key(apply_flip(t, flip))
            if target not in nodes:
                raise AssertionError(
                    "flip produced a hypertriangulation missing from enumeration"
                )
            directed.add((key, target, flip.type))
    for a, b, ftype in directed:
        if (b, a, ftype) not in directed:
            raise AssertionError("flip graph is not symmetric")
        graph.edges.add((min(a, b), max(a, b), ftype))
    return graph


# ---------------------------------------------------------------------------
# Level-1 machinery: insertion, Lawson flips, Delaunay canonical form
# ---------------------------------------------------------------------------


def _insert_unused_interior(t: Hypertriangulation) -> tuple[Hypertriangulation, list[Flip]]:
    """Insert every unused interior base point by Type II forward flips."""
    config = t.config
    hull_boundary = config.hull_polygon()
    steps: list[Flip] = []
    cur = t
    while True:
        used = cur.used_labels()
        missing = [
            lab
            for lab in config.labels
            if lab not in used and hull_boundary.contains(config.point(lab)) == "inside"
        ]
        if not missing:
            return cur, steps
        lab = missing[0]
        flips = [
            f
            for f in enumerate_flips(cur)
            if f.type is FlipType.II
            and f.direction is Direction.FORWARD
            and lab in {x for tri in f.after for x in tri.labels}
        ]
        if not flips:
            raise AssertionError(f"no insertion flip found for {lab}")
        cur = apply_flip(cur, flips[0])
        steps.append(flips[0])


def _locally_delaunay_violation(t: Hypertriangulation):
    """First interior edge failing the incircle test, in canonical order."""
    config = t.config
    base = config.base
    for edge, tris in sorted(t.edge_map().items()):
        if len(tris) != 2:
            continue
        p, q = edge
        r = next(iter(set(tris[0].labels) - set(edge)))
        s = next(iter(set(tris[1].labels) - set(edge)))
        i, j, l, m = p[0], q[0], r[0], s[0]
        sign = base.incircle(i, j, l, m)
        if config.orient(p, q, r) < 0:
            sign = -sign
        if sign > 0:
            return edge, tris, r, s
    return None


def _lawson_to_delaunay(t: Hypertriangulation) -> tuple[Hypertriangulation, list[Flip]]:
    """Flip locally non-Delaunay edges until none remain (level 1 only)."""
    steps: list[Flip] = []
    cur = t
    while True:
        hit = _locally_delaunay_violation(cur)
        if hit is None:
            return cur, steps
        edge, tris, r, s = hit
        p, q = edge
        flip = Flip(
            FlipType.I,
            Direction.FORWARD,
            frozenset(tris),
            frozenset(
                (LabeledTriangle.make(r, s, p), LabeledTriangle.make(r, s, q))
            ),
        )
        cur = apply_flip(cur, flip)
        steps.append(flip)
        if len(steps) > 4 ** t.config.n:
            raise AssertionError("Lawson flipping did not terminate")


def delaunay_triangulation(config: PointConfig) -> Hypertriangulation:
    """The unique level-1 Delaunay triangulation (needs strong genericity)."""
    _require_strongly_generic(config, 1)
    level = config.level(1)
    hull = level.hull_labels()
    fan = [
        LabeledTriangle.make(hull[0], hull[i], hull[i + 1])
        for i in range(1, len(hull) - 1)
    ]
    start = Hypertriangulation(level, fan)
    start, _ = _insert_unused_interior(start)
    final, _ = _lawson_to_delaunay(start)
    return final


def level1_path(
    config: PointConfig, t: Hypertriangulation, t_prime: Hypertriangulation
) -> list[Flip]:
    """A Type I/II flip sequence between two level-1 hypertriangulations.

    Both sides are completed by inserting their unused interior points, then
    Lawson-flipped to the unique Delaunay triangulation; the path goes through
    that canonical form.
    """
    _require_strongly_generic(config, 1)
    require_valid(t)
    require_valid(t_prime)
    if canonical_key(t) == canonical_key(t_prime):
        return []
    full_a, ins_a = _insert_unused_interior(t)
    del_a, law_a = _lawson_to_delaunay(full_a)
    full_b, ins_b = _insert_unused_interior(t_prime)
    del_b, law_b = _lawson_to_delaunay(full_b)
    if canonical_key(del_a) != canonical_key(del_b):
        raise AssertionError("both Lawson runs must reach the same Delaunay form")
    back = [f.reversed() for f in reversed(ins_b + law_b)]
    return ins_a + law_a + back


# ---------------------------------------------------------------------------
# Flip paths inside a fixed polygon
# ---------------------------------------------------------------------------


def _region_tiles(config: KFoldConfig, region: SimplePolygon, tris) -> bool:
    total = Fraction(0)
    for tri in tris:
        pts = [config.point(lab) for lab in tri.labels]
        if any(region.contains(p) == "outside" for p in pts):
            return False
        from .geometry import signed_area2

        total += abs(signed_area2(*pts)) / 2
    return total == region.area


def _interior_labels(config: KFoldConfig, region: SimplePolygon, tris):
    boundary = {config.label_of_point(p) for p in region.vertices}
    used = {lab for tri in tris for lab in tri.labels}
    return sorted(used - boundary)


def _link_path(tris, center: Label):
    """Link vertices around `center`; a path for boundary, a cycle otherwise."""
    neighbors: dict[Label, list[Label]] = {}
    for tri in tris:
        u, v = (lab for lab in tri.labels if lab != center)
        neighbors.setdefault(u, []).append(v)
        neighbors.setdefault(v, []).append(u)
    degree_one = sorted(lab for lab, nbrs in neighbors.items() if len(nbrs) == 1)
    start = degree_one[0] if degree_one else min(neighbors)
    path = [start]
    prev = None
    while True:
        options = [x for x in neighbors[path[-1]] if x != prev]
        if not options:
            return path
        prev = path[-1]
        path.append(options[0])
        if path[-1] == start:
            return path[:-1]


def _reduce_vertex(state, center: Label, target_degree: int):
    """Type I flips shrinking the number of triangles incident to center."""
    config, triangles, steps = state
    while True:
        incident = sorted(t for t in triangles if center in t.labels)
        if len(incident) <= target_degree:
            return
        link = _link_path(incident, center)
        done = False
        for j in range(1, len(link) - 1) if len(link) > len(incident) else range(len(link)):
            w_prev = link[j - 1]
            w_j = link[j]
            w_next = link[(j + 1) % len(link)]
            t1 = _find(triangles, center, w_prev, w_j)
            t2 = _find(triangles, center, w_j, w_next)
            if t1 is None or t2 is None:
                continue
            if not _strictly_convex_quad(config, center, w_prev, w_j, w_next):
                continue
            try:
                n1 = LabeledTriangle.make(center, w_prev, w_next)
                n2 = LabeledTriangle.make(w_prev, w_j, w_next)
            except Exception:
                continue
            if n1.color is not t1.color or n2.color is not t1.color:
                continue
            flip = Flip(
                FlipType.I,
                Direction.FORWARD,
                frozenset((t1, t2)),
                frozenset((n1, n2)),
            )
            triangles -= flip.before
            triangles |= flip.after
            steps.append(flip)
            state[1] = triangles
            done = True
            break
        if not done:
            raise AssertionError(f"cannot reduce degree of {center}")


def _find(triangles, a, b, c):
    want = tuple(sorted((a, b, c)))
    for t in triangles:
        if t.labels == want:
            return t
    return None


def _strictly_convex_quad(config, p, a, b, c) -> bool:
    """Quadrangle p-a-b-c (cyclic) is strictly convex."""
    cycle = (p, a, b, c)
    signs = {
        config.orient(cycle[i - 1], cycle[i], cycle[(i + 1) % 4]) for i in range(4)
    }
    return signs == {1} or signs == {-1}


def _to_canonical(config: KFoldConfig, region: SimplePolygon, tris):
    """Flips carrying `tris` to the canonical ear triangulation of region."""
    steps: list[Flip] = []
    triangles = frozenset(tris)
    state = [config, triangles, steps]

    # remove interior vertices, smallest label first
    while True:
        interior = _interior_labels(config, region, state[1])
        if not interior:
            break
        center = interior[0]
        _reduce_vertex(state, center, 3)
        incident = sorted(t for t in state[1] if center in t.labels)
        if len(incident) != 3:
            raise AssertionError("interior vertex not reduced to degree 3")
        outer = sorted({lab for t in incident for lab in t.labels if lab != center})
        merged = LabeledTriangle.make(*outer)
        flip = Flip(
            FlipType.II, Direction.BACKWARD, frozenset(incident), frozenset((merged,))
        )
        state[1] = (state[1] - flip.before) | flip.after
        steps.append(flip)

    # match the deterministic ear triangulation, clipping in its order
    for ear in ear_clip(region)[:-1]:
        labs = [config.label_of_point(p) for p in ear]
        apex = labs[1]
        _reduce_vertex(state, apex, 1)
        tri = _find(state[1], *labs)
        if tri is None:
            raise AssertionError("ear canonicalization failed")
        state[1] = state[1] - {tri}
    return steps


def _local_flips(config: KFoldConfig, region: SimplePolygon, tris, inside_labels):
    """Type I and II flips confined to a triangulated region."""
    out = []
    edge_map: dict[tuple[Label, Label], list[LabeledTriangle]] = {}
    vertex_map: dict[Label, list[LabeledTriangle]] = {}
    for tri in sorted(tris):
        for e in tri.edges():
            edge_map.setdefault(e, []).append(tri)
        for lab in tri.labels:
            vertex_map.setdefault(lab, []).append(tri)
    used = set(vertex_map)
    boundary = {config.label_of_point(p) for p in region.vertices}

    for edge, pair in sorted(edge_map.items()):
        if len(pair) != 2 or pair[0].color is not pair[1].color:
            continue
        p, q = edge
        r = next(x for x in pair[0].labels if x not in edge)
        s = next(x for x in pair[1].labels if x not in edge)
        if config.orient(p, q, r) * config.orient(p, q, s) >= 0:
            continue
        if config.orient(r, s, p) * config.orient(r, s, q) >= 0:
            continue
        try:
            n1 = LabeledTriangle.make(r, s, p)
            n2 = LabeledTriangle.make(r, s, q)
        except Exception:
            continue
        if n1.color is not pair[0].color or n2.color is not pair[0].color:
            continue
        out.append(Flip(FlipType.I, Direction.FORWARD, frozenset(pair), frozenset((n1, n2))))

    for lab, incident in sorted(vertex_map.items()):
        if lab in boundary or len(incident) != 3:
            continue
        if len({tri.color for tri in incident}) != 1:
            continue
        outer = sorted({x for tri in incident for x in tri.labels if x != lab})
        if len(outer) != 3:
            continue
        try:
            merged = LabeledTriangle.make(*outer)
        except Exception:
            continue
        if merged.color is not incident[0].color:
            continue
        out.append(
            Flip(FlipType.II, Direction.BACKWARD, frozenset(incident), frozenset((merged,)))
        )

    for tri in sorted(tris):
        a, b, c = tri.labels
        for lab in inside_labels:
            if lab in used or not _strictly_inside_triangle(config, tri, lab):
                continue
            try:
                n1 = LabeledTriangle.make(a, b, lab)
                n2 = LabeledTriangle.make(b, c, lab)
                n3 = LabeledTriangle.make(c, a, lab)
            except Exception:
                continue
            if any(n.color is not tri.color for n in (n1, n2, n3)):
                continue
            out.append(
                Flip(FlipType.II, Direction.FORWARD, frozenset((tri,)), frozenset((n1, n2, n3)))
            )
    return out


def _strictly_inside_triangle(config, tri: LabeledTriangle, lab: Label) -> bool:
    a, b, c = tri.labels
    if config.orient(a, b, c) < 0:
        b, c = c, b
    return (
        config.orient(a, b, lab) > 0
        and config.orient(b, c, lab) > 0
        and config.orient(c, a, lab) > 0
    )


def _bfs_polygon_path(config, region, tris_a, tris_b, cap: int):
    """Shortest local flip path by breadth-first search, None past the cap."""
    from collections import deque

    inside_labels = [
        lab
        for lab in config.labels
        if region.contains(config.point(lab)) == "inside"
    ]
    start = frozenset(tris_a)
    goal = frozenset(tris_b)
    parents: dict[frozenset, tuple[frozenset, Flip] | None] = {start: None}
    queue = deque([start])
    while queue:
        if len(parents) > cap:
            return None
        state = queue.popleft()
        if state == goal:
            path = []
            cur = state
            while parents[cur] is not None:
                prev, flip = parents[cur]
                path.append(flip)
                cur = prev
            return list(reversed(path))
        for flip in _local_flips(config, region, state, inside_labels):
            nxt = (state - flip.before) | flip.after
            if nxt not in parents:
                parents[nxt] = (state, flip)
                queue.append(nxt)
    return None


def polygon_path(
    config: KFoldConfig,
    region: SimplePolygon,
    tris_a,
    tris_b,
    *,
    bfs_cap: int = 4000,
) -> list[Flip]:
    """Type I/II flip path between two triangulations of the same region.

    Interior labeled vertices are allowed on both sides.  A bounded
    breadth-first search over the region's local flip graph yields a shortest
    path; when the region is too large for the cap, the path goes through the
    canonical ear-clipping triangulation instead (interior vertices removed
    on the way there, re-inserted by the reversed half).
    """
    tris_a = frozenset(tris_a)
    tris_b = frozenset(tris_b)
    if not (_region_tiles(config, region, tris_a) and _region_tiles(config, region, tris_b)):
        raise PreconditionError("both triangulations must tile the given region")
    if tris_a == tris_b:
        return []
    found = _bfs_polygon_path(config, region, tris_a, tris_b, bfs_cap)
    if found is not None:
        return found
    fwd = _to_canonical(config, region, tris_a)
    bwd = _to_canonical(config, region, tris_b)
    return fwd + [f.reversed() for f in reversed(bwd)]


# ---------------------------------------------------------------------------
# Constructive level-2 connectivity
# ---------------------------------------------------------------------------


def _pair(*indices) -> Label:
    return tuple(sorted(indices))


def _aged(t1: Hypertriangulation) -> frozenset[LabeledTriangle]:
    from .aging import age_triangle

    return frozenset(age_triangle(w) for w in t1.triangles)


def _white_gaps(v: Hypertriangulation):
    """Map common-label -> (gap polygon, white triangles inside it)."""
    config = v.config
    hull = config.hull_polygon()
    blacks = [v.realized(t) for t in sorted(v.blacks)]
    regions = trace_regions(hull, blacks)
    whites = sorted(v.whites)
    gaps = {}
    assigned = 0
    for region in regions:
        common = None
        for p in region.vertices:
            lab = set(config.label_of_point(p))
            common = lab if common is None else (common & lab)
        if common is None or len(common) != 1:
            raise AssertionError("gap vertices do not share exactly one label")
        i = next(iter(common))
        inside = []
        for t in whites:
            a, b, c = v.realized(t)
            centroid = (a + b + c) * Fraction(1, 3)
            if region.contains(centroid) == "inside":
                inside.append(t)
        assigned += len(inside)
        gaps.setdefault(i, []).append((region, frozenset(inside)))
    if assigned != len(whites):
        raise AssertionError("white triangles do not partition into gaps")
    return gaps


def _gap_containing(gaps, i: int, tri: LabeledTriangle, v: Hypertriangulation):
    a, b, c = v.realized(tri)
    centroid = (a + b + c) * Fraction(1, 3)
    for region, inside in gaps.get(i, ()):
        if region.contains(centroid) != "outside":
            return region, inside
    raise AssertionError(f"no gap of label {i} holds triangle {tri.key}")


def _prepare_white(v: Hypertriangulation, steps: list[Flip], needed: LabeledTriangle):
    """Retriangulate the gap holding `needed` so that it becomes a tile."""
    if needed in v.triangles:
        return v
    config = v.config
    common = set(needed.labels[0])
    for lab in needed.labels[1:]:
        common &= set(lab)
    i = next(iter(common))
    gaps = _white_gaps(v)
    region, current = _gap_containing(gaps, i, needed, v)
    if region.area == _triangle_area(v, needed):
        target = frozenset((needed,))
    else:
        pockets = trace_regions(region, [v.realized(needed)])
        target_set = {needed}
        for pocket in pockets:
            for tri in ear_clip(pocket):
                labs = [config.label_of_point(p) for p in tri]
                target_set.add(LabeledTriangle.make(*labs))
        target = frozenset(target_set)
    for flip in polygon_path(config, region, current, target):
        v = apply_flip(v, flip)
        steps.append(flip)
    return v


def _triangle_area(v: Hypertriangulation, tri: LabeledTriangle) -> Fraction:
    from .geometry import signed_area2

    a, b, c = (v.config.point(lab) for lab in tri.labels)
    return abs(signed_area2(a, b, c)) / 2


def _black(*pairs) -> LabeledTriangle:
    return LabeledTriangle.make(*pairs)


def _simulate_type_one(v, steps, flip1):
    """Level-1 Type I flip -> prepared Type III flip at level 2."""
    t1, t2 = sorted(flip1.before)
    edge = set(t1.labels) & set(t2.labels)
    (a, b) = sorted(x[0] for x in edge)
    c = next(x[0] for x in t1.labels if x not in edge)
    d = next(x[0] for x in t2.labels if x not in edge)
    w_a = LabeledTriangle.make(_pair(a, b), _pair(a, c), _pair(a, d))
    w_b = LabeledTriangle.make(_pair(a, b), _pair(b, c), _pair(b, d))
    v = _prepare_white(v, steps, w_a)
    v = _prepare_white(v, steps, w_b)
    before = frozenset(
        (
            _black(_pair(a, b), _pair(b, c), _pair(a, c)),
            _black(_pair(a, b), _pair(b, d), _pair(a, d)),
            w_a,
            w_b,
        )
    )
    after = frozenset(
        (
            LabeledTriangle.make(_pair(c, d), _pair(a, d), _pair(b, d)),
            LabeledTriangle.make(_pair(c, d), _pair(a, c), _pair(b, c)),
            _black(_pair(c, d), _pair(b, c), _pair(b, d)),
            _black(_pair(c, d), _pair(a, c), _pair(a, d)),
        )
    )
    flip = Flip(FlipType.III, Direction.FORWARD, before, after)
    v = apply_flip(v, flip)
    steps.append(flip)
    return v


def _simulate_type_two(v, steps, flip1):
    """Level-1 Type II flip -> prepared Type IV flip at level 2."""
    if flip1.direction is Direction.FORWARD:
        (big,) = flip1.before
        a, b, c = (lab[0] for lab in big.labels)
        d = next(
            x[0]
            for tri in flip1.after
            for x in tri.labels
            if x not in big.labels
        )
        whites = [
            LabeledTriangle.make(*[_pair(x, y) for y in (a, b, c, d) if y != x])
            for x in (a, b, c)
        ]
        for w in whites:
            v = _prepare_white(v, steps, w)
        before = frozenset(
            [_black(_pair(a, b), _pair(b, c), _pair(a, c))] + whites
        )
        after = frozenset(
            (
                LabeledTriangle.make(_pair(a, d), _pair(b, d), _pair(c, d)),
                _black(_pair(a, b), _pair(b, d), _pair(a, d)),
                _black(_pair(b, c), _pair(c, d), _pair(b, d)),
                _black(_pair(a, c), _pair(a, d), _pair(c, d)),
            )
        )
    else:
        (big,) = flip1.after
        a, b, c = (lab[0] for lab in big.labels)
        d = next(
            x[0]
            for tri in flip1.before
            for x in tri.labels
            if x not in big.labels
        )
        star = LabeledTriangle.make(_pair(a, d), _pair(b, d), _pair(c, d))
        v = _prepare_white(v, steps, star)
        before = frozenset(
            (
                star,
                _black(_pair(a, b), _pair(b, d), _pair(a, d)),
                _black(_pair(b, c), _pair(c, d), _pair(b, d)),
                _black(_pair(a, c), _pair(a, d), _pair(c, d)),
            )
        )
        after = frozenset(
            [_black(_pair(a, b), _pair(b, c), _pair(a, c))]
            + [
                LabeledTriangle.make(*[_pair(x, y) for y in (a, b, c, d) if y != x])
                for x in (a, b, c)
            ]
        )
    flip = Flip(FlipType.IV, Direction.FORWARD, before, after)
    v = apply_flip(v, flip)
    steps.append(flip)
    return v


def _match_whites(v: Hypertriangulation, target: Hypertriangulation, steps):
    if v.blacks != target.blacks:
        raise AssertionError("black triangles must already agree")
    gaps = _white_gaps(v)
    target_whites = sorted(target.whites)
    for i in sorted(gaps):
        for region, current in gaps[i]:
            wanted = []
            for t in target_whites:
                a, b, c = target.realized(t)
                centroid = (a + b + c) * Fraction(1, 3)
                if region.contains(centroid) == "inside":
                    wanted.append(t)
            for flip in polygon_path(v.config, region, current, frozenset(wanted)):
                v = apply_flip(v, flip)
                steps.append(flip)
    return v


def connect_level2(
    config: PointConfig,
    u: Hypertriangulation,
    u_prime: Hypertriangulation,
    *,
    max_steps: int = 100_000,
) -> list[Flip]:
    """A valid flip sequence from u to u_prime at level 2.

    Collapses both to level 1, connects those by Type I/II flips through the
    Delaunay form, simulates each level-1 flip by a prepared Type III/IV flip
    at level 2, and finishes by retriangulating white regions with polygon
    paths.
    """
    _require_strongly_generic(config, 2)
    if u.k != 2 or u_prime.k != 2:
        raise PreconditionError("connect_level2 needs two level-2 inputs")
    t = collapse_level2(u)
    t_prime = collapse_level2(u_prime)
    steps: list[Flip] = []
    v = u
    cur_level1 = t
    for flip1 in level1_path(config, t, t_prime):
        if flip1.type is FlipType.I:
            v = _simulate_type_one(v, steps, flip1)
        else:
            v = _simulate_type_two(v, steps, flip1)
        cur_level1 = cur_level1.replace(flip1.before, flip1.after)
        if v.blacks != _aged(cur_level1):
            raise AssertionError("black set stopped tracking the level-1 state")
        if len(steps) > max_steps:
            raise BudgetExceeded(f"path exceeded {max_steps} flips")
    v = _match_whites(v, u_prime, steps)
    if canonical_key(v) != canonical_key(u_prime):
        raise AssertionError("constructive path did not land on the target")
    if len(steps) > max_steps:
        raise BudgetExceeded(f"path exceeded {max_steps} flips")
    return steps


# ---------------------------------------------------------------------------
# Reports for restricted flip-connectivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConnectivityReport:
    node_count: int
    edge_count: int
    connected: bool
    detail: str = ""


def convex_position_check(
    config: PointConfig, k: int, *, budget: int | None = None
) -> ConnectivityReport:
    """Connectivity of the flip graph restricted to Type I and III arcs."""
    if not config.in_convex_position():
        raise PreconditionError("configuration is not in convex position")
    graph = flip_graph(config, k, budget=budget)
    types = {FlipType.I, FlipType.III}
    edges = [e for e in graph.edges if e[2] in types]
    return ConnectivityReport(
        node_count=len(graph.nodes),
        edge_count=len(edges),
        connected=graph.is_connected(types=types),
        detail="flip graph restricted to Types I and III",
    )


def coherent_subgraph_check(
    config: PointConfig, k: int, *, budget: int | None = None
):
    """Connectivity of the subgraph induced by coherent hypertriangulations."""
    from .coherent import is_coherent

    graph = flip_graph(config, k, budget=budget)
    witnesses = {}
    coherent_nodes = set()
    for key, node in graph.nodes.items():
        res = is_coherent(node)
        if res.coherent:
            coherent_nodes.add(key)
            witnesses[key] = res.witness
    edges = [
        e for e in graph.edges if e[0] in coherent_nodes and e[1] in coherent_nodes
    ]
    report = ConnectivityReport(
        node_count=len(coherent_nodes),
        edge_count=len(edges),
        connected=graph.is_connected(nodes=coherent_nodes),
        detail=f"{len(coherent_nodes)} of {len(graph.nodes)} nodes are coherent",
    )
    return report, witnesses
