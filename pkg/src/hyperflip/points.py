"""Labeled point configurations: base sets, k-fold sums, genericity, perturbation."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import GenericityError, LabelError, PreconditionError
from .geometry import (
    COLLINEAR,
    Point2,
    SimplePolygon,
    convex_hull,
    in_circle,
    orientation,
    pt,
    rational,
)

# A label is a strictly increasing tuple of 1-based indices into the base set.
Label = tuple[int, ...]


def as_label(indices) -> Label:
    out = tuple(sorted(indices))
    if not out:
        raise LabelError("empty label")
    if any(i < 1 for i in out):
        raise LabelError(f"label indices must be 1-based: {out}")
    if len(set(out)) != len(out):
        raise LabelError(f"label indices must be distinct: {out}")
    return out


def label_text(label: Label) -> str:
    """Canonical textual form, e.g. "1.3"."""
    return ".".join(str(i) for i in label)


def parse_label(text: str) -> Label:
    return as_label(int(part) for part in text.split("."))


def _sorted3(a, b, c):
    """Sort three comparables, returning (sorted triple, permutation sign)."""
    sign = 1
    if a > b:
        a, b, sign = b, a, -sign
    if b > c:
        b, c, sign = c, b, -sign
    if a > b:
        a, b, sign = b, a, -sign
    return (a, b, c), sign


class PointConfig:
    """The base set A: n >= 3 points with stable 1-based indices."""

    def __init__(self, points):
        pts = tuple(points)
        if len(pts) < 3:
            raise PreconditionError("a point configuration needs at least 3 points")
        self.points = pts
        self.n = len(pts)
        self._levels: dict[int, "KFoldConfig"] = {}
        self._incircle_cache: dict[tuple[int, int, int, int], int] = {}
        self._genericity_cache: dict[int, "GenericityResult"] = {}
        self._hull_indices: tuple[int, ...] | None = None

    @classmethod
    def from_coords(cls, coords) -> "PointConfig":
        return cls(pt(x, y) for x, y in coords)

    def point(self, i: int) -> Point2:
        if not 1 <= i <= self.n:
            raise LabelError(f"point index {i} out of range 1..{self.n}")
        return self.points[i - 1]

    def sum_of(self, label: Label) -> Point2:
        x = Fraction(0)
        y = Fraction(0)
        for i in label:
            p = self.point(i)
            x += p.x
            y += p.y
        return Point2(x, y)

    def level(self, k: int) -> "KFoldConfig":
        """The k-fold sum configuration; one shared instance per level."""
        if k not in self._levels:
            self._levels[k] = KFoldConfig(self, k)
        return self._levels[k]

    def incircle(self, i: int, j: int, l: int, m: int) -> int:
        key = (i, j, l, m)
        cached = self._incircle_cache.get(key)
        if cached is None:
            cached = in_circle(self.point(i), self.point(j), self.point(l), self.point(m))
            self._incircle_cache[key] = cached
        return cached

    def hull_indices(self) -> tuple[int, ...]:
        """Indices of the hull vertices of A, counterclockwise."""
        if self._hull_indices is None:
            lookup = {}
            for i in range(1, self.n + 1):
                lookup.setdefault(self.points[i - 1], i)
            hull = convex_hull(self.points)
            self._hull_indices = tuple(lookup[p] for p in hull)
        return self._hull_indices

    def in_convex_position(self) -> bool:
        return len(self.hull_indices()) == self.n

    def __eq__(self, other):
        return isinstance(other, PointConfig) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointConfig({list(self.points)})"


class KFoldConfig:
    """The labeled multiset A^(k) of all C(n, k) k-fold sums."""

    def __init__(self, base: PointConfig, k: int):
        if not 1 <= k <= base.n - 1:
            raise PreconditionError(f"level k={k} out of range 1..{base.n - 1}")
        self.base = base
        self.k = k
        self.labels: tuple[Label, ...] = tuple(
            itertools.combinations(range(1, base.n + 1), k)
        )
        self.entries: dict[Label, Point2] = {
            lab: base.sum_of(lab) for lab in self.labels
        }
        self._point_to_label: dict[Point2, Label] | None = None
        self._orient_cache: dict[tuple[Label, Label, Label], int] = {}
        self._hull_labels: tuple[Label, ...] | None = None
        self._hull_polygon: SimplePolygon | None = None

    @property
    def n(self) -> int:
        return self.base.n

    def point(self, label: Label) -> Point2:
        try:
            return self.entries[label]
        except KeyError:
            raise LabelError(f"label {label} is not a {self.k}-subset of [{self.n}]")

    def label_of_point(self, p: Point2) -> Label:
        if self._point_to_label is None:
            mapping: dict[Point2, Label] = {}
            for lab, q in self.entries.items():
                if q in mapping:
                    raise GenericityError(
                        f"coinciding points {mapping[q]} and {lab} in A^({self.k})",
                        witness=(mapping[q], lab),
                    )
                mapping[q] = lab
            self._point_to_label = mapping
        try:
            return self._point_to_label[p]
        except KeyError:
            raise LabelError(f"{p} is not a point of A^({self.k})")

    def orient(self, a: Label, b: Label, c: Label) -> int:
        """Cached orientation sign of the labeled points a, b, c."""
        key, sign = _sorted3(a, b, c)
        cached = self._orient_cache.get(key)
        if cached is None:
            cached = orientation(self.point(key[0]), self.point(key[1]), self.point(key[2]))
            self._orient_cache[key] = cached
        return cached * sign

    def hull_labels(self) -> tuple[Label, ...]:
        if self._hull_labels is None:
            hull = convex_hull(self.entries.values())
            self._hull_labels = tuple(self.label_of_point(p) for p in hull)
        return self._hull_labels

    def hull_edges(self) -> set[tuple[Label, Label]]:
        hull = self.hull_labels()
        out = set()
        for i in range(len(hull)):
            a, b = hull[i], hull[(i + 1) % len(hull)]
            out.add((a, b) if a < b else (b, a))
        return out

    def hull_polygon(self) -> SimplePolygon:
        if self._hull_polygon is None:
            self._hull_polygon = SimplePolygon(
                [self.point(lab) for lab in self.hull_labels()]
            )
        return self._hull_polygon

    def __repr__(self):
        return f"KFoldConfig(n={self.n}, k={self.k})"


def k_fold_sums(config: PointConfig, k: int) -> KFoldConfig:
    """All C(n, k) labeled k-fold sums of the base points."""
    return config.level(k)


class GenericityTier(Enum):
    STRONGLY_GENERIC = "strongly-generic"
    GENERIC = "generic"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class GenericityResult:
    tier: GenericityTier
    witness: tuple | None = None
    detail: str = ""

    @property
    def strongly_generic(self) -> bool:
        return self.tier is GenericityTier.STRONGLY_GENERIC

    @property
    def degenerate(self) -> bool:
        return self.tier is GenericityTier.DEGENERATE


def genericity(config: PointConfig, k: int) -> GenericityResult:
    """Three-tier genericity test.

    Degenerate: some three base points are collinear (witness triple).
    Generic: base points fine, but A^(k) has coinciding points, a collinear
    triple, or four base points lie on a common circle.
    StronglyGeneric: none of the above; all strict predicates are decided and
    the level-1 Delaunay triangulation is unique.
    """
    cached = config._genericity_cache.get(k)
    if cached is not None:
        return cached
    result = _genericity_uncached(config, k)
    config._genericity_cache[k] = result
    return result


def _genericity_uncached(config: PointConfig, k: int) -> GenericityResult:
    for i, j, l in itertools.combinations(range(1, config.n + 1), 3):
        if orientation(config.point(i), config.point(j), config.point(l)) == COLLINEAR:
            return GenericityResult(
                GenericityTier.DEGENERATE,
                witness=(i, j, l),
                detail=f"base points {i}, {j}, {l} are collinear",
            )
    level = config.level(k)
    seen: dict[Point2, Label] = {}
    for lab in level.labels:
        p = level.point(lab)
        if p in seen:
            return GenericityResult(
                GenericityTier.GENERIC,
                witness=(seen[p], lab),
                detail=f"points {label_text(seen[p])} and {label_text(lab)} coincide",
            )
        seen[p] = lab
    for a, b, c in itertools.combinations(level.labels, 3):
        if level.orient(a, b, c) == COLLINEAR:
            return GenericityResult(
                GenericityTier.GENERIC,
                witness=(a, b, c),
                detail=(
                    f"points {label_text(a)}, {label_text(b)}, {label_text(c)} "
                    "are collinear"
                ),
            )
    for i, j, l, m in itertools.combinations(range(1, config.n + 1), 4):
        if config.incircle(i, j, l, m) == 0:
            return GenericityResult(
                GenericityTier.GENERIC,
                witness=(i, j, l, m),
                detail=f"base points {i}, {j}, {l}, {m} are cocircular",
            )
    return GenericityResult(GenericityTier.STRONGLY_GENERIC)


def _strict_signature(config: PointConfig, k: int):
    """All strict predicate signs over A^(k) plus base incircle signs."""
    level = config.level(k)
    orient_signs = {}
    for a, b, c in itertools.combinations(level.labels, 3):
        s = level.orient(a, b, c)
        if s != 0:
            orient_signs[(a, b, c)] = s
    circle_signs = {}
    for q in itertools.combinations(range(1, config.n + 1), 4):
        s = config.incircle(*q)
        if s != 0:
            circle_signs[q] = s
    return orient_signs, circle_signs


def perturb(config: PointConfig, k: int, seed: int) -> PointConfig:
    """Nudge the base points until genericity(A', k) is StronglyGeneric.

    The offset magnitude starts at 1/2**8 and is halved (with fresh seeded
    directions) until every predicate sign that was strict over A^(k) is
    preserved and strong genericity holds.  Deterministic in the seed;
    strongly generic inputs are returned unchanged.
    """
    tier = genericity(config, k)
    if tier.degenerate:
        raise GenericityError(
            f"cannot perturb a degenerate configuration: {tier.detail}",
            witness=tier.witness,
        )
    if tier.strongly_generic:
        return config

    orint_ref, circle_ref = _strict_signature(config, k)
    rng = random.Random(seed)
    for attempt in range(200):
        delta = Fraction(1, 2 ** (8 + attempt))
        moved = []
        for p in config.points:
            dx = rational(rng.randint(-16, 16)) * delta / 16
            dy = rational(rng.randint(-16, 16)) * delta / 16
            moved.append(Point2(p.x + dx, p.y + dy))
        candidate = PointConfig(moved)
        if not genericity(candidate, k).strongly_generic:
            continue
        level = candidate.level(k)
        if any(level.orient(a, b, c) != s for (a, b, c), s in orint_ref.items()):
            continue
        if any(candidate.incircle(*q) != s for q, s in circle_ref.items()):
            continue
        return candidate
    raise GenericityError("perturbation failed to reach strong genericity")
