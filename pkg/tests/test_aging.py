"""Aging map tests: formulas, level-1 <-> level-2 constructions, overlap."""

import json
import pathlib
import random
from fractions import Fraction

import pytest

from hyperflip import (
    Color,
    Hypertriangulation,
    LabeledTriangle,
    PointConfig,
    age_triangle,
    aging_overlap,
    build_level2,
    canonical_key,
    collapse_level2,
    genericity,
    star_convexity_witness,
    unage_triangle,
    validate,
)
from hyperflip.connectivity import enumerate_all
from hyperflip.errors import PreconditionError
from hyperflip.geometry import orientation, signed_area2

from conftest import q4_level2_fixture, random_strongly_generic

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def tri(*labels):
    return LabeledTriangle.make(*labels)


def test_age_triangle_formula():
    assert age_triangle(tri((1,), (2,), (3,))).labels == ((1, 2), (1, 3), (2, 3))
    assert age_triangle(tri((1, 2), (1, 3), (1, 4))).labels == (
        (1, 2, 3),
        (1, 2, 4),
        (1, 3, 4),
    )
    with pytest.raises(PreconditionError):
        age_triangle(tri((1, 2), (2, 3), (1, 3)))  # black input


def test_unage_triangle_formula():
    assert unage_triangle(tri((1, 2), (2, 3), (1, 3))).labels == ((1,), (2,), (3,))
    with pytest.raises(PreconditionError):
        unage_triangle(tri((1, 2), (1, 3), (1, 4)))  # white input


def test_age_unage_roundtrip_random_labels():
    rng = random.Random(13)
    import itertools

    whites = []
    for a, b, c in itertools.combinations(itertools.combinations(range(1, 8), 3), 3):
        try:
            t = tri(a, b, c)
        except Exception:
            continue
        if t.color is Color.WHITE:
            whites.append(t)
    assert whites
    for t in rng.sample(whites, min(50, len(whites))):
        assert unage_triangle(age_triangle(t)) == t


def test_build_level2_q4(q4):
    start = Hypertriangulation(
        q4.level(1), [tri((1,), (2,), (3,)), tri((1,), (3,), (4,))]
    )
    built = build_level2(q4, start)
    assert canonical_key(built) == canonical_key(q4_level2_fixture(q4))
    assert validate(built).ok


def test_build_level2_single_triangle():
    t3 = PointConfig.from_coords([(0, 0), (4, 0), (1, 3)])
    start = Hypertriangulation(t3.level(1), [tri((1,), (2,), (3,))])
    built = build_level2(t3, start)
    assert len(built.triangles) == 1
    assert len(built.blacks) == 1


def test_collapse_level2_both_q4_nodes(q4):
    fixture = q4_level2_fixture(q4)
    assert {t.key for t in collapse_level2(fixture).triangles} == {"1-2-3", "1-3-4"}
    other = Hypertriangulation(
        q4.level(2),
        [
            tri((1, 2), (1, 4), (2, 4)),
            tri((1, 2), (2, 3), (2, 4)),
            tri((1, 4), (2, 4), (3, 4)),
            tri((2, 3), (2, 4), (3, 4)),
        ],
    )
    assert {t.key for t in collapse_level2(other).triangles} == {"1-2-4", "2-3-4"}


def test_black_set_equals_aged_whites_exhaustive_n5():
    rng = random.Random(41)
    config = random_strongly_generic(rng, 5)
    for t1 in enumerate_all(config, 1):
        built = build_level2(config, t1)
        aged = frozenset(age_triangle(w) for w in t1.triangles)
        assert built.blacks == aged
        assert collapse_level2(built).triangles == t1.triangles


def test_roundtrip_random_n6_n7():
    rng = random.Random(43)
    for n in (6, 7):
        config = random_strongly_generic(rng, n)
        from hyperflip.connectivity import delaunay_triangulation

        t1 = delaunay_triangulation(config)
        built = build_level2(config, t1)
        assert validate(built).ok
        assert collapse_level2(built).triangles == t1.triangles


def test_gap_count_matches_interior_vertex_stars():
    # interior vertices contribute exactly one gap whose area equals the area
    # of their level-1 star (the gap is a translated copy of the star).
    rng = random.Random(47)
    for _ in range(3):
        config = random_strongly_generic(rng, 7, require_interior=True)
        from hyperflip.connectivity import delaunay_triangulation
        from hyperflip.hypertriangulations import white_regions

        t1 = delaunay_triangulation(config)
        built = build_level2(config, t1)
        assert len(built.blacks) == len(t1.triangles)
        hull = set(config.hull_indices())
        used = {lab[0] for lab in t1.used_labels()}
        for i in sorted(used - hull):
            star = [t for t in t1.triangles if (i,) in t.labels]
            star_area = sum(
                (abs(signed_area2(*(config.point(j[0]) for j in t.labels))) / 2
                 for t in star),
                Fraction(0),
            )
            regions = white_regions(built, i)
            assert len(regions) == 1
            polygon, members = regions[0]
            assert polygon.area == star_area


def test_star_convexity_on_interior_point_sets():
    rng = random.Random(53)
    checked = 0
    while checked < 2:
        config = random_strongly_generic(rng, 5, require_interior=True)
        interior = [
            i for i in range(1, 6) if i not in config.hull_indices()
        ]
        for u in enumerate_all(config, 2):
            for i in interior:
                whites = [t for t in u.whites if all(i in lab for lab in t.labels)]
                for t in whites:
                    probe = _interior_probe(u, t, rng)
                    if probe is None:
                        continue
                    assert star_convexity_witness(u, i, probe)
        checked += 1


def _interior_probe(u, t, rng, attempts=20):
    """Random rational point inside t avoiding segment-through-vertex cases."""
    a, b, c = u.realized(t)
    base = u.config.base
    for _ in range(attempts):
        w1, w2 = rng.randint(1, 5), rng.randint(1, 5)
        w3 = rng.randint(1, 5)
        s = w1 + w2 + w3
        x = (a * w1 + b * w2 + c * w3) * Fraction(1, s)
        common = set.intersection(*(set(lab) for lab in t.labels))
        target = base.point(next(iter(common))) * 2
        if all(
            orientation(x, target, u.config.point(lab)) != 0
            for lab in u.config.labels
        ):
            return x
    return None


def test_star_convexity_rejects_bad_probe():
    rng = random.Random(59)
    config = random_strongly_generic(rng, 5, require_interior=True)
    interior = [i for i in range(1, 6) if i not in config.hull_indices()]
    u = enumerate_all(config, 2)[0]
    i = interior[0]
    blacks = sorted(u.blacks)
    a, b, c = u.realized(blacks[0])
    centroid = (a + b + c) * Fraction(1, 3)
    with pytest.raises(PreconditionError):
        star_convexity_witness(u, i, centroid)


def test_aging_overlap_empty_cases(q4):
    start = Hypertriangulation(
        q4.level(1), [tri((1,), (2,), (3,)), tri((1,), (3,), (4,))]
    )
    assert aging_overlap(start) == []
    assert aging_overlap(q4_level2_fixture(q4)) == []


def test_aging_overlap_level1_always_empty():
    rng = random.Random(61)
    for n in (5, 6):
        config = random_strongly_generic(rng, n)
        for t1 in enumerate_all(config, 1)[:10]:
            assert aging_overlap(t1) == []


def test_aging_overlap_witness_fixture_regression():
    data = json.loads((FIXTURES / "overlap_witness.json").read_text())
    config = PointConfig.from_coords(
        [(Fraction(x), Fraction(y)) for x, y in data["points"]]
    )
    assert genericity(config, 2).strongly_generic
    u = Hypertriangulation(
        config.level(2),
        [tri(*[tuple(lab) for lab in entry]) for entry in data["triangles"]],
    )
    assert validate(u).ok
    pairs = aging_overlap(u)
    assert pairs
    recorded = {
        (tuple(tuple(lab) for lab in a), tuple(tuple(lab) for lab in b))
        for a, b in data["overlaps"]
    }
    found = {(x.labels, y.labels) for x, y in pairs}
    assert found == recorded


def test_collapse_invariants_blacks_at_hull_and_interior_edges():
    # every hull edge of conv(A) owns exactly one black at a_ij; every other
    # level-1 edge used by the collapse owns exactly two, on opposite sides
    # of the line through the doubled endpoints
    rng = random.Random(67)
    config = random_strongly_generic(rng, 5)
    hull = config.hull_indices()
    hull_edges = {
        tuple(sorted((hull[i], hull[(i + 1) % len(hull)])))
        for i in range(len(hull))
    }
    for u in enumerate_all(config, 2):
        incident: dict[tuple, list] = {}
        for black in u.blacks:
            for lab in black.labels:
                incident.setdefault(lab, []).append(black)
        t1 = collapse_level2(u)
        used_edges = set()
        for t in t1.triangles:
            a, b, c = (lab[0] for lab in t.labels)
            used_edges |= {tuple(sorted(e)) for e in ((a, b), (b, c), (a, c))}
        for i, j in sorted(used_edges):
            blacks_here = incident.get((i, j), [])
            if (i, j) in hull_edges:
                assert len(blacks_here) == 1
            else:
                assert len(blacks_here) == 2
                di = config.point(i) * 2
                dj = config.point(j) * 2
                sides = []
                for black in blacks_here:
                    apex = next(
                        lab for lab in black.labels if lab != (i, j)
                    )
                    sides.append(orientation(di, dj, u.config.point(apex)))
                assert sorted(sides) == [-1, 1]


def test_star_convexity_at_triangle_centroids():
    rng = random.Random(71)
    config = random_strongly_generic(rng, 5, require_interior=True)
    interior = [i for i in range(1, 6) if i not in config.hull_indices()]
    checked = 0
    for u in enumerate_all(config, 2):
        for i in interior:
            whites = [t for t in u.whites if all(i in lab for lab in t.labels)]
            target = config.point(i) * 2
            for t in whites:
                a, b, c = u.realized(t)
                centroid = (a + b + c) * Fraction(1, 3)
                if any(
                    orientation(centroid, target, u.config.point(lab)) == 0
                    for lab in u.config.labels
                ):
                    continue  # sight line grazes a labeled point: resample-class case
                assert star_convexity_witness(u, i, centroid)
                checked += 1
    assert checked > 0
