"""Labeled configuration tests: k-fold sums, genericity tiers, perturbation."""

import itertools
import random
from fractions import Fraction

import pytest

from hyperflip import (
    GenericityTier,
    PointConfig,
    genericity,
    k_fold_sums,
    perturb,
)
from hyperflip.errors import GenericityError, LabelError, PreconditionError
from hyperflip.geometry import orientation, pt
from hyperflip.points import as_label, label_text, parse_label

from conftest import random_strongly_generic


def test_label_helpers():
    assert as_label([3, 1]) == (1, 3)
    assert label_text((1, 3)) == "1.3"
    assert parse_label("2.4") == (2, 4)
    with pytest.raises(LabelError):
        as_label([])
    with pytest.raises(LabelError):
        as_label([0, 1])
    with pytest.raises(LabelError):
        as_label([2, 2])


def test_k_fold_sums_q4(q4):
    level = k_fold_sums(q4, 2)
    expected = {
        (1, 2): pt(6, 0),
        (1, 3): pt(7, 5),
        (1, 4): pt(1, 6),
        (2, 3): pt(13, 5),
        (2, 4): pt(7, 6),
        (3, 4): pt(8, 11),
    }
    assert level.entries == expected


def test_k_fold_sums_level_one_is_base(q4):
    level = k_fold_sums(q4, 1)
    assert [level.point((i,)) for i in range(1, 5)] == list(q4.points)


def test_k_fold_sums_t4_centrally_symmetric(t4):
    level = k_fold_sums(t4, 2)
    full = t4.sum_of((1, 2, 3, 4))
    assert full * Fraction(1, 2) == pt(6, 4)
    for lab in level.labels:
        comp = tuple(sorted(set(range(1, 5)) - set(lab)))
        assert level.point(lab) + level.point(comp) == full
    # all six sums are hull vertices of a convex hexagon
    assert len(level.hull_labels()) == 6


def test_k_fold_sums_range_checks(q4):
    with pytest.raises(PreconditionError):
        k_fold_sums(q4, 0)
    with pytest.raises(PreconditionError):
        k_fold_sums(q4, 4)


def test_complement_sum_identity_random():
    rng = random.Random(19)
    for _ in range(5):
        config = random_strongly_generic(rng, 6)
        full = config.sum_of(tuple(range(1, 7)))
        level = config.level(2)
        for lab in level.labels:
            comp = tuple(sorted(set(range(1, 7)) - set(lab)))
            assert level.point(lab) + config.sum_of(comp) == full


def test_k_fold_sums_translation_covariance(q4):
    shift = pt(3, -2)
    moved = PointConfig([p + shift for p in q4.points])
    level0 = q4.level(2)
    level1 = moved.level(2)
    for lab in level0.labels:
        assert level1.point(lab) == level0.point(lab) + shift * 2


def test_genericity_tiers(q4):
    assert genericity(q4, 2).strongly_generic

    square = PointConfig.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    result = genericity(square, 2)
    assert result.tier is GenericityTier.GENERIC
    assert set(result.witness) == {(1, 3), (2, 4)}  # coinciding diagonal sums

    degenerate = PointConfig.from_coords([(0, 0), (1, 0), (2, 0), (0, 1)])
    result = genericity(degenerate, 1)
    assert result.degenerate
    assert result.witness == (1, 2, 3)


def test_genericity_matches_exhaustive_scan(q4):
    # independent scan: all triples of sums plus all base quadruples
    level = q4.level(2)
    points = [level.point(lab) for lab in level.labels]
    assert len(set(points)) == len(points)
    for a, b, c in itertools.combinations(points, 3):
        assert orientation(a, b, c) != 0
    for i, j, l, m in itertools.combinations(range(1, 5), 4):
        assert q4.incircle(i, j, l, m) != 0
    assert genericity(q4, 2).strongly_generic


def test_genericity_detects_cocircular_base():
    cocirc = PointConfig.from_coords([(0, 0), (10, 0), (13, 8), (5, 14), (-3, 8)])
    result = genericity(cocirc, 1)
    assert result.tier is GenericityTier.GENERIC
    assert result.witness == (1, 2, 3, 5)


def test_perturb_square():
    square = PointConfig.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    out = perturb(square, 2, seed=7)
    assert genericity(out, 2).strongly_generic
    level = out.level(2)
    assert level.point((1, 3)) != level.point((2, 4))
    # strict orientations of the original square survive
    for a, b, c in itertools.combinations(range(1, 5), 3):
        before = orientation(square.point(a), square.point(b), square.point(c))
        after = orientation(out.point(a), out.point(b), out.point(c))
        assert before == after


def test_perturb_deterministic_and_fixed_point(q4):
    square = PointConfig.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert perturb(square, 2, seed=3) == perturb(square, 2, seed=3)
    assert perturb(q4, 2, seed=3) is q4


def test_perturb_rejects_degenerate():
    degenerate = PointConfig.from_coords([(0, 0), (1, 0), (2, 0), (0, 1)])
    with pytest.raises(GenericityError):
        perturb(degenerate, 1, seed=0)


def test_perturb_never_moves_far():
    square = PointConfig.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    out = perturb(square, 2, seed=99)
    for p, q in zip(square.points, out.points):
        assert abs(p.x - q.x) <= Fraction(1, 256)
        assert abs(p.y - q.y) <= Fraction(1, 256)
