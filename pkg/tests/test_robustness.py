"""Pipeline robustness on fractional, negative, and large coordinates.

Every other test file uses small integer coordinates; these runs push exact
rational coordinates (from perturbation) and million-scale integers through
enumeration, flips, aging, coherence, and connectivity.
"""

from hyperflip import (
    PointConfig,
    apply_flip,
    build_level2,
    canonical_key,
    coherent_subdivision,
    collapse_level2,
    connect_level2,
    enumerate_all,
    flip_graph,
    genericity,
    gkz,
    is_coherent,
    perturb,
    validate,
)


def test_fractional_pipeline_after_perturbation():
    cocircular = PointConfig.from_coords(
        [(0, 0), (10, 0), (13, 8), (5, 14), (-3, 8)]
    )
    assert genericity(cocircular, 2).tier.value == "generic"
    config = perturb(cocircular, 2, seed=12)
    assert genericity(config, 2).strongly_generic
    assert any(p.x.denominator > 1 or p.y.denominator > 1 for p in config.points)

    nodes = enumerate_all(config, 2)
    assert len(nodes) >= 2
    assert flip_graph(config, 2).is_connected()
    for node in nodes:
        assert validate(node).ok
        assert gkz(node).total == 2
        res = is_coherent(node)
        if res.coherent:
            again = coherent_subdivision(config, 2, res.witness)
            assert canonical_key(again) == canonical_key(node)
    a, b = nodes[0], nodes[-1]
    cur = a
    for flip in connect_level2(config, a, b):
        cur = apply_flip(cur, flip)
        assert validate(cur).ok
    assert canonical_key(cur) == canonical_key(b)


def test_fractional_aging_roundtrip():
    square = perturb(
        PointConfig.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)]), 2, seed=5
    )
    for t1 in enumerate_all(square, 1):
        built = build_level2(square, t1)
        assert validate(built).ok
        assert collapse_level2(built).triangles == t1.triangles


def test_million_scale_coordinates():
    config = PointConfig.from_coords(
        [
            (-1000000, -999999),
            (999983, -1000003),
            (1000019, 999991),
            (-999977, 1000007),
            (37, 41),
        ]
    )
    assert genericity(config, 2).strongly_generic
    nodes = enumerate_all(config, 2)
    assert len(nodes) == 12
    for node in nodes[:4]:
        assert validate(node).ok
        assert gkz(node).total == 2
