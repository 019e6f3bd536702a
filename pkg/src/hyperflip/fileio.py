"""JSON file formats with exact rationals as strings.

Points file:  {"points": [["0", "0"], ["6", "0"], ...]}
Triangulation file:  {"n": 4, "k": 2, "triangles": [[[1,2],[1,3],[2,3]], ...]}
Flip sequence file:  {"k": 2, "flips": [{"type": "III", "direction": ...}]}

Rational strings accept "p/q", integers and exact decimals ("1.25"); output
is always canonical "p" or "p/q".  Dumps are byte-stable: sorted keys, fixed
separators, trailing newline.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coherent import GkzVector, HeightFunction
from .errors import HyperflipError
from .flips import Direction, Flip, FlipType
from .geometry import format_rational
from .hypertriangulations import Hypertriangulation, LabeledTriangle
from .points import PointConfig


class FormatError(HyperflipError):
    """Malformed input file."""


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational {text!r}: {exc}")
    raise FormatError(f"bad rational {text!r}")


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def _load(path_or_text: str, from_path: bool):
    try:
        if from_path:
            with open(path_or_text, "r", encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(path_or_text)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read JSON: {exc}")


def points_to_json(config: PointConfig) -> dict:
    return {
        "points": [
            [format_rational(p.x), format_rational(p.y)] for p in config.points
        ]
    }


def points_from_json(data) -> PointConfig:
    if not isinstance(data, dict) or "points" not in data:
        raise FormatError('points file needs a "points" array')
    coords = []
    for entry in data["points"]:
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"bad point entry {entry!r}")
        coords.append((parse_rational(entry[0]), parse_rational(entry[1])))
    try:
        return PointConfig.from_coords(coords)
    except HyperflipError as exc:
        raise FormatError(str(exc))


def load_points(path: str) -> PointConfig:
    return points_from_json(_load(path, from_path=True))


def save_points(path: str, config: PointConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(points_to_json(config)))


def triangles_to_json(t: Hypertriangulation) -> dict:
    return {
        "n": t.n,
        "k": t.k,
        "triangles": sorted(
            [list(lab) for lab in tri.labels] for tri in t.triangles
        ),
    }


def triangles_from_json(data, config: PointConfig) -> Hypertriangulation:
    for key in ("n", "k", "triangles"):
        if not isinstance(data, dict) or key not in data:
            raise FormatError(f'triangulation file needs "{key}"')
    if data["n"] != config.n:
        raise FormatError(
            f"triangulation file has n={data['n']}, points file has n={config.n}"
        )
    k = data["k"]
    try:
        level = config.level(k)
        triangles = [
            LabeledTriangle.make(*[tuple(lab) for lab in entry])
            for entry in data["triangles"]
        ]
        return Hypertriangulation(level, triangles)
    except HyperflipError as exc:
        raise FormatError(str(exc))


def load_triangulation(path: str, config: PointConfig) -> Hypertriangulation:
    return triangles_from_json(_load(path, from_path=True), config)


def save_triangulation(path: str, t: Hypertriangulation, extra: dict | None = None) -> None:
    data = triangles_to_json(t)
    if extra:
        data.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(data))


def flip_to_json(f: Flip) -> dict:
    return {
        "type": f.type.value,
        "direction": f.direction.value,
        "before": sorted([list(lab) for lab in tri.labels] for tri in f.before),
        "after": sorted([list(lab) for lab in tri.labels] for tri in f.after),
    }


def flip_from_json(data) -> Flip:
    try:
        return Flip(
            FlipType(data["type"]),
            Direction(data["direction"]),
            frozenset(
                LabeledTriangle.make(*[tuple(lab) for lab in entry])
                for entry in data["before"]
            ),
            frozenset(
                LabeledTriangle.make(*[tuple(lab) for lab in entry])
                for entry in data["after"]
            ),
        )
    except (KeyError, ValueError, HyperflipError) as exc:
        raise FormatError(f"bad flip entry: {exc}")


def flips_to_json(k: int, flips) -> dict:
    return {"k": k, "flips": [flip_to_json(f) for f in flips]}


def flips_from_json(data) -> list[Flip]:
    if not isinstance(data, dict) or "flips" not in data:
        raise FormatError('flip file needs "flips"')
    return [flip_from_json(entry) for entry in data["flips"]]


def save_flips(path: str, k: int, flips) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(flips_to_json(k, flips)))


def load_flips(path: str) -> list[Flip]:
    return flips_from_json(_load(path, from_path=True))


def heights_from_json(data, n: int) -> HeightFunction:
    if not isinstance(data, dict) or "heights" not in data:
        raise FormatError('heights file needs "heights"')
    values = [parse_rational(v) for v in data["heights"]]
    if len(values) != n:
        raise FormatError(f"expected {n} heights, got {len(values)}")
    return HeightFunction(tuple(values))


def load_heights(path: str, n: int) -> HeightFunction:
    return heights_from_json(_load(path, from_path=True), n)


def heights_to_json(h: HeightFunction) -> dict:
    return {"heights": [format_rational(v) for v in h.values]}


def gkz_to_json(v: GkzVector) -> dict:
    return {
        "gkz": [format_rational(c) for c in v.coords],
        "gkz_approx": [float(c) for c in v.coords],
    }


def graph_to_json(graph) -> dict:
    keys = sorted(graph.nodes)
    index = {key: i for i, key in enumerate(keys)}
    return {
        "nodes": keys,
        "edges": sorted(
            [index[a], index[b], ftype.value] for a, b, ftype in graph.edges
        ),
    }
