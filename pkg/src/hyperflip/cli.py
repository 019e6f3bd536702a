"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 degenerate configuration,
4 budget exhausted.  The enumeration node budget can also be set through
the HYPERFLIP_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import fileio
from .aging import aging_overlap, build_level2, collapse_level2
from .coherent import (
    HeightFunction,
    NonTriangularReport,
    coherent_subdivision,
    gkz,
)
from .connectivity import (
    connect_level2,
    enumerate_all,
    flip_graph,
)
from .errors import (
    BudgetExceeded,
    FlipNotApplicable,
    GenericityError,
    HyperflipError,
    InvalidHypertriangulation,
    PreconditionError,
)
from .fileio import FormatError
from .flips import FlipType, apply_flip, enumerate_flips
from .geometry import format_rational
from .hypertriangulations import validate
from .points import genericity, label_text

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DEGENERATE = 3
EXIT_BUDGET = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperflip",
        description="Exact engine for level-k hypertriangulations and their flips.",
    )
    parser.add_argument("--budget", type=int, default=None,
                        help="enumeration node budget (default: HYPERFLIP_BUDGET or built-in)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sums", help="write the labeled k-fold sums")
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("validate", help="validate a hypertriangulation file")
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tri", required=True)

    p = sub.add_parser("coherent", help="coherent hypertriangulation from heights")
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--heights", default=None)
    p.add_argument("--squared-norms", action="store_true")
    p.add_argument("--gkz", action="store_true", help="append the GKZ vector")
    p.add_argument("--out", default=None)

    p = sub.add_parser("flips", help="enumerate flips; optionally apply one")
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tri", required=True)
    p.add_argument("--apply", type=int, default=None, metavar="N")
    p.add_argument("--out", default=None)

    p = sub.add_parser("age", help="age level 1 -> 2 or collapse level 2 -> 1")
    p.add_argument("--points", required=True)
    p.add_argument("--tri", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--up", action="store_true")
    group.add_argument("--down", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("enumerate", help="enumerate all hypertriangulations")
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--graph", default=None, metavar="OUT")
    p.add_argument("--only-types", default=None,
                   help="comma-separated flip types to keep, e.g. I,III")
    p.add_argument("--coherent-only", action="store_true")

    p = sub.add_parser("connect", help="flip path between two level-2 files")
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("overlap-search",
                       help="search for a level-2 hypertriangulation with overlapping aged whites")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("serve", help="run the HTTP session API")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None, help="directory with the explorer UI")
    p.add_argument("--ttl", type=int, default=3600, help="session idle TTL in seconds")

    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _require_strong(config, k):
    tier = genericity(config, k)
    if not tier.strongly_generic:
        raise GenericityError(
            f"configuration is not strongly generic at level {k}: {tier.detail}",
            witness=tier.witness,
        )


def _cmd_sums(args) -> int:
    config = fileio.load_points(args.points)
    level = config.level(args.k)
    data = {
        "k": args.k,
        "n": config.n,
        "sums": {
            label_text(lab): [
                format_rational(level.point(lab).x),
                format_rational(level.point(lab).y),
            ]
            for lab in level.labels
        },
    }
    _emit(fileio.dump_json(data), args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    config = fileio.load_points(args.points)
    _require_strong(config, args.k)
    t = fileio.load_triangulation(args.tri, config)
    if t.k != args.k:
        raise FormatError(f"file has k={t.k}, expected {args.k}")
    report = validate(t)
    sys.stdout.write(fileio.dump_json(report.to_json()))
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_coherent(args) -> int:
    config = fileio.load_points(args.points)
    if args.squared_norms:
        heights = HeightFunction.squared_norms(config)
    elif args.heights:
        heights = fileio.load_heights(args.heights, config.n)
    else:
        raise FormatError("need --heights FILE or --squared-norms")
    result = coherent_subdivision(config, args.k, heights)
    if isinstance(result, NonTriangularReport):
        payload = {
            "non_triangular_faces": [
                [label_text(lab) for lab in face] for face in result.faces
            ]
        }
        _emit(fileio.dump_json(payload), args.out)
        return EXIT_DEGENERATE
    data = fileio.triangles_to_json(result)
    if args.gkz:
        data.update(fileio.gkz_to_json(gkz(result)))
    _emit(fileio.dump_json(data), args.out)
    return EXIT_OK


def _cmd_flips(args) -> int:
    config = fileio.load_points(args.points)
    _require_strong(config, args.k)
    t = fileio.load_triangulation(args.tri, config)
    report = validate(t)
    if not report.ok:
        print(f"error: invalid hypertriangulation: {report.summary()}", file=sys.stderr)
        return EXIT_INVALID
    flips = enumerate_flips(t)
    if args.apply is None:
        _emit(fileio.dump_json(fileio.flips_to_json(t.k, flips)), args.out)
        return EXIT_OK
    if not 0 <= args.apply < len(flips):
        raise FormatError(f"flip index {args.apply} out of range 0..{len(flips) - 1}")
    result = apply_flip(t, flips[args.apply])
    _emit(fileio.dump_json(fileio.triangles_to_json(result)), args.out)
    return EXIT_OK


def _cmd_age(args) -> int:
    config = fileio.load_points(args.points)
    t = fileio.load_triangulation(args.tri, config)
    if args.up:
        if t.k != 1:
            raise FormatError("--up starts from a level-1 hypertriangulation")
        result = build_level2(config, t)
    else:
        if t.k != 2:
            raise FormatError("--down starts from a level-2 hypertriangulation")
        result = collapse_level2(t)
    _emit(fileio.dump_json(fileio.triangles_to_json(result)), args.out)
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    config = fileio.load_points(args.points)
    graph = flip_graph(config, args.k, budget=args.budget)
    nodes = graph.nodes
    edges = graph.edges
    if args.only_types:
        wanted = {FlipType(x.strip()) for x in args.only_types.split(",")}
        edges = {e for e in edges if e[2] in wanted}
    if args.coherent_only:
        from .coherent import is_coherent

        keep = {key for key, node in nodes.items() if is_coherent(node).coherent}
        nodes = {key: nodes[key] for key in keep}
        edges = {e for e in edges if e[0] in keep and e[1] in keep}
    type_names = sorted({e[2].value for e in edges}, key=lambda v: "I II III IV".split().index(v))
    plural = "" if len(edges) == 1 else "s"
    suffix = f" ({','.join(type_names)})" if edges else ""
    sys.stdout.write(
        f"{len(nodes)} hypertriangulations, {len(edges)} edge{plural}{suffix}\n"
    )
    if args.graph:
        trimmed = type(graph)(nodes=nodes, edges=set(edges))
        _emit(fileio.dump_json(fileio.graph_to_json(trimmed)), args.graph)
    return EXIT_OK


def _cmd_connect(args) -> int:
    config = fileio.load_points(args.points)
    if args.k != 2:
        raise PreconditionError("connect is the level-2 connectivity mode")
    u = fileio.load_triangulation(args.source, config)
    v = fileio.load_triangulation(args.target, config)
    for name, t in (("--from", u), ("--to", v)):
        report = validate(t)
        if not report.ok:
            print(
                f"error: {name} file is invalid: {report.summary()}",
                file=sys.stderr,
            )
            return EXIT_INVALID
    path = connect_level2(config, u, v)
    _emit(fileio.dump_json(fileio.flips_to_json(2, path)), args.out)
    return EXIT_OK


def _cmd_overlap_search(args) -> int:
    rng = random.Random(args.seed)
    for trial in range(args.trials):
        config = _random_config(rng, args.n)
        if config.in_convex_position():
            continue  # aged whites of convex configurations never overlap
        for u in enumerate_all(config, 2, budget=args.budget):
            pairs = aging_overlap(u)
            if pairs:
                data = fileio.triangles_to_json(u)
                data.update(fileio.points_to_json(config))
                data["overlaps"] = [
                    [
                        [list(lab) for lab in a.labels],
                        [list(lab) for lab in b.labels],
                    ]
                    for a, b in pairs
                ]
                data["trials_used"] = trial + 1
                _emit(fileio.dump_json(data), args.out)
                return EXIT_OK
    raise BudgetExceeded(f"no overlap witness within {args.trials} trials")


def _random_config(rng, n, box=50):
    while True:
        coords = set()
        while len(coords) < n:
            coords.add((rng.randint(0, box), rng.randint(0, box)))
        from .points import PointConfig

        config = PointConfig.from_coords(sorted(coords))
        if genericity(config, 2).strongly_generic:
            return config


def _cmd_serve(args) -> int:
    from .server import run_server

    run_server(host=args.host, port=args.port, static_dir=args.static, ttl=args.ttl)
    return EXIT_OK


_COMMANDS = {
    "sums": _cmd_sums,
    "validate": _cmd_validate,
    "coherent": _cmd_coherent,
    "flips": _cmd_flips,
    "age": _cmd_age,
    "enumerate": _cmd_enumerate,
    "connect": _cmd_connect,
    "overlap-search": _cmd_overlap_search,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GenericityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (FormatError, InvalidHypertriangulation, FlipNotApplicable,
            PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HyperflipError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
