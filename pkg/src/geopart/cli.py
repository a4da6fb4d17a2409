"""Command-line entry point: `geopart <command> [flags]`.

Exit codes: 0 success, 1 bad usage or unreadable input, 2 an oracle or
verification check failed, 3 the partition search ran out of retries.
"""
from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from . import cad
from .generate import KINDS, Instance, gen_instance
from .locate import DEFAULT_C0_PRIME, LocateConfig, build_tree, query, tree_from_json, tree_to_json
from .oracles import (brute_force_first_hit, brute_force_range, brute_force_weight,
                      compare_alg)
from .partition import (PartitionTuple, RetriesExhausted, acceptable, alpha_target,
                        build_partition, verify_partition)
from .poly import MultiPoly, q_str
from .rangesearch import RangeStructure, build_range_structure, default_config, family
from .rayshoot import RayConfig, build_rayshoot, shoot, structure_from_json, structure_to_json
from .render import render_svg
from .semialg import dumps, load_instance

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_RETRIES = 0, 1, 2, 3


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _emit(args, obj) -> None:
    text = obj if isinstance(obj, str) else dumps(obj)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point(text: str) -> tuple[mpq, mpq]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected x,y")
    return mpq(parts[0].strip()), mpq(parts[1].strip())


def _locate_config(args) -> LocateConfig:
    return LocateConfig(k=args.k, c0_prime=args.c0 or DEFAULT_C0_PRIME, n0=args.n0,
                        retries=args.retries, sample_size=args.sample_size, seed=args.seed)


# --- commands --------------------------------------------------------------------

def cmd_gen(args):
    inst = gen_instance(args.kind, args.n, args.seed, args.box, args.radius)
    _emit(args, inst.to_json())


def cmd_signcond(args):
    obj = _read_json(args.input)
    if "polys" in obj:
        polys = [MultiPoly.from_terms(t, num_vars=2) for t in obj["polys"]]
    else:
        polys = [p for s in load_instance(obj) for p in s.polys]
    samples = cad.sample_sign_conditions(polys)
    realized = sorted(cad.realized(samples), reverse=True)
    _emit(args, {
        "realized": [cad.sign_key(sv) for sv in realized],
        "samples": [{"sign": cad.sign_key(s.signs), **s.point.to_json()} for s in samples],
    })


def cmd_partition(args):
    sets = load_instance(args.input)
    try:
        tup, report = build_partition(sets, args.k, args.c0 or 4, args.sample_size, args.retries,
                                      args.seed)
    except RetriesExhausted as exc:
        out = {"status": "retries_exhausted", "retries": exc.retries}
        if exc.best_tuple is not None:
            out["best_tuple"] = exc.best_tuple.to_json()
            out["best_report"] = exc.best_report.to_json()
        _emit(args, out)
        return EXIT_RETRIES
    if args.format == "svg":
        _emit(args, render_svg(sets, tup))
    else:
        _emit(args, {"status": "ok", "tuple": tup.to_json(), "report": report.to_json()})
    return EXIT_OK


def cmd_verify(args):
    sets = load_instance(args.input)
    obj = _read_json(args.tuple)
    tup = PartitionTuple.from_json(obj.get("tuple", obj))
    report = verify_partition(tup, sets)
    target = alpha_target(tup.k, sets, args.c0 or 4) if sets else mpq(1)
    ok = acceptable(report, target) if sets else True
    _emit(args, {"status": "ok" if ok else "rejected", "alpha_target": q_str(target),
                 "report": report.to_json()})
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_locate_build(args):
    sets = load_instance(args.input)
    tree = build_tree(sets, None, args.semigroup, _locate_config(args))
    _emit(args, tree_to_json(tree))


def cmd_locate_query(args):
    tree = tree_from_json(_read_json(args.input))
    res = query(tree, args.at)
    fmt = tree.semigroup.fmt
    out = {"at": [q_str(v) for v in args.at], "weight": fmt(res.weight), "visits": res.visits,
           "degenerate": res.degenerate}
    if args.check:
        expect = brute_force_weight(list(tree.sets.values()), args.at, tree.semigroup.name)
        out["oracle"] = fmt(expect)
        if expect != res.weight:
            _emit(args, out)
            return EXIT_MISMATCH
    _emit(args, out)
    return EXIT_OK


def _load_points(path):
    obj = _read_json(path)
    if "points" in obj:
        return [(mpq(x), mpq(y)) for x, y in obj["points"]], obj.get("weights")
    sets = load_instance(obj)
    pts = []
    for s in sets:
        if s.dim != 0 or s.point is None or not s.point.is_rational:
            raise ValueError("range search needs an instance of rational points")
        pts.append((s.point.x, s.point.y_value()))
    return pts, [s.weight for s in sets]


def cmd_range_build(args):
    points, weights = _load_points(args.input)
    fam = family(args.family)
    config = default_config(fam, args.seed)
    for flag in ("k", "n0", "retries", "sample_size"):
        v = getattr(args, flag)
        if v is not None and v != DEFAULTS[flag]:
            setattr(config, flag, v)
    if args.c0 is not None:
        config.c0_prime = config.c0 = args.c0
    st = build_range_structure(points, weights, fam, config, args.semigroup)
    _emit(args, st.to_json())


def cmd_range_query(args):
    st = RangeStructure.from_json(_read_json(args.input))
    res = query(st.tree, args.at)
    fmt = st.tree.semigroup.fmt
    out = {"at": [q_str(v) for v in args.at], "weight": fmt(res.weight), "visits": res.visits}
    if args.check:
        expect = brute_force_range(st.points, args.at, st.family, st.weights,
                                   st.tree.semigroup.name)
        out["oracle"] = fmt(expect)
        if expect != res.weight:
            _emit(args, out)
            return EXIT_MISMATCH
    _emit(args, out)
    return EXIT_OK


def cmd_rayshoot_build(args):
    sets = load_instance(args.input)
    config = RayConfig(k=args.k, c0_prime=args.c0 or 1, n0=args.n0, retries=args.retries,
                       sample_size=args.sample_size, seed=args.seed)
    _emit(args, structure_to_json(build_rayshoot(sets, config)))


def cmd_rayshoot_query(args):
    st = structure_from_json(_read_json(args.input))
    hit = shoot(st, args.at)
    out = {"at": [q_str(v) for v in args.at], "hit": hit.to_json() if hit else None}
    if args.check:
        expect = brute_force_first_hit(st.sets, args.at)
        out["oracle"] = None if expect is None else {
            "set": expect[0], "x": q_str(expect[1][0]),
            "y": q_str(expect[1][1].lo) if expect[1][1].lo == expect[1][1].hi
            else [q_str(expect[1][1].lo), q_str(expect[1][1].hi)]}
        same = (hit is None and expect is None) or (
            hit is not None and expect is not None and hit.id == expect[0]
            and compare_alg(hit.point.y, expect[1][1]) == 0)
        if not same:
            _emit(args, out)
            return EXIT_MISMATCH
    _emit(args, out)
    return EXIT_OK


def cmd_bench(args):
    from .bench import run_bench
    sizes = [int(v) for v in args.sizes.split(",")]
    records = run_bench(args.kind, sizes, args.queries, args.seed, _locate_config(args))
    _emit(args, {"kind": args.kind, "records": [r.to_json(not args.no_timing) for r in records]})


def cmd_render(args):
    inst = Instance.from_json(_read_json(args.input))
    tup = None
    if args.tuple:
        obj = _read_json(args.tuple)
        tup = PartitionTuple.from_json(obj.get("tuple", obj))
    _emit(args, render_svg(inst.sets, tup))


COMMANDS = {
    "gen": cmd_gen, "signcond": cmd_signcond, "partition": cmd_partition,
    "verify": cmd_verify, "locate-build": cmd_locate_build,
    "locate-query": cmd_locate_query, "range-build": cmd_range_build,
    "range-query": cmd_range_query, "rayshoot-build": cmd_rayshoot_build,
    "rayshoot-query": cmd_rayshoot_query, "bench": cmd_bench, "render": cmd_render,
}

DEFAULTS = {"k": 2, "n0": 16, "retries": 10, "sample_size": None}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags, which would read as a verification mismatch
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geopart",
                                description="Polynomial partitions and geometric query structures.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=DEFAULTS["k"])
    p.add_argument("--c0", type=mpq, default=None,
                   help="alpha constant (default 4 for partition/verify, "
                        "4/3 for location trees, 1 for ray shooting)")
    p.add_argument("--n0", type=int, default=DEFAULTS["n0"])
    p.add_argument("--retries", type=int, default=DEFAULTS["retries"])
    p.add_argument("--sample-size", type=int, default=DEFAULTS["sample_size"])
    p.add_argument("--family", default="halfplane")
    p.add_argument("--at", type=_point)
    p.add_argument("--format", choices=("json", "svg"), default="json")
    p.add_argument("--kind", choices=KINDS, default="disks")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--box", default="64")
    p.add_argument("--radius", default=None)
    p.add_argument("--semigroup", default="count")
    p.add_argument("--tuple", help="tuple JSON for verify and render")
    p.add_argument("--check", action="store_true", help="compare a query with the oracle")
    p.add_argument("--sizes", default="128,256")
    p.add_argument("--queries", type=int, default=100)
    p.add_argument("--no-timing", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    needs_at = args.command.endswith("-query")
    if needs_at and args.at is None:
        print("error: --at x,y is required", file=sys.stderr)
        return EXIT_USAGE
    if args.command not in ("gen", "bench") and not args.input:
        print("error: --input is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        code = COMMANDS[args.command](args)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
