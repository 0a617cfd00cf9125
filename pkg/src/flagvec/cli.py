"""Command-line entry point: ``flagvec <verb> ...``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import experiments, linkspace, shelling
from .algebra import VECTOR_HEADER, dump_vector, format_combination, load_vector
from .decorated import BoundaryGraph, OrientedGraph
from .errors import FlagvecError, InputError, InvariantError
from .estimators import object_vector
from .graphs import IGraph
from .io import describe, parse_object
from .relations import GroupTable, current_budget, relation_family

LINKSPACE_RESIDUE_LIMIT = 4096
KIND_CLASSES = {"igraph": IGraph, "oriented": OrientedGraph, "boundary": BoundaryGraph}


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def _cache_dir(args) -> Path:
    return Path(args.cache_dir or os.environ.get(linkspace.CACHE_ENV) or linkspace.DEFAULT_CACHE_DIR)


def _configure(args):
    budget = linkspace.RelationBudget(args.max_relations, args.window)
    if budget.max_relations < 1 or budget.window < 1:
        raise InputError("--max-relations and --window must be positive")
    linkspace.configure(_cache_dir(args), budget)


# ---------------------------------------------------------------------------
# verbs


def cmd_compute(args):
    obj = parse_object(args.input)
    _emit(dump_vector(object_vector(obj, args.vector, args.method)), args.out)


def _residue_objects(key):
    if key.kind == "relation":
        return list(relation_family(key.i, key.depth, key.m))[: current_budget().max_relations]
    cls = KIND_CLASSES[key.kind]
    if key.i == 0:
        return []
    if cls.count_all(key.i, key.m, key.depth) > LINKSPACE_RESIDUE_LIMIT or key.m > shelling.CANONICAL_LIMIT:
        return None
    return shelling.class_representatives(cls.enumerate_all(key.i, key.m, key.depth))


def cmd_linkspace(args):
    key = linkspace.LinkSpaceKey(args.kind, args.i, args.m, args.depth)
    space = linkspace.link_space(key)
    lines = ["flagvec-linkspace v1", f"key: {key.slug}", f"dimension: {space.dim}"]
    lines.append("basis: " + (" ".join(space.basis_names) or "-"))
    lines.append(f"relation_rank: {space.relation_rank}")
    for name, value in space.metadata:
        if name not in ("key", "relation_rank"):
            lines.append(f"{name}: {value}")
    objs = _residue_objects(key)
    if objs is None:
        lines.append("residues: skipped (too many objects to list)")
    else:
        for obj in objs:
            lines.append(f"residue {describe(obj)}: {format_combination(space.project(shelling.flag_vector(obj)))}")
    _emit("\n".join(lines) + "\n", args.out)


def _class_from_args(args) -> experiments.ObjectClass:
    if args.inputs:
        objs = [parse_object(p) for p in args.inputs]
        return experiments.ObjectClass(
            type(objs[0]).__name__, mode="from-files", objects=objs, labels=[Path(p).name for p in args.inputs]
        )
    if not args.kind:
        raise InputError("give --kind with --i/--r, or input files")
    return experiments.ObjectClass(args.kind, args.i, args.r)


def _labeled_points(args):
    if args.inputs:
        points = []
        for p in args.inputs:
            text = Path(p).read_text(encoding="ascii")
            if text.lstrip().startswith(VECTOR_HEADER):
                try:
                    vec = load_vector(text)
                except InputError as exc:
                    raise InputError(f"{p}: {exc}") from exc
            else:
                vec = object_vector(parse_object(p), args.vector)
            points.append((Path(p).name, vec))
        return points, f"from-files count={len(points)} vector={args.vector}"
    objclass = _class_from_args(args)
    members = objclass.members()
    return [(label, object_vector(o, args.vector)) for label, o in members], (
        f"{objclass.describe()} vector={args.vector}"
    )


def cmd_experiment(args):
    name = args.experiment
    if name == "independence":
        report = experiments.independence_report(_class_from_args(args), args.vector)
    elif name == "collisions":
        report = experiments.collision_scan(_class_from_args(args), args.vector)
    elif name == "hull":
        points, source = _labeled_points(args)
        report = experiments.hull_vertex_report(points, source)
    elif name == "cosphere":
        points, source = _labeled_points(args)
        report = experiments.cosphere_probe(points, source)
    else:
        if not args.kind:
            raise InputError("invariance needs --kind")
        objclass = experiments.ObjectClass(args.kind, args.i, args.r)
        report = experiments.invariance_suite(objclass, args.trials, args.seed)
    _emit(report.render(), args.out)


def cmd_group(args):
    a = parse_object(args.input)
    if not isinstance(a, GroupTable):
        raise InputError(f"{args.input}: expected a 'group' file")
    va = object_vector(a, "flag", args.method)
    if args.compare is None:
        _emit(dump_vector(va), args.out)
        return
    b = parse_object(args.compare)
    if not isinstance(b, GroupTable):
        raise InputError(f"{args.compare}: expected a 'group' file")
    vb = object_vector(b, "flag", args.method)
    _emit(("identical" if va == vb else "different") + "\n", args.out)


def cmd_cache(args):
    cache = _cache_dir(args)
    entries = sorted(cache.glob("*.json")) if cache.is_dir() else []
    if args.action == "list":
        for path in entries:
            print(path.name)
        return
    for path in entries:
        path.unlink()
    for path in cache.glob(".tmp-*") if cache.is_dir() else []:
        path.unlink()
    print(f"removed {len(entries)} entries from {cache}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flagvec", description=__doc__)
    parser.add_argument("--cache-dir", help=f"link-space cache (default ${linkspace.CACHE_ENV} or {linkspace.DEFAULT_CACHE_DIR})")
    parser.add_argument("--max-relations", type=int, default=linkspace.RelationBudget.max_relations)
    parser.add_argument("--window", type=int, default=linkspace.RelationBudget.window)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("compute", help="flag or shelling vector of one object file")
    p.add_argument("--input", required=True)
    p.add_argument("--vector", choices=("flag", "shelling"), default="flag")
    p.add_argument("--method", choices=shelling.METHODS, default="dp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("linkspace", help="dimension and residues of one link space")
    p.add_argument("--kind", choices=linkspace.KINDS, required=True)
    p.add_argument("--i", type=int, required=True, help="cell size, or arity for relations")
    p.add_argument("--m", type=int, required=True, help="vertex count")
    p.add_argument("--depth", type=int, default=0, help="label length or placeholder depth")
    p.add_argument("--out")
    p.set_defaults(func=cmd_linkspace)

    p = sub.add_parser("experiment", help="write an experiment report")
    p.add_argument("experiment", choices=("independence", "collisions", "hull", "cosphere", "invariance"))
    p.add_argument("inputs", nargs="*", help="object or vector files (instead of a generated class)")
    p.add_argument("--kind", choices=("igraph", "oriented", "boundary", "relation", "group"))
    p.add_argument("--i", type=int, default=1, help="cell size, or arity for relations")
    p.add_argument("--r", type=int, default=3, help="vertex count or group order (upper bound for invariance)")
    p.add_argument("--vector", choices=("flag", "shelling"), default="flag")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("group", help="flag vector of a Cayley table")
    p.add_argument("--input", required=True)
    p.add_argument("--compare")
    p.add_argument("--method", choices=shelling.METHODS, default="dp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("cache", help="inspect or empty the link-space cache")
    p.add_argument("action", choices=("list", "clear"))
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb != "cache":
            _configure(args)
        args.func(args)
    except FlagvecError as exc:
        print(f"flagvec: error: {exc}", file=sys.stderr)
        if isinstance(exc, InvariantError) and exc.witness:
            print("witness:", file=sys.stderr)
            sys.stderr.write(exc.witness if exc.witness.endswith("\n") else exc.witness + "\n")
        return exc.exit_status
    except OSError as exc:
        print(f"flagvec: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
