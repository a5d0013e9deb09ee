"""Command-line front end: ``qctree <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import dimension, gluing, graphs, metric, planar, structure
from .core import DomainError, PointCode, Weight, as_fraction, format_rational, format_word, word
from .structure import _jsonable


def _weights(args) -> Weight:
    if args.weights:
        try:
            return Weight.from_json(Path(args.weights).read_text())
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise DomainError(f"malformed weight file {args.weights}: {exc}") from exc
    if getattr(args, "m", None):
        return Weight.uniform(args.m)
    raise DomainError("give --weights PATH or --m INT")


def _emit(obj: Any, out: str | None) -> None:
    text = json.dumps(_jsonable(obj), indent=2)
    if out:
        try:
            Path(out).write_text(text + "\n")
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc.strerror}") from exc
    else:
        print(text)


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc


# -- subcommands -------------------------------------------------------------------


def cmd_dist(args) -> None:
    a = _weights(args)
    x, y = PointCode.parse(args.x), PointCode.parse(args.y)
    if args.level:
        c = metric.chain_length(x, y, args.level, a)
        _emit({"chain_length": c.value, "level": c.level, "same_tile_bound": c.same_tile_bound}, args.out)
        return
    d = metric.distance_exact(x, y, a)
    text = f"{format_rational(d)}\n{float(d):.12f}"
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def cmd_graph(args) -> None:
    if args.action == "arc":
        if not (args.source and args.target):
            raise DomainError("graph arc needs --from and --to")
        w, u = word(args.source), word(args.target)
        if len(w) != len(u):
            raise DomainError("--from and --to must have the same length")
        for x in (w, u):
            if max(x) > args.m:
                raise DomainError(f"word {format_word(x)} uses letters above m = {args.m}")
        lines = [format_word(v) for v in graphs.arc(w, u)]
        text = "\n".join(lines)
    elif args.action == "neighbors":
        if not args.word:
            raise DomainError("graph neighbors needs --word")
        text = "\n".join(format_word(v) for v in graphs.neighbors(word(args.word), args.m))
    else:
        _emit(graphs.verify_tree_structure(args.level, args.m).to_json(), args.out)
        return
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def cmd_branches(args) -> None:
    a = _weights(args)
    rows = [
        {"stem": bp.stem, "code": bp.code, "H": bp.height_H, "h": bp.height_new}
        for bp in structure.branch_points(args.level, a)
    ]
    _emit(rows, args.out)


def cmd_tiles(args) -> None:
    a = _weights(args)
    if args.word:
        rows = [
            {"word": n.word, "ratio": n.ratio, "within_bounds": n.within_bounds}
            for n in structure.neighbor_tiles(word(args.word), a)
        ]
    else:
        rows = [
            {"word": t.word, "diameter": t.diameter, "boundary": list(t.boundary)}
            for t in structure.tiles(args.level, a)
        ]
    _emit(rows, args.out)


def cmd_dim(args) -> None:
    a = _weights(args)
    if args.infinite:
        partial, tail = dimension.infinite_psi_bound(a, args.s)
        ok = dimension.dimension_bound_infinity(a, args.s)
        _emit({"s": args.s, "partial": partial, "tail": tail, "certified": ok}, args.out)
        return
    sol = dimension.moran_dimension(a.m, a, tol=args.tol)
    if args.out:
        _emit({"exponent": sol.exponent, "residual": sol.residual, "iterations": sol.iterations}, args.out)
    else:
        print(repr(sol.exponent))


def cmd_render(args) -> None:
    if args.model == "vicsek":
        segs = planar.skeleton(planar.vicsek_ifs(), planar.vicsek_generators(), args.depth)
    else:
        if not args.m:
            raise DomainError("--model csst-like needs --m")
        segs = planar.skeleton(planar.csst_like_ifs(args.m), planar.unit_segment(), args.depth)
    if not args.out:
        _emit([[z.real, z.imag, w.real, w.imag] for z, w in segs.tolist()], None)
    elif args.out.lower().endswith(".csv"):
        planar.export_csv(segs, args.out)
    else:
        planar.render_svg(segs, args.out)


def _vertex_levels(path: str) -> list[tuple[str, int]]:
    data = _read_json(path)
    try:
        return [(str(v), int(n)) for v, n in data]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{path}: expected [[vertex, level], ...]") from exc


def cmd_glue(args) -> None:
    T = gluing.FiniteGeodesicTree.from_json(_read_json(args.input))
    if args.step == 1:
        out = gluing.step1_uniform_growth(T)
    elif args.step == 2:
        if not args.m:
            raise DomainError("step 2 needs --m")
        out = gluing.step2_uniform_valence(T, args.m)
    else:
        if not args.m:
            raise DomainError("step 3 needs --m")
        a = _weights(args)
        delta = as_fraction(args.delta)
        if args.vertices:
            levels = _vertex_levels(args.vertices)
        else:
            T, levels = gluing.dyadic_vertex_levels(T, delta, args.level or 1)
        out = gluing.step3_attach(T, levels, args.m, a, delta, as_fraction(args.c), args.depth or 1)
    _emit(out.to_json(), args.out)


def cmd_verify(args) -> None:
    a = _weights(args)
    reports = [structure.verify_separation(args.level, a)]
    reports += structure.verify_uniform_branching(args.level, a, samples=args.samples)
    _emit([r.to_json() for r in reports], args.out)


def cmd_verify_tree(args) -> None:
    T = gluing.FiniteGeodesicTree.from_json(_read_json(args.input))
    reports = gluing.verify_tree_properties(T, height=args.height)
    _emit([r.to_json() for r in reports], args.out)


def cmd_hausdorff(args) -> None:
    if args.model:
        if args.model == "vicsek":
            ifs, gens = planar.vicsek_ifs(), planar.vicsek_generators()
        else:
            if not args.m:
                raise DomainError("--model csst-like needs --m")
            ifs, gens = planar.csst_like_ifs(args.m), planar.unit_segment()
        rows = []
        for n in range(args.depth):
            d = planar.skeleton_hausdorff(planar.skeleton(ifs, gens, n), planar.skeleton(ifs, gens, n + 1))
            rows.append({"depth": n, "hausdorff_to_next": d})
        _emit(rows, args.out)
        return
    a = _weights(args)
    r = structure.hausdorff_nesting(args.level, args.m_small, args.m_large, a)
    _emit(
        {
            "level": r.level,
            "m_small": r.m_small,
            "m_large": r.m_large,
            "small_into_large": r.small_into_large,
            "excess": r.excess,
            "bound": r.bound,
            "pass": r.passed,
        },
        args.out,
    )


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qctree", description="Geometry of the universal quasiconformal trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("dist", cmd_dist, "exact distance between two point codes")
    sp.add_argument("--weights")
    sp.add_argument("--m", type=int)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--level", type=int, help="report the level-n chain length instead")

    sp = add("graph", cmd_graph, "the combinatorial trees G_k")
    sp.add_argument("action", choices=["arc", "neighbors", "verify"])
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--from", dest="source")
    sp.add_argument("--to", dest="target")
    sp.add_argument("--word")
    sp.add_argument("--level", type=int, default=3)

    sp = add("branches", cmd_branches, "branch points and heights up to a level")
    sp.add_argument("--weights")
    sp.add_argument("--m", type=int)
    sp.add_argument("--level", type=int, default=2)

    sp = add("tiles", cmd_tiles, "tiles of a level, or the neighbors of one tile")
    sp.add_argument("--weights")
    sp.add_argument("--m", type=int)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--word")

    sp = add("dim", cmd_dim, "Moran exponent or the infinite-alphabet certificate")
    sp.add_argument("--weights")
    sp.add_argument("--m", type=int)
    sp.add_argument("--infinite", action="store_true")
    sp.add_argument("--s", type=float, default=1.5)
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = add("render", cmd_render, "planar skeleton as SVG or CSV")
    sp.add_argument("--model", choices=["csst-like", "vicsek"], required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--depth", type=int, default=4)

    sp = add("glue", cmd_glue, "apply embedding step 1, 2 or 3 to a tree")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--step", type=int, choices=[1, 2, 3], required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--weights")
    sp.add_argument("--delta", default="1/4")
    sp.add_argument("--c", default="1/2")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--level", type=int, help="max level for the spaced stand-in vertex sets")
    sp.add_argument("--vertices", help="JSON list of [vertex, level] pairs")

    sp = add("verify", cmd_verify, "separation and uniform-branching checks")
    sp.add_argument("--weights")
    sp.add_argument("--m", type=int)
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--samples", type=int, default=300)

    sp = add("verify-tree", cmd_verify_tree, "branching constants of a finite tree")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--height", choices=["new", "diameter"], default="new")

    sp = add("hausdorff", cmd_hausdorff, "nesting excess across alphabets, or planar skeleton convergence")
    sp.add_argument("--weights")
    sp.add_argument("--m", type=int)
    sp.add_argument("--level", type=int, default=3)
    sp.add_argument("--m-small", type=int, default=3)
    sp.add_argument("--m-large", type=int, default=5)
    sp.add_argument("--model", choices=["csst-like", "vicsek"])
    sp.add_argument("--depth", type=int, default=4)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (DomainError, OSError) as exc:
        print(f"qctree: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
