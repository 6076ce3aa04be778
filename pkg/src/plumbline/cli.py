"""Command-line front end.

Subcommands compose the pipeline: gen (families to arrangement files),
build (--config | --gnsz | --g), normalize, reconstruct, roundtrip,
invariants, and export-dot.  Exit codes: 0 success, 1 domain error,
2 I/O or parse error.  Output is deterministic for fixed inputs and
seed; the roundtrip report path writes a TSV table plus a rendered
figure next to it.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import fixtures
from .arrangement import (
    arrangement_from_text,
    arrangement_to_text,
    classify,
    enumerate_arrangements,
    from_lines,
    lines_from_text,
    make_family,
)
from .boundary import build_boundary_graph, build_config_graph, build_reduced_graph
from .calculus import is_normal_form, normalize
from .errors import FormatError, PlumblineError
from .plumbing import first_homology, graph_from_text, graph_to_text, to_dot
from .reconstruct import classify_boundary, roundtrip

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


def _read_arrangement(path, fmt):
    text = Path(path).read_text("utf-8")
    if fmt == "lines" or (fmt == "auto" and text.lstrip().startswith("lines")):
        return from_lines(lines_from_text(text))
    return arrangement_from_text(text)


def _read_graph(path):
    return graph_from_text(Path(path).read_text("utf-8"))


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, "utf-8")


def _cmd_gen(args):
    params = {}
    if args.d is not None:
        params["d"] = args.d
    if args.a is not None:
        params["a"] = args.a
    if args.b is not None:
        params["b"] = args.b
    if args.family == "pappus":
        arr = fixtures.pappus_arrangement()
    elif args.family == "ceva":
        arr = fixtures.ceva_arrangement()
    elif args.family == "broken_pappus":
        arr = fixtures.broken_pappus_poset()
    else:
        arr = make_family(args.family, **params)
    _write(args.out, arrangement_to_text(arr))
    return EXIT_OK


def _cmd_build(args):
    arr = _read_arrangement(args.infile, args.format)
    if args.config:
        cg = build_config_graph(arr)
        lines = [f"config d={cg.d}"]
        for i, dec in cg.line_decorations:
            lines.append(f"line {i} dec={dec}")
        for j, dec in cg.point_decorations:
            lines.append(f"point {j} dec={dec} genus=0")
        for a, dec in cg.arrow_decorations:
            lines.append(f"arrow {a} dec={dec}")
        for i, j, w in cg.incidence_edges:
            lines.append(f"edge line{i} point{j} {w}")
        for a, i, w in cg.arrow_edges:
            lines.append(f"edge arrow{a} line{i} {w}")
        _write(args.out, "\n".join(lines) + "\n")
        return EXIT_OK
    graph = build_reduced_graph(arr) if args.g else build_boundary_graph(arr)
    _write(args.out, graph_to_text(graph))
    if args.fig:
        from .viz import draw_plumbing

        draw_plumbing(graph, args.fig)
    return EXIT_OK


def _cmd_normalize(args):
    graph = _read_graph(args.infile)
    trace: list = []
    out = normalize(graph, trace=trace)
    _write(args.out, graph_to_text(out))
    if args.trace:
        Path(args.trace).write_text("\n".join(trace) + ("\n" if trace else ""), "utf-8")
    if args.fig:
        from .viz import draw_plumbing

        draw_plumbing(out, args.fig)
    return EXIT_OK


def _cmd_reconstruct(args):
    graph = _read_graph(args.infile)
    if not is_normal_form(graph):
        graph = normalize(graph)
    result = classify_boundary(graph)
    lines = [f"class={result.tag}"]
    if result.d is not None:
        lines.append(f"d={result.d}")
    if result.a is not None:
        lines.append(f"a={result.a} b={result.b}")
    if result.poset is not None:
        lines.append(f"pair_axiom={'yes' if result.poset.pair_axiom_ok else 'no'}")
        for pt in result.poset.points:
            lines.append("point: " + " ".join(str(i) for i in pt))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _corpus(max_d):
    items = []
    for d in range(1, max_d + 1):
        for k, arr in enumerate(enumerate_arrangements(d)):
            items.append((f"d{d}-{k:03d}", arr))
    if max_d >= 6:
        items.append(("ceva", fixtures.ceva_arrangement()))
    if max_d >= 9:
        items.append(("pappus", fixtures.pappus_arrangement()))
        items.append(("broken-pappus", fixtures.broken_pappus_poset()))
    return items


def _cmd_roundtrip(args):
    if args.infile:
        items = [(Path(args.infile).stem, _read_arrangement(args.infile, args.format))]
    elif args.family == "all":
        items = _corpus(args.max_d)
    else:
        ns = argparse.Namespace(**vars(args))
        params = {}
        if args.d is not None:
            params["d"] = args.d
        if args.a is not None:
            params["a"] = args.a
        if args.b is not None:
            params["b"] = args.b
        if args.family in ("pappus", "ceva", "broken_pappus"):
            arr = {
                "pappus": fixtures.pappus_arrangement,
                "ceva": fixtures.ceva_arrangement,
                "broken_pappus": fixtures.broken_pappus_poset,
            }[args.family]()
        else:
            arr = make_family(args.family, **params)
        items = [(args.family, arr)]
    rng = random.Random(args.seed)
    rows = []
    tsv = ["instance\tclass\td\ta\tb\tcomponents\tmoves\tiso"]
    all_ok = True
    for key, arr in items:
        report = roundtrip(arr)
        ok = report.matches
        if args.seed is not None and arr.d >= 2:
            # exercise confluence: a randomized strategy must agree
            shuffled = normalize(build_boundary_graph(arr), rng=rng)
            from .plumbing import is_isomorphic

            ref = normalize(build_boundary_graph(arr))
            ok = ok and is_isomorphic(ref, shuffled)
        all_ok = all_ok and ok
        cls = report.output_class
        tsv.append(
            "\t".join(
                [
                    key,
                    cls.tag,
                    str(cls.d if cls.d is not None else ""),
                    str(cls.a if cls.a is not None else ""),
                    str(cls.b if cls.b is not None else ""),
                    str(report.components),
                    str(report.moves),
                    "n/a" if report.iso is None else ("yes" if report.iso else "no"),
                ]
            )
        )
        rows.append((key, str(cls), report.moves, ok))
        if not args.out:
            print(f"{key}: {report.key_values()} components={report.components}")
    table = "\n".join(tsv) + "\n"
    if args.out:
        Path(args.out).write_text(table, "utf-8")
        from .viz import render_roundtrip_figure

        render_roundtrip_figure(rows, str(Path(args.out).with_suffix(".png")))
    else:
        sys.stdout.write(table)
    return EXIT_OK if all_ok else EXIT_DOMAIN


def _cmd_invariants(args):
    graph = _read_graph(args.infile)
    g = graph.without_arrowheads()
    h = first_homology(g)
    lines = [
        f"vertices={len(g.vertices)}",
        f"edges={len(g.edges)}",
        f"components={len(g.components())}",
        f"betti={h.betti}",
        "torsion=" + (",".join(str(t) for t in h.torsion) if h.torsion else "none"),
        f"normal_form={'yes' if is_normal_form(g) else 'no'}",
    ]
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_export_dot(args):
    graph = _read_graph(args.infile)
    _write(args.out, to_dot(graph) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plumbline",
        description="Plumbing graphs of line-arrangement Milnor fiber boundaries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, infile=True):
        if infile:
            p.add_argument("--in", dest="infile", help="input file")
        p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("gen", help="generate a family arrangement file")
    p.add_argument(
        "--family",
        required=True,
        choices=["pencil", "near_pencil", "double_pencil", "generic", "pappus", "ceva", "broken_pappus"],
    )
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    add_common(p, infile=False)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("build", help="build a plumbing graph from an arrangement")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--gnsz", action="store_true", help="raw boundary graph with multiplicities")
    group.add_argument("--g", action="store_true", help="almost-minimal graph")
    group.add_argument("--config", action="store_true", help="configuration graph (metadata)")
    p.add_argument("--format", choices=["arrangement", "lines", "auto"], default="auto")
    p.add_argument("--fig", help="also render the graph to this image file")
    add_common(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("normalize", help="normalize a plumbing graph file")
    p.add_argument("--trace", help="write the move log to this file")
    p.add_argument("--fig", help="also render the result to this image file")
    add_common(p)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("reconstruct", help="classify a plumbing graph and recover the poset")
    add_common(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("roundtrip", help="arrangement -> boundary -> poset round trip")
    p.add_argument("--family", help="family name or 'all'")
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--max-d", type=int, default=7, dest="max_d")
    p.add_argument("--seed", type=int, default=None, help="also check a seeded randomized strategy")
    p.add_argument("--format", choices=["arrangement", "lines", "auto"], default="auto")
    add_common(p)
    p.set_defaults(func=_cmd_roundtrip)

    p = sub.add_parser("invariants", help="homology and normal-form report")
    add_common(p)
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("export-dot", help="DOT rendering of a plumbing graph file")
    add_common(p)
    p.set_defaults(func=_cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PlumblineError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
