"""Shipped arrangements: Pappus, the Ceva-type quadrilateral, and the
broken Pappus poset (combinatorially valid but not realizable by lines)."""

from __future__ import annotations

from importlib.resources import files

from .arrangement import Arrangement, from_lines, lines_from_text, validate

__all__ = [
    "pappus_lines",
    "ceva_lines",
    "pappus_arrangement",
    "ceva_arrangement",
    "broken_pappus_poset",
    "break_line_triples",
]


def _load(name):
    return lines_from_text(files("plumbline.data").joinpath(name).read_text("utf-8"))


def pappus_lines():
    return _load("pappus.lines")


def ceva_lines():
    return _load("ceva.lines")


def pappus_arrangement() -> Arrangement:
    return from_lines(pappus_lines())


def ceva_arrangement() -> Arrangement:
    return from_lines(ceva_lines())


def break_line_triples(arr: Arrangement, line: int) -> Arrangement:
    """Detach ``line`` from every multiple point it lies on.

    Each such point keeps its remaining lines; the freed line pairs come
    back as fresh double points, so the pair axiom still holds.
    """
    points = []
    for pt in arr.points:
        if line in pt and len(pt) >= 3:
            points.append(tuple(i for i in pt if i != line))
            points.extend((min(i, line), max(i, line)) for i in pt if i != line)
        else:
            points.append(pt)
    return validate(points, arr.d)


def broken_pappus_poset() -> Arrangement:
    """The Pappus poset with the concluding line detached from its three
    triple points; valid as a poset, realizable by no line arrangement.

    Line 9 of the shipped data is the line whose three incidences are
    forced by the other six triple points, so detaching it breaks
    realizability without breaking the pair axiom.
    """
    return break_line_triples(pappus_arrangement(), 9)
