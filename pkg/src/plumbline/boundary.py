"""Plumbing graphs of Milnor fiber boundaries of line arrangements.

Three graphs are built from an arrangement's combinatorics:

* the configuration graph: the decorated incidence graph of lines,
  intersection points and one arrowhead per line (metadata only);
* the boundary graph: the raw plumbing graph of the fiber boundary,
  with a full multiplicity system, whose line/point vertices are joined
  by negative strings carrying the expansion of d/(d-n) for a point of
  multiplicity n (a single negative edge when n = d);
* the reduced graph: the almost-minimal plumbing graph, with every line
  vertex at Euler number -1, positive strings carrying d/n, and each
  double point a single vertex with Euler number -d.

``reduce_boundary_graph`` turns the former into the latter by rewriting
moves only (negative blow-ups on every edge, then chain reduction away
from the line and multiple-point vertices), so agreement with
``build_reduced_graph`` is a genuine cross-check of both constructions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arrangement import Arrangement
from .calculus import Move, apply_move, driver_moves
from .cfrac import expand_ncf, string_multiplicities
from .errors import DomainError, NonTerminating, PlumbingError
from .plumbing import PlumbingGraph, canonical_signs, check_multiplicity_system

__all__ = [
    "ConfigGraph",
    "build_config_graph",
    "build_boundary_graph",
    "build_reduced_graph",
    "reduce_boundary_graph",
    "fiber_classes",
]


@dataclass(frozen=True)
class ConfigGraph:
    """Decorated incidence graph of the curve configuration.

    Decorations are the (multiplicity, degree, covering) triples carried
    by the resolution: (1, d, 1) on line vertices, (n_j, d, 1) on point
    vertices (genus 0), (1, 0, 1) on arrowheads.  Incidence edges carry
    decoration 2, arrowhead edges decoration 1.
    """

    d: int
    line_decorations: tuple[tuple[int, tuple[int, int, int]], ...]
    point_decorations: tuple[tuple[int, tuple[int, int, int]], ...]
    arrow_decorations: tuple[tuple[int, tuple[int, int, int]], ...]
    incidence_edges: tuple[tuple[int, int, int], ...]  # (line, point index, 2)
    arrow_edges: tuple[tuple[int, int, int], ...]  # (arrow, line, 1)

    @property
    def edge_count(self) -> int:
        return len(self.incidence_edges) + len(self.arrow_edges)


def build_config_graph(arr: Arrangement) -> ConfigGraph:
    if arr.d < 2:
        raise DomainError("configuration graph needs d >= 2")
    lines = tuple((i, (1, arr.d, 1)) for i in range(1, arr.d + 1))
    points = tuple((j, (arr.multiplicity(j), arr.d, 1)) for j in range(arr.point_count))
    arrows = tuple((i, (1, 0, 1)) for i in range(1, arr.d + 1))
    inc = tuple((i, j, 2) for i, j in arr.incidences())
    arrow_edges = tuple((i, i, 1) for i in range(1, arr.d + 1))
    return ConfigGraph(arr.d, lines, points, arrows, inc, arrow_edges)


def _point_genus(c: int, n: int) -> int:
    num = (c - 1) * (n - 2)
    if num % 2:
        raise PlumbingError(f"non-integral genus for (c={c}, n={n})")
    return num // 2


def build_boundary_graph(arr: Arrangement) -> PlumbingGraph:
    """Raw boundary plumbing graph with its multiplicity system.

    Line vertex i: Euler number (points on line i) - 1, multiplicity 1,
    one arrowhead.  Point vertex j: Euler number m'_j * gcd(d, n_j),
    genus (c_j - 1)(n_j - 2)/2, multiplicity n_j / c_j.  Each incidence
    contributes a negative string (a single negative edge when n_j = d).
    """
    d = arr.d
    if d < 2:
        raise DomainError("boundary graph needs d >= 2")
    vertices = []
    edges = []
    mults = {}
    for i in range(1, d + 1):
        vertices.append((i, arr.point_count_on_line(i) - 1, 0))
        mults[i] = 1
    w_id = {}
    for j in range(arr.point_count):
        w_id[j] = d + 1 + j
    next_id = d + 1 + arr.point_count
    for j in range(arr.point_count):
        n = arr.multiplicity(j)
        c = arr.gcd_with_d(j)
        genus = _point_genus(c, n)
        if n == d:
            vertices.append((w_id[j], c, genus))  # m'_j = 1, e = c = d
            mults[w_id[j]] = n // c
            for i in arr.points[j]:
                edges.append((i, w_id[j], -1))
            continue
        data = string_multiplicities(d, n)
        vertices.append((w_id[j], data.last_mult * c, genus))
        mults[w_id[j]] = n // c
        for i in arr.points[j]:
            prev = i
            for k, m in zip(data.eulers, data.mults):
                vertices.append((next_id, k, 0))
                mults[next_id] = m
                edges.append((min(prev, next_id), max(prev, next_id), -1))
                prev = next_id
                next_id += 1
            edges.append((min(prev, w_id[j]), max(prev, w_id[j]), -1))
    arrows = []
    for i in range(1, d + 1):
        arrows.append((next_id, i))
        mults[next_id] = 1
        next_id += 1
    graph = PlumbingGraph(tuple(vertices), tuple(edges), tuple(arrows), mults)
    bad = check_multiplicity_system(graph)
    if bad:
        raise PlumbingError(f"multiplicity system violated at {bad}")
    return graph


def build_reduced_graph(arr: Arrangement) -> PlumbingGraph:
    """Almost-minimal plumbing graph, built directly from the poset."""
    d = arr.d
    if d < 2:
        raise DomainError("reduced graph needs d >= 2")
    if arr.point_count == 1:
        raise DomainError("pencils have no reduced graph; normalize the boundary graph")
    vertices = [(i, -1, 0) for i in range(1, d + 1)]
    edges = []
    w_id = {j: d + 1 + j for j in range(arr.point_count)}
    next_id = d + 1 + arr.point_count
    for j in range(arr.point_count):
        n = arr.multiplicity(j)
        if n == 2:
            vertices.append((w_id[j], -d, 0))
            lo, hi = arr.points[j]
            edges.append((lo, w_id[j], 1))
            edges.append((hi, w_id[j], -1))
            continue
        c = arr.gcd_with_d(j)
        data = string_multiplicities(d, n)
        vertices.append((w_id[j], data.last_mult * c - n, _point_genus(c, n)))
        hs = expand_ncf(d, n).entries
        for i in arr.points[j]:
            prev = i
            for h in hs:  # h_1 sits at the line end of the string
                vertices.append((next_id, -h, 0))
                edges.append((min(prev, next_id), max(prev, next_id), 1))
                prev = next_id
                next_id += 1
            edges.append((min(prev, w_id[j]), max(prev, w_id[j]), 1))
    return PlumbingGraph(tuple(vertices), tuple(edges))


def reduce_boundary_graph(graph: PlumbingGraph, budget: int | None = None) -> PlumbingGraph:
    """Rewrite a raw boundary graph into the almost-minimal form by moves.

    Line vertices are recognized by their arrowheads, multiple-point
    vertices as string walk ends of valency >= 3; both are protected from
    reduction.  Every edge is blown up negatively, then chains reduce to
    a fixpoint.  Double-point vertices stay unprotected and collapse with
    their two strings into single vertices of Euler number -d.
    """
    if not graph.arrowheads:
        raise DomainError("input must carry arrowheads marking line vertices")
    line_ids = {v for _, v in graph.arrowheads}
    g = graph.without_arrowheads()
    protected = set(line_ids)
    for start in sorted(line_ids):
        for eidx in g.incident_edges(start):
            u, v, _ = g.edges[eidx]
            prev, cur = start, (v if u == start else u)
            last_edge = eidx
            while g.edge_ends(cur) == 2 and cur not in line_ids:
                nxt = [i for i in g.incident_edges(cur) if i != last_edge]
                last_edge = nxt[0]
                a, b, _ = g.edges[last_edge]
                prev, cur = cur, (b if a == cur else a)
            if cur not in line_ids:
                protected.add(cur)  # a multiple-point vertex
    if budget is None:
        budget = 10 * (len(g.vertices) + 3 * len(g.edges))
    steps = 0
    for idx in range(len(g.edges) - 1, -1, -1):
        g = apply_move(g, Move("BlowUpEdge", idx, sign=-1))
        steps += 1
    while True:
        moves = driver_moves(g, restrict=protected)
        if not moves:
            break
        if steps >= budget:
            raise NonTerminating(f"move budget {budget} exceeded")
        g = apply_move(g, moves[0])
        steps += 1
    return canonical_signs(g)


def fiber_classes(left, right):
    """Fiber homology classes at both ends of a two-sided string.

    ``left`` and ``right`` list the string's Euler magnitudes read from
    the central (-1)-vertex outward.  Seeded with the classes (0,1),
    (1,1), (1,0) around the center, the recursion C_{l+1} = k*C_l -
    C_{l-1} is pushed to both ends; returns (left class, right class,
    their determinant).  The determinant is nonzero exactly when the two
    end fibers are homologically independent, so the string cannot
    collapse.
    """
    left = tuple(left)
    right = tuple(right)
    if not left or not right:
        raise DomainError("both sides of the string must be nonempty")
    c_prev, c_mid, c_next = (0, 1), (1, 1), (1, 0)
    assert (c_prev[0] + c_next[0], c_prev[1] + c_next[1]) == c_mid
    a, b = c_mid, c_next
    for k in right:
        a, b = b, (k * b[0] - a[0], k * b[1] - a[1])
    vector_right = b
    a, b = c_mid, c_prev
    for k in left:
        a, b = b, (k * b[0] - a[0], k * b[1] - a[1])
    vector_left = b
    det = vector_right[0] * vector_left[1] - vector_right[1] * vector_left[0]
    return vector_left, vector_right, det
