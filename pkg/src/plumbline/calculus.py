"""Plumbing-calculus rewriting: blow-downs, 0-chain absorption, handle
absorption, splitting, their inverses, and a normalization driver.

Sign conventions are pinned by two invariants (tested, not assumed):
every move preserves first_homology, and interior chain moves preserve
the chain's continued-fraction class.  Concretely, blowing down a vertex
with Euler number h = +-1 between edges of signs s1, s2 joins the far
ends with an edge of sign -h*s1*s2 and subtracts h from each far end;
absorbing a 0-vertex multiplies the signs of all far-side edges of one
merged endpoint by -s1*s2.

Only the moves needed for orientable, non-negative-genus graphs are
implemented; inputs that would need the non-orientable moves surface as
MoveNotApplicable or NonTerminating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import MoveNotApplicable, NonTerminating
from .plumbing import PlumbingGraph

__all__ = [
    "Move",
    "apply_move",
    "driver_moves",
    "normalize",
    "is_normal_form",
    "normal_form_violation",
]


@dataclass(frozen=True)
class Move:
    """One rewriting step.

    kind: R0 | BlowDown | BlowUpEdge | BlowUpVertex | Absorb0 | Extrude0
          | Handle5 | Split6.
    target: vertex id, except BlowUpEdge where it is an edge index.
    sign: blow-up sign.  new_side/euler_split/genus_split parameterize
    Extrude0 (which edges move to the far vertex of the extruded 0-chain,
    and how much Euler number/genus it takes along).
    """

    kind: str
    target: int
    sign: int = -1
    new_side: tuple[int, ...] = ()
    euler_split: int = 0
    genus_split: int = 0

    def describe(self) -> str:
        parts = [self.kind, f"v={self.target}" if self.kind != "BlowUpEdge" else f"edge={self.target}"]
        if self.kind in ("BlowUpEdge", "BlowUpVertex"):
            parts.append(f"sign={self.sign:+d}")
        if self.kind == "Extrude0":
            parts.append(f"split={self.euler_split}")
        return " ".join(parts)


def _require(cond, message):
    if not cond:
        raise MoveNotApplicable(message)


def _no_decorations(graph):
    _require(not graph.arrowheads, "moves operate on graphs without arrowheads")
    _require(graph.multiplicities is None, "moves operate on graphs without multiplicities")


def _vertex_exists(graph, vid):
    _require(vid in set(graph.vertex_ids), f"no vertex {vid}")


def apply_move(graph: PlumbingGraph, move: Move) -> PlumbingGraph:
    """Apply one move, returning a new graph; raises MoveNotApplicable."""
    _no_decorations(graph)
    handler = _HANDLERS.get(move.kind)
    _require(handler is not None, f"unknown move kind {move.kind!r}")
    return handler(graph, move)


def _reverse_signs(graph, move):
    v = move.target
    _vertex_exists(graph, v)
    edges = tuple(
        (u, w, -s) if (v in (u, w) and u != w) else (u, w, s) for u, w, s in graph.edges
    )
    return PlumbingGraph(graph.vertices, edges)


def _blow_down(graph, move):
    v = move.target
    _vertex_exists(graph, v)
    eta = graph.euler(v)
    _require(eta in (1, -1), f"vertex {v} has Euler number {eta}, need +-1")
    _require(graph.genus(v) == 0, f"vertex {v} has positive genus")
    _require(not graph.loops_at(v), f"vertex {v} carries a loop")
    inc = graph.incident_edges(v)
    _require(len(inc) <= 2, f"vertex {v} lies on more than two edges")

    delta = {}
    new_edge = None
    if len(inc) == 1:
        u, w, _ = graph.edges[inc[0]]
        other = w if u == v else u
        delta[other] = eta
    elif len(inc) == 2:
        (u1, w1, s1), (u2, w2, s2) = graph.edges[inc[0]], graph.edges[inc[1]]
        a = w1 if u1 == v else u1
        b = w2 if u2 == v else u2
        delta[a] = delta.get(a, 0) + eta
        delta[b] = delta.get(b, 0) + eta
        new_edge = (min(a, b), max(a, b), -eta * s1 * s2)

    vertices = tuple(
        (i, e - delta.get(i, 0), g) for i, e, g in graph.vertices if i != v
    )
    edges = tuple(e for k, e in enumerate(graph.edges) if k not in inc)
    if new_edge is not None:
        edges += (new_edge,)
    return PlumbingGraph(vertices, edges)


def _blow_up_edge(graph, move):
    idx, eta = move.target, move.sign
    _require(0 <= idx < len(graph.edges), f"no edge {idx}")
    _require(eta in (1, -1), "blow-up sign must be +-1")
    u, w, s = graph.edges[idx]
    n = graph.fresh_id()
    delta = {u: eta} if u == w else {u: eta, w: eta}
    if u == w:
        delta[u] = 2 * eta
    vertices = tuple((i, e + delta.get(i, 0), g) for i, e, g in graph.vertices)
    vertices += ((n, eta, 0),)
    # split signs so the inverse blow-down restores s: -eta*s1*s2 = s
    s1, s2 = -eta * s, 1
    edges = tuple(e for k, e in enumerate(graph.edges) if k != idx)
    edges += ((u, n, s1), (n, w, s2))
    return PlumbingGraph(vertices, edges)


def _blow_up_vertex(graph, move):
    v, eta = move.target, move.sign
    _vertex_exists(graph, v)
    _require(eta in (1, -1), "blow-up sign must be +-1")
    n = graph.fresh_id()
    vertices = tuple((i, e + (eta if i == v else 0), g) for i, e, g in graph.vertices)
    vertices += ((n, eta, 0),)
    return PlumbingGraph(vertices, graph.edges + ((v, n, 1),))


def _absorb0(graph, move):
    v = move.target
    _vertex_exists(graph, v)
    _require(graph.euler(v) == 0 and graph.genus(v) == 0, f"vertex {v} is not a (0,[0]) vertex")
    _require(not graph.loops_at(v), f"vertex {v} carries a loop")
    inc = graph.incident_edges(v)
    _require(len(inc) == 2, f"vertex {v} must lie on exactly two edges")
    (u1, w1, s1), (u2, w2, s2) = graph.edges[inc[0]], graph.edges[inc[1]]
    a = w1 if u1 == v else u1
    b = w2 if u2 == v else u2
    _require(a != b, "both edges join the same vertex (handle absorption applies)")
    factor = -s1 * s2
    merged = min(a, b)
    ea, ga = graph.euler(a), graph.genus(a)
    eb, gb = graph.euler(b), graph.genus(b)
    vertices = tuple(
        v2 for v2 in graph.vertices if v2[0] not in (v, a, b)
    ) + ((merged, ea + eb, ga + gb),)
    edges = []
    for k, (x, y, s) in enumerate(graph.edges):
        if k in inc:
            continue
        # each end at b picks up the sign factor; ends at a or b land on merged
        bends = (x == b) + (y == b)
        x2 = merged if x in (a, b) else x
        y2 = merged if y in (a, b) else y
        edges.append((min(x2, y2), max(x2, y2), s * factor**bends))
    return PlumbingGraph(tuple(sorted(vertices)), tuple(edges))


def _handle5(graph, move):
    v = move.target
    _vertex_exists(graph, v)
    loops = graph.loops_at(v)
    if loops:
        # split off the handle as a free S^1 x S^2 summand
        idx = loops[0]
        sigma = graph.edges[idx][2]
        n = graph.fresh_id()
        vertices = tuple(
            (i, e + (2 * sigma if i == v else 0), g) for i, e, g in graph.vertices
        ) + ((n, 0, 0),)
        edges = tuple(e for k, e in enumerate(graph.edges) if k != idx)
        return PlumbingGraph(vertices, edges)
    _require(graph.euler(v) == 0 and graph.genus(v) == 0, f"vertex {v} is not a (0,[0]) vertex")
    inc = graph.incident_edges(v)
    _require(len(inc) == 2, f"vertex {v} must lie on exactly two edges")
    (u1, w1, s1), (u2, w2, s2) = graph.edges[inc[0]], graph.edges[inc[1]]
    a = w1 if u1 == v else u1
    b = w2 if u2 == v else u2
    _require(a == b, "edges join distinct vertices (0-chain absorption applies)")
    _require(s1 * s2 == -1, "equal-sign handle is non-orientable (unsupported)")
    vertices = tuple(
        (i, e, g + (1 if i == a else 0)) for i, e, g in graph.vertices if i != v
    )
    edges = tuple(e for k, e in enumerate(graph.edges) if k not in inc)
    return PlumbingGraph(vertices, edges)


def _extrude0(graph, move):
    v = move.target
    _vertex_exists(graph, v)
    inc = set(graph.incident_edges(v))
    new_side = tuple(sorted(set(move.new_side)))
    _require(all(i in inc for i in new_side), "new_side must be edges at the target")
    _require(graph.genus(v) >= move.genus_split >= 0, "bad genus split")
    far = graph.fresh_id()
    mid = far + 1
    vertices = tuple(
        (i, e - (move.euler_split if i == v else 0), g - (move.genus_split if i == v else 0))
        for i, e, g in graph.vertices
    )
    vertices += ((far, move.euler_split, move.genus_split), (mid, 0, 0))
    edges = []
    for k, (x, y, s) in enumerate(graph.edges):
        if k in new_side:
            x2 = far if x == v else x
            y2 = far if y == v else y
            edges.append((x2, y2, s))
        else:
            edges.append((x, y, s))
    # chain signs (+,-) make the inverse absorption sign-neutral
    edges += ((v, mid, 1), (mid, far, -1))
    return PlumbingGraph(vertices, tuple(edges))


def _split6(graph, move):
    v = move.target
    _vertex_exists(graph, v)
    _require(graph.euler(v) == 0 and graph.genus(v) == 0, f"vertex {v} is not a (0,[0]) vertex")
    inc = graph.incident_edges(v)
    _require(len(inc) == 1 and not graph.loops_at(v), f"vertex {v} is not a 0-leaf")
    u1, w1, _ = graph.edges[inc[0]]
    w = w1 if u1 == v else u1
    g_w = graph.genus(w)
    other_edges = [i for i in graph.incident_edges(w) if i != inc[0]]
    comp_w = set(next(c for c in graph.components() if w in c))
    vertices = tuple(v2 for v2 in graph.vertices if v2[0] not in (v, w))
    edges = tuple(
        e for k, e in enumerate(graph.edges) if k != inc[0] and w not in e[:2]
    )
    rest = PlumbingGraph(vertices, edges)
    # deleting the filled-in neighbor w frees one S^1 x S^2 for each of its
    # handles and for each severed edge beyond the first per released piece
    released = sum(1 for c in rest.components() if c[0] in comp_w)
    extras = 2 * g_w + len(other_edges) - released
    base = rest.fresh_id()
    new_vertices = rest.vertices + tuple((base + i, 0, 0) for i in range(extras))
    return PlumbingGraph(new_vertices, rest.edges)


_HANDLERS = {
    "R0": _reverse_signs,
    "BlowDown": _blow_down,
    "BlowUpEdge": _blow_up_edge,
    "BlowUpVertex": _blow_up_vertex,
    "Absorb0": _absorb0,
    "Handle5": _handle5,
    "Extrude0": _extrude0,
    "Split6": _split6,
}


# -- the normalization driver ---------------------------------------------------

def _melting(graph, vid):
    """Is vid a positive chain vertex still being dissolved?"""
    return (
        graph.genus(vid) == 0
        and graph.euler(vid) >= 1
        and graph.edge_ends(vid) <= 2
        and not graph.loops_at(vid)
    )


def _chain_candidates(graph, restrict=None):
    """Vertices eligible for reduction, grouped by move class."""
    blow, absorb, handle, split, loops, positive = [], [], [], [], [], []
    for vid, e, g in sorted(graph.vertices):
        if restrict is not None and vid in restrict:
            continue
        if graph.loops_at(vid):
            loops.append(vid)
            continue
        if g != 0:
            continue
        inc = graph.incident_edges(vid)
        ends = graph.edge_ends(vid)
        if e in (1, -1) and ends <= 2:
            # blowing a -1 next to a melting positive vertex would undo the
            # blow-up that is dissolving it; the positive side moves instead
            if e == -1 and any(_melting(graph, n) for n in graph.neighbors(vid)):
                continue
            blow.append(vid)
        elif e == 0 and len(inc) == 2:
            (u1, w1, s1), (u2, w2, s2) = graph.edges[inc[0]], graph.edges[inc[1]]
            a = w1 if u1 == vid else u1
            b = w2 if u2 == vid else u2
            if a != b:
                absorb.append(vid)
            elif s1 * s2 == -1:
                handle.append(vid)
        elif e == 0 and ends == 1:
            split.append(vid)
        elif e >= 2 and ends == 2:
            positive.append(vid)
    return blow, absorb, handle, split, loops, positive


def driver_moves(graph: PlumbingGraph, restrict=None) -> list[Move]:
    """Applicable moves of the normalization strategy, best class first."""
    blow, absorb, handle, split, loops, positive = _chain_candidates(graph, restrict)
    for kind, group in (
        ("BlowDown", blow),
        ("Absorb0", absorb),
        ("Handle5", handle),
        ("Split6", split),
        ("Handle5", loops),
    ):
        if group:
            return [Move(kind, v) for v in group]
    if positive:
        # dissolve a positive chain vertex by a negative blow-up on one of
        # its edges; repetition melts the vertex into a run of -2's
        return [Move("BlowUpEdge", min(graph.incident_edges(v)), sign=-1) for v in positive]
    return []


def normalize(
    graph: PlumbingGraph,
    trace: list | None = None,
    rng: random.Random | None = None,
    budget: int | None = None,
) -> PlumbingGraph:
    """Reduce to normal form by the fixed strategy; see driver_moves.

    Arrowheads and multiplicities are stripped first.  The move budget
    defaults to 10*(V+E) of the input; exceeding it raises NonTerminating,
    as does reaching a fixpoint that is not in normal form.
    """
    g = graph.without_arrowheads()
    if budget is None:
        budget = 10 * (len(g.vertices) + len(g.edges))
    steps = 0
    while True:
        moves = driver_moves(g)
        if not moves:
            break
        move = rng.choice(moves) if rng is not None else moves[0]
        if steps >= budget:
            raise NonTerminating(f"move budget {budget} exceeded")
        g = apply_move(g, move)
        steps += 1
        if trace is not None:
            trace.append(f"{steps} {move.describe()}")
    violation = normal_form_violation(g)
    if violation is not None:
        raise NonTerminating(f"stuck outside the supported class: {violation}")
    return g


def normal_form_violation(graph: PlumbingGraph) -> str | None:
    """First violated normal-form condition, or None.

    Checks: no strategy move applies; interior string vertices have
    Euler number <= -2; single-vertex components have e = 0 or are nodes.
    """
    g = graph.without_arrowheads()
    moves = driver_moves(g)
    if moves:
        return f"move applies: {moves[0].describe()}"
    for vid, e, gen in sorted(g.vertices):
        ends = g.edge_ends(vid)
        if gen == 0 and 1 <= ends <= 2 and e > -2:
            return f"string vertex {vid} has Euler number {e} > -2"
    for comp in g.components():
        if len(comp) == 1:
            vid = comp[0]
            if g.edge_ends(vid) == 0 and g.euler(vid) != 0 and g.genus(vid) == 0:
                return f"isolated vertex {vid} with nonzero Euler number and genus 0"
    return None


def is_normal_form(graph: PlumbingGraph) -> bool:
    return normal_form_violation(graph) is None
