"""Decorated plumbing graphs: data structure, invariants, isomorphism, I/O.

A plumbing graph is a finite multigraph (loops allowed) whose vertices
carry an Euler number and a non-negative genus and whose edges carry a
sign.  Optional arrowheads hang off vertices, and an optional multiplicity
system labels vertices and arrowheads with integers.

Vertex identity is an opaque stable integer id.  Graphs are treated as
immutable values: every rewriting operation builds a new graph.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from math import gcd

from .errors import FormatError, MissingMultiplicities, PlumbingError

__all__ = [
    "PlumbingGraph",
    "NodeGraph",
    "NodeEdge",
    "HomologyData",
    "check_multiplicity_system",
    "regular_node_graph",
    "special_node_graph",
    "first_homology",
    "is_isomorphic",
    "canonical_signs",
    "is_complete_bipartite",
    "to_dot",
    "graph_to_text",
    "graph_from_text",
    "smith_invariant_factors",
]


@dataclass(eq=False)
class PlumbingGraph:
    """Vertices (id, euler, genus), signed edges, optional arrows and labels.

    edges: tuple of (u, v, sign) with sign in {+1, -1}; u == v is a loop.
    arrowheads: tuple of (arrow_id, vertex_id); ids share the vertex space.
    multiplicities: mapping id -> int over vertices and arrowheads, or None.
    """

    vertices: tuple[tuple[int, int, int], ...] = ()
    edges: tuple[tuple[int, int, int], ...] = ()
    arrowheads: tuple[tuple[int, int], ...] = ()
    multiplicities: dict[int, int] | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        ids = [v[0] for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise PlumbingError("duplicate vertex ids")
        known = set(ids)
        for u, v, s in self.edges:
            if u not in known or v not in known:
                raise PlumbingError(f"edge ({u},{v}) references unknown vertex")
            if s not in (1, -1):
                raise PlumbingError("edge signs must be +1 or -1")
        for a, v in self.arrowheads:
            if v not in known:
                raise PlumbingError(f"arrowhead {a} attached to unknown vertex {v}")
            if a in known:
                raise PlumbingError(f"arrowhead id {a} collides with a vertex id")
        if any(g < 0 for _, _, g in self.vertices):
            raise PlumbingError("genus must be non-negative (orientable case)")

    # -- basic views ---------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v[0] for v in self.vertices)

    def euler(self, vid: int) -> int:
        return self._decor()[vid][0]

    def genus(self, vid: int) -> int:
        return self._decor()[vid][1]

    def _decor(self):
        dec = self._cache.get("decor")
        if dec is None:
            dec = {vid: (e, g) for vid, e, g in self.vertices}
            self._cache["decor"] = dec
        return dec

    def incident_edges(self, vid: int) -> tuple[int, ...]:
        """Indices into ``edges`` of all edges touching vid (loops once)."""
        inc = self._cache.get("incident")
        if inc is None:
            inc = {v[0]: [] for v in self.vertices}
            for idx, (u, v, _) in enumerate(self.edges):
                inc[u].append(idx)
                if v != u:
                    inc[v].append(idx)
            inc = {k: tuple(v) for k, v in inc.items()}
            self._cache["incident"] = inc
        return inc[vid]

    def edge_ends(self, vid: int) -> int:
        """Number of edge ends at vid; a loop contributes 2."""
        total = 0
        for i in self.incident_edges(vid):
            u, v, _ = self.edges[i]
            total += 2 if u == v else 1
        return total

    def loops_at(self, vid: int) -> tuple[int, ...]:
        return tuple(i for i in self.incident_edges(vid) if self.edges[i][0] == self.edges[i][1])

    def neighbors(self, vid: int) -> tuple[int, ...]:
        """Distinct adjacent vertices, excluding vid itself."""
        out = set()
        for i in self.incident_edges(vid):
            u, v, _ = self.edges[i]
            out.add(v if u == vid else u)
        out.discard(vid)
        return tuple(sorted(out))

    def arrow_count(self, vid: int) -> int:
        return sum(1 for _, v in self.arrowheads if v == vid)

    def components(self) -> list[tuple[int, ...]]:
        seen = set()
        comps = []
        for vid in self.vertex_ids:
            if vid in seen:
                continue
            stack, comp = [vid], []
            seen.add(vid)
            while stack:
                cur = stack.pop()
                comp.append(cur)
                for n in self.neighbors(cur):
                    if n not in seen:
                        seen.add(n)
                        stack.append(n)
            comps.append(tuple(sorted(comp)))
        return comps

    def betti_of_graph(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components())

    def fresh_id(self) -> int:
        taken = [v[0] for v in self.vertices] + [a for a, _ in self.arrowheads]
        return max(taken, default=0) + 1

    def without_arrowheads(self) -> "PlumbingGraph":
        if not self.arrowheads and self.multiplicities is None:
            return self
        return PlumbingGraph(self.vertices, self.edges)

    def relabeled(self, mapping) -> "PlumbingGraph":
        """Apply an id substitution (must be injective on vertex ids)."""
        verts = tuple(sorted((mapping.get(i, i), e, g) for i, e, g in self.vertices))
        edges = tuple(
            (min(mapping.get(u, u), mapping.get(v, v)), max(mapping.get(u, u), mapping.get(v, v)), s)
            for u, v, s in self.edges
        )
        arrows = tuple((mapping.get(a, a), mapping.get(v, v)) for a, v in self.arrowheads)
        mults = None
        if self.multiplicities is not None:
            mults = {mapping.get(i, i): m for i, m in self.multiplicities.items()}
        return PlumbingGraph(verts, edges, arrows, mults)


# -- multiplicity systems ----------------------------------------------------

def check_multiplicity_system(graph: PlumbingGraph) -> tuple[int, ...]:
    """Vertices violating e_v*m_v + sum of signed neighbor labels = 0.

    Arrowhead labels participate with sign +1.  Empty result means the
    labels form a multiplicity system.
    """
    m = graph.multiplicities
    if m is None:
        raise MissingMultiplicities("graph carries no multiplicity labels")
    needed = set(graph.vertex_ids) | {a for a, _ in graph.arrowheads}
    missing = needed - set(m)
    if missing:
        raise MissingMultiplicities(f"labels missing for ids {sorted(missing)}")
    bad = []
    for vid, e, _g in graph.vertices:
        total = e * m[vid]
        for u, v, s in graph.edges:
            if u == vid:
                total += s * m[v]
            if v == vid:
                total += s * m[u]
        for a, v in graph.arrowheads:
            if v == vid:
                total += m[a]
        if total != 0:
            bad.append(vid)
    return tuple(bad)


# -- node graphs ---------------------------------------------------------------

@dataclass(frozen=True)
class NodeEdge:
    """A string between two nodes: interior vertex ids and Euler numbers.

    ``interior`` and ``eulers`` run from ``u`` to ``w``; read them reversed
    to traverse from ``w``.
    """

    u: int
    w: int
    interior: tuple[int, ...]
    eulers: tuple[int, ...]


@dataclass(frozen=True)
class NodeGraph:
    """Contraction of a plumbing graph onto a chosen node set."""

    nodes: tuple[int, ...]
    edges: tuple[NodeEdge, ...]
    degenerate_components: tuple[tuple[int, ...], ...]

    def degree(self, node: int) -> int:
        return sum((e.u == node) + (e.w == node) for e in self.edges)

    def betti(self) -> int:
        comps = len(_node_components(self))
        return len(self.edges) - len(self.nodes) + comps


def _node_components(ng: NodeGraph):
    adj = {n: set() for n in ng.nodes}
    for e in ng.edges:
        adj[e.u].add(e.w)
        adj[e.w].add(e.u)
    seen, comps = set(), []
    for n in ng.nodes:
        if n in seen:
            continue
        stack, comp = [n], set()
        seen.add(n)
        while stack:
            cur = stack.pop()
            comp.add(cur)
            for m in adj[cur]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        comps.append(comp)
    return comps


def is_regular_node(graph: PlumbingGraph, vid: int) -> bool:
    return graph.edge_ends(vid) >= 3 or graph.genus(vid) != 0


def is_special_node(graph: PlumbingGraph, vid: int) -> bool:
    """Exactly two neighbors, each of genus 0 with Euler number -1."""
    if graph.edge_ends(vid) != 2 or graph.loops_at(vid):
        return False
    nbrs = graph.neighbors(vid)
    if len(nbrs) != 2:
        return False
    return all(graph.euler(n) == -1 and graph.genus(n) == 0 for n in nbrs)


def _node_graph(graph: PlumbingGraph, nodes: set[int]) -> NodeGraph:
    visited_edges = set()
    node_edges = []
    for start in sorted(nodes):
        for eidx in graph.incident_edges(start):
            if eidx in visited_edges:
                continue
            u, v, _ = graph.edges[eidx]
            if u == v:  # loop at a node: a node-graph loop with empty interior
                visited_edges.add(eidx)
                node_edges.append(NodeEdge(start, start, (), ()))
                continue
            # walk away from start until the next node (or a dead end)
            visited = [eidx]
            prev, cur = start, (v if u == start else u)
            interior = []
            ok = True
            while cur not in nodes:
                nxt_edges = [i for i in graph.incident_edges(cur) if i != visited[-1]]
                if len(nxt_edges) != 1:
                    ok = False  # dead end (valency-1 non-node): drop the walk
                    break
                interior.append(cur)
                eidx2 = nxt_edges[0]
                visited.append(eidx2)
                a, b, _ = graph.edges[eidx2]
                prev, cur = cur, (b if a == cur else a)
            visited_edges.update(visited)
            if ok:
                node_edges.append(
                    NodeEdge(start, cur, tuple(interior), tuple(graph.euler(x) for x in interior))
                )
    # components containing no node at all (cycles / free strings)
    covered = set(nodes)
    for e in node_edges:
        covered.update(e.interior)
    degenerate = tuple(c for c in graph.components() if not (set(c) & nodes))
    return NodeGraph(tuple(sorted(nodes)), tuple(node_edges), degenerate)


def regular_node_graph(graph: PlumbingGraph) -> NodeGraph:
    return _node_graph(graph, {v for v in graph.vertex_ids if is_regular_node(graph, v)})


def special_node_graph(graph: PlumbingGraph) -> NodeGraph:
    nodes = {
        v
        for v in graph.vertex_ids
        if is_regular_node(graph, v) or is_special_node(graph, v)
    }
    return _node_graph(graph, nodes)


# -- homology ------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyData:
    betti: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            assert b % a == 0, "torsion factors must divide successively"


def smith_invariant_factors(rows: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form (non-negative, divisibility chain).

    Plain integer elimination with smallest-pivot selection; fine for the
    small exact matrices this package produces.
    """
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    out = []
    top = 0
    while top < min(n_rows, n_cols):
        pivot = None
        best = None
        for i in range(top, n_rows):
            for j in range(top, n_cols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        for row in m:
            row[top], row[pj] = row[pj], row[top]
        while True:
            p = m[top][top]
            changed = False
            for i in range(top + 1, n_rows):
                q = m[i][top] // p
                if q:
                    for j in range(top, n_cols):
                        m[i][j] -= q * m[top][j]
                if m[i][top]:
                    m[top], m[i] = m[i], m[top]
                    changed = True
                    break
            if changed:
                continue
            for j in range(top + 1, n_cols):
                q = m[top][j] // p
                if q:
                    for i in range(top, n_rows):
                        m[i][j] -= q * m[i][top]
                if m[top][j]:
                    for i in range(top, n_rows):
                        m[i][top], m[i][j] = m[i][j], m[i][top]
                    changed = True
                    break
            if not changed:
                break
        out.append(abs(m[top][top]))
        top += 1
    # fix the divisibility chain
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            a, b = out[i], out[j]
            g = gcd(a, b)
            out[i], out[j] = g, a * b // g if g else 0
    return out


def intersection_matrix(graph: PlumbingGraph) -> tuple[list[int], list[list[int]]]:
    """Symmetric matrix A with A_vv = e_v + 2*sum of loop signs, A_vw = signed
    edge count between v and w."""
    ids = sorted(graph.vertex_ids)
    pos = {vid: k for k, vid in enumerate(ids)}
    n = len(ids)
    mat = [[0] * n for _ in range(n)]
    for vid, e, _g in graph.vertices:
        mat[pos[vid]][pos[vid]] = e
    for u, v, s in graph.edges:
        if u == v:
            mat[pos[u]][pos[u]] += 2 * s
        else:
            mat[pos[u]][pos[v]] += s
            mat[pos[v]][pos[u]] += s
    return ids, mat


def first_homology(graph: PlumbingGraph) -> HomologyData:
    """H_1 of the plumbed manifold: rank and invariant factors.

    betti = 2*sum of genera + b_1(graph) + nullity(A); torsion factors are
    the Smith invariants of A that exceed 1.  Arrowheads must be removed
    by the caller (graphs with arrowheads describe open manifolds).
    """
    if graph.arrowheads:
        raise PlumbingError("first_homology is defined for graphs without arrowheads")
    _, mat = intersection_matrix(graph)
    factors = smith_invariant_factors(mat) if mat else []
    rank = sum(1 for f in factors if f != 0)
    nullity = len(mat) - rank
    total_genus = sum(g for _, _, g in graph.vertices)
    betti = 2 * total_genus + graph.betti_of_graph() + nullity
    torsion = tuple(sorted(f for f in factors if f > 1))
    return HomologyData(betti=betti, torsion=torsion)


# -- sign canonicalization and isomorphism ----------------------------------------

def canonical_signs(graph: PlumbingGraph) -> PlumbingGraph:
    """R0-canonical sign pattern: spanning-forest edges positive, each
    non-tree edge carrying its fundamental cycle's sign product, loops kept."""
    flip = {}
    edge_by = {}
    for idx, (u, v, _) in enumerate(graph.edges):
        if u != v:
            edge_by.setdefault(u, []).append((v, idx))
            edge_by.setdefault(v, []).append((u, idx))
    tree = set()
    for root in sorted(graph.vertex_ids):
        if root in flip:
            continue
        flip[root] = 1
        stack = [root]
        while stack:
            cur = stack.pop()
            for nxt, idx in sorted(edge_by.get(cur, ())):
                if nxt not in flip:
                    flip[nxt] = flip[cur] * graph.edges[idx][2]
                    tree.add(idx)
                    stack.append(nxt)
    new_edges = []
    for idx, (u, v, s) in enumerate(graph.edges):
        if u == v:
            new_edges.append((u, v, s))
        else:
            new_edges.append((u, v, s * flip[u] * flip[v]))
    new_edges.sort(key=lambda e: (min(e[0], e[1]), max(e[0], e[1]), -e[2]))
    return replace(
        graph,
        vertices=tuple(sorted(graph.vertices)),
        edges=tuple((min(u, v), max(u, v), s) for u, v, s in new_edges),
        _cache={},
    )


def _sign_compatible(g1, g2, mapping):
    """Does some vertex resigning y make the mapped edge signs agree?"""
    pair_signs_1 = {}
    pair_signs_2 = {}
    for u, v, s in g1.edges:
        if u == v:
            pair_signs_1.setdefault((mapping[u], mapping[u]), []).append(s)
        else:
            key = tuple(sorted((mapping[u], mapping[v])))
            pair_signs_1.setdefault(key, []).append(s)
    for u, v, s in g2.edges:
        key = (u, u) if u == v else tuple(sorted((u, v)))
        pair_signs_2.setdefault(key, []).append(s)
    if set(pair_signs_1) != set(pair_signs_2):
        return False
    # per vertex pair the relative flip y_u*y_v is a single unknown sign
    constraints = {}
    for key, signs in pair_signs_1.items():
        s1, s2 = sorted(signs), sorted(pair_signs_2[key])
        allowed = set()
        if s1 == s2:
            allowed.add(1)
        if sorted(-x for x in s1) == s2:
            allowed.add(-1)
        if not allowed:
            return False
        if key[0] == key[1]:  # loops: y_v^2 = 1, signs must match as-is
            if 1 not in allowed:
                return False
            continue
        if allowed == {1, -1}:
            continue  # symmetric multiset, no constraint
        constraints[key] = allowed.pop()
    # 2-color the constraint graph
    color = {}
    adj = {}
    for (u, v), c in constraints.items():
        adj.setdefault(u, []).append((v, c))
        adj.setdefault(v, []).append((u, c))
    for start in adj:
        if start in color:
            continue
        color[start] = 1
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt, c in adj[cur]:
                want = color[cur] * c
                if nxt in color:
                    if color[nxt] != want:
                        return False
                else:
                    color[nxt] = want
                    stack.append(nxt)
    return True


def is_isomorphic(g1: PlumbingGraph, g2: PlumbingGraph, witness: bool = False):
    """Isomorphism of decorated multigraphs up to R0 resigning.

    Matches Euler numbers, genera, arrowhead counts, multiedge structure
    and loop signs; edge signs are compared up to a vertex-flip coboundary
    (equivalently, all cycle sign products must agree).
    """
    mapping = _find_graph_bijection(g1, g2)
    if witness:
        return mapping is not None, mapping
    return mapping is not None


def _vertex_key(g: PlumbingGraph, vid: int):
    return (
        g.euler(vid),
        g.genus(vid),
        g.edge_ends(vid),
        len(g.loops_at(vid)),
        tuple(sorted(g.edges[i][2] for i in g.loops_at(vid))),
        g.arrow_count(vid),
    )


def _find_graph_bijection(g1: PlumbingGraph, g2: PlumbingGraph):
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    if len(g1.arrowheads) != len(g2.arrowheads):
        return None
    keys1 = {v: _vertex_key(g1, v) for v in g1.vertex_ids}
    keys2 = {v: _vertex_key(g2, v) for v in g2.vertex_ids}
    if sorted(keys1.values()) != sorted(keys2.values()):
        return None

    def multi(g):
        out = {}
        for u, v, _ in g.edges:
            if u != v:
                key = tuple(sorted((u, v)))
                out[key] = out.get(key, 0) + 1
        return out

    m1, m2 = multi(g1), multi(g2)
    key_freq = Counter(keys1.values())
    order = sorted(g1.vertex_ids, key=lambda v: (key_freq[keys1[v]], v))
    candidates = {v: [w for w in g2.vertex_ids if keys2[w] == keys1[v]] for v in g1.vertex_ids}
    mapping: dict[int, int] = {}
    used = set()

    def consistent(v, w):
        mapped_nbrs = set()
        for n in g1.neighbors(v):
            if n in mapping:
                key1 = tuple(sorted((v, n)))
                key2 = tuple(sorted((w, mapping[n])))
                if m1.get(key1, 0) != m2.get(key2, 0):
                    return False
                mapped_nbrs.add(mapping[n])
        # any already-mapped vertex adjacent to w must be the image of a
        # mapped neighbor of v
        for n2 in g2.neighbors(w):
            if n2 in used and n2 not in mapped_nbrs:
                return False
        return True

    def extend(k):
        if k == len(order):
            return _sign_compatible(g1, g2, mapping)
        v = order[k]
        for w in candidates[v]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(k + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if not g1.vertices:
        return {}
    return dict(mapping) if extend(0) else None


# -- complete bipartite test -----------------------------------------------------

def is_complete_bipartite(ng: NodeGraph):
    """Return (a, b) with a >= b >= 1 if the simple reduction of the node
    graph is K_{a,b}; None otherwise (loops, odd cycles, missing edges)."""
    if not ng.nodes or not ng.edges:
        return None
    simple = set()
    for e in ng.edges:
        if e.u == e.w:
            return None
        simple.add((min(e.u, e.w), max(e.u, e.w)))
    color = {}
    for start in ng.nodes:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            cur = stack.pop()
            for u, w in simple:
                other = w if u == cur else (u if w == cur else None)
                if other is None:
                    continue
                if other in color:
                    if color[other] == color[cur]:
                        return None
                else:
                    color[other] = 1 - color[cur]
                    stack.append(other)
    side0 = sorted(v for v in ng.nodes if color.get(v, 0) == 0)
    side1 = sorted(v for v in ng.nodes if color.get(v) == 1)
    if not side0 or not side1:
        return None
    if len(simple) != len(side0) * len(side1):
        return None
    for u, w in itertools.product(side0, side1):
        if (min(u, w), max(u, w)) not in simple:
            return None
    a, b = sorted((len(side0), len(side1)), reverse=True)
    return a, b


# -- text format and DOT -----------------------------------------------------------

def graph_to_text(graph: PlumbingGraph) -> str:
    out = ["plumbing"]
    for vid, e, g in sorted(graph.vertices):
        out.append(f"v {vid} e={e} g={g}")
    for u, v, s in sorted((min(u, v), max(u, v), s) for u, v, s in graph.edges):
        out.append(f"e {u} {v} {'+' if s > 0 else '-'}")
    for a, v in sorted(graph.arrowheads):
        out.append(f"a {a} -> {v}")
    if graph.multiplicities is not None:
        for i, m in sorted(graph.multiplicities.items()):
            out.append(f"m {i} {m}")
    return "\n".join(out) + "\n"


def graph_from_text(text: str) -> PlumbingGraph:
    vertices, edges, arrows = [], [], []
    mults = None
    header_seen = False
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != "plumbing":
                raise FormatError("expected 'plumbing' header", no)
            header_seen = True
            continue
        toks = line.split()
        try:
            if toks[0] == "v" and len(toks) == 4:
                vid = int(toks[1])
                if not toks[2].startswith("e=") or not toks[3].startswith("g="):
                    raise ValueError
                vertices.append((vid, int(toks[2][2:]), int(toks[3][2:])))
            elif toks[0] == "e" and len(toks) == 4 and toks[3] in "+-":
                edges.append((int(toks[1]), int(toks[2]), 1 if toks[3] == "+" else -1))
            elif toks[0] == "a" and len(toks) == 4 and toks[2] == "->":
                arrows.append((int(toks[1]), int(toks[3])))
            elif toks[0] == "m" and len(toks) == 3:
                if mults is None:
                    mults = {}
                mults[int(toks[1])] = int(toks[2])
            else:
                raise ValueError
        except ValueError:
            raise FormatError(f"cannot parse {line!r}", no) from None
    if not header_seen:
        raise FormatError("missing 'plumbing' header")
    try:
        return PlumbingGraph(tuple(vertices), tuple(edges), tuple(arrows), mults)
    except PlumbingError as exc:
        raise FormatError(str(exc)) from exc


def to_dot(graph: PlumbingGraph) -> str:
    """Deterministic DOT output; negative edges dashed, arrowheads as points."""
    if not graph.vertices and not graph.edges:
        return "graph G {}"
    out = ["graph G {"]
    for vid, e, g in sorted(graph.vertices):
        out.append(f'  n{vid} [label="e={e},g={g}"];')
    for a, v in sorted(graph.arrowheads):
        out.append(f"  n{a} [shape=point];")
        out.append(f"  n{a} -- n{v};")
    for u, v, s in sorted((min(u, v), max(u, v), s) for u, v, s in graph.edges):
        style = "" if s > 0 else " [style=dashed]"
        out.append(f"  n{u} -- n{v}{style};")
    out.append("}")
    return "\n".join(out)
