import random

import pytest

from plumbline.calculus import (
    Move,
    apply_move,
    driver_moves,
    is_normal_form,
    normal_form_violation,
    normalize,
)
from plumbline.cfrac import expand_ncf
from plumbline.errors import MoveNotApplicable, NonTerminating
from plumbline.plumbing import PlumbingGraph, first_homology, is_isomorphic


def build_chain(interior_eulers, end_eulers=(-1, -1), end_genera=(1, 1), signs=None):
    verts = [(0, end_eulers[0], end_genera[0])]
    edges = []
    for k, e in enumerate(interior_eulers, start=1):
        verts.append((k, e, 0))
    last = len(interior_eulers) + 1
    verts.append((last, end_eulers[1], end_genera[1]))
    n_edges = len(interior_eulers) + 1
    if signs is None:
        signs = [1] * n_edges
    for k in range(n_edges):
        edges.append((k, k + 1, signs[k]))
    return PlumbingGraph(tuple(verts), tuple(edges))


# -- individual moves ------------------------------------------------------------

def test_blow_down_chain_preserves_fraction_shape():
    # [-3,-2,-1,-2,-3] between frozen ends collapses to [-5]
    g = build_chain([-3, -2, -1, -2, -3])
    out = normalize(g)
    expected = build_chain([-5])
    assert is_isomorphic(out, expected)


def test_blow_down_sign_rule():
    # u(-2) -+- v(-1) -+- w(-2): new edge sign -eta*s1*s2 = +
    g = build_chain([-1], end_eulers=(-2, -2))
    out = apply_move(g, Move("BlowDown", 1))
    assert sorted(out.vertices) == [(0, -1, 1), (2, -1, 1)]
    assert out.edges == ((0, 2, 1),)


def test_blow_down_isolated_and_leaf():
    g = PlumbingGraph(((1, 1, 0),))
    assert apply_move(g, Move("BlowDown", 1)).vertices == ()
    g = PlumbingGraph(((1, -1, 0), (2, -3, 0)), ((1, 2, 1),))
    out = apply_move(g, Move("BlowDown", 1))
    assert out.vertices == ((2, -2, 0),) and out.edges == ()


def test_blow_down_requirements():
    g = PlumbingGraph(((1, -2, 0),))
    with pytest.raises(MoveNotApplicable):
        apply_move(g, Move("BlowDown", 1))
    g = PlumbingGraph(((1, -1, 1),))
    with pytest.raises(MoveNotApplicable):
        apply_move(g, Move("BlowDown", 1))


def test_absorb_merges_and_flips_far_side():
    # a(-2) -+- z(0) -+- b(-3), with b also holding an edge to x
    g = PlumbingGraph(
        ((1, -2, 0), (2, 0, 0), (3, -3, 0), (4, -7, 0)),
        ((1, 2, 1), (2, 3, 1), (3, 4, 1)),
    )
    out = apply_move(g, Move("Absorb0", 2))
    assert sorted(out.vertices) == [(1, -5, 0), (4, -7, 0)]
    assert out.edges == ((1, 4, -1),)  # far-side sign flipped by -s1*s2


def test_absorb_adjacent_endpoints_creates_loop():
    g = PlumbingGraph(
        ((1, -3, 0), (2, 0, 0), (3, -3, 0)),
        ((1, 2, -1), (2, 3, -1), (1, 3, 1)),
    )
    before = first_homology(g)
    out = apply_move(g, Move("Absorb0", 2))
    assert out.vertices == ((1, -6, 0),)
    assert out.edges == ((1, 1, -1),)
    assert first_homology(out) == before
    assert before.torsion == (8,)


def test_handle_absorption_two_cycle():
    g = PlumbingGraph(((1, -2, 0), (2, 0, 0)), ((1, 2, 1), (1, 2, -1)))
    out = apply_move(g, Move("Handle5", 2))
    assert out.vertices == ((1, -2, 1),) and out.edges == ()
    assert first_homology(out) == first_homology(g)


def test_handle_absorption_rejects_equal_signs():
    g = PlumbingGraph(((1, -2, 0), (2, 0, 0)), ((1, 2, 1), (1, 2, 1)))
    with pytest.raises(MoveNotApplicable):
        apply_move(g, Move("Handle5", 2))


def test_handle_on_literal_loop_splits_summand():
    g = PlumbingGraph(((1, -4, 0),), ((1, 1, 1),))
    before = first_homology(g)
    out = apply_move(g, Move("Handle5", 1))
    assert first_homology(out) == before
    assert len(out.vertices) == 2 and not out.edges


def test_split_at_zero_leaf_pencil_count():
    # pencil shape: center (d, [ (d-1)(d-2)/2 ]) with d zero-leaves
    for d in (3, 5):
        genus = (d - 1) * (d - 2) // 2
        verts = [(0, d, genus)] + [(i, 0, 0) for i in range(1, d + 1)]
        edges = [(0, i, -1) for i in range(1, d + 1)]
        g = PlumbingGraph(tuple(verts), tuple(edges))
        out = apply_move(g, Move("Split6", 1))
        assert len(out.vertices) == (d - 1) ** 2
        assert all(e == 0 and gen == 0 for _, e, gen in out.vertices)
        assert first_homology(out) == first_homology(g)


def test_blow_up_edge_then_down_restores():
    g = build_chain([-2, -3], signs=[1, -1, 1])
    for idx in range(len(g.edges)):
        for eta in (1, -1):
            up = apply_move(g, Move("BlowUpEdge", idx, sign=eta))
            new_id = max(up.vertex_ids)
            down = apply_move(up, Move("BlowDown", new_id))
            assert is_isomorphic(down, g)
            assert first_homology(up) == first_homology(g)


def test_extrude_then_absorb_restores():
    g = build_chain([-4], end_genera=(1, 1))
    inc = g.incident_edges(1)
    up = apply_move(g, Move("Extrude0", 1, new_side=(inc[1],), euler_split=-3))
    assert first_homology(up) == first_homology(g)
    zero = max(up.vertex_ids)  # the extruded 0-vertex gets the last fresh id
    down = apply_move(up, Move("Absorb0", zero))
    assert is_isomorphic(down, g)


# -- normalization -----------------------------------------------------------------

def test_normalize_melts_positive_chain_vertices():
    # a [+k] chain vertex between frozen ends becomes a run of k-1 (-2)'s
    for k in (2, 3, 4, 5):
        g = build_chain([k], end_eulers=(0, 0))
        out = normalize(g)
        expected = build_chain([-2] * (k - 1), end_eulers=(-1, -1))
        assert is_isomorphic(out, expected), k


def test_normalize_dual_expansion():
    # positive chain [k_1..k_s] between ends reduces to the dual negative chain
    rng = random.Random(7)
    for _ in range(25):
        p = rng.randrange(3, 40)
        q = rng.randrange(1, p - 1)
        ks = expand_ncf(p, q).entries
        hs = expand_ncf(p, p - q).entries
        g = build_chain(list(ks), end_eulers=(0, 0))
        out = normalize(g)
        expected = build_chain([-h for h in hs], end_eulers=(-1, -1))
        assert is_isomorphic(out, expected), (p, q)


def test_normalize_r5_scenario():
    # two parallel bamboos through 0-vertices between +1 and -1 end vertices
    verts = [(0, 1, 0), (1, -1, 0), (2, 0, 0), (3, 0, 0)]
    edges = [(0, 2, -1), (2, 1, 1), (0, 3, -1), (3, 1, 1)]
    g = PlumbingGraph(tuple(verts), tuple(edges))
    out = normalize(g)
    assert len(out.vertices) == 1 and out.vertices[0][1:] == (0, 1)
    assert first_homology(out) == first_homology(g)


def test_normalize_empty_and_fixed_points():
    assert normalize(PlumbingGraph(())).vertices == ()
    g = build_chain([-2, -3])
    assert normalize(g) is not None
    assert is_isomorphic(normalize(g), g)


def test_normalize_budget():
    g = build_chain([17], end_eulers=(0, 0))
    with pytest.raises(NonTerminating):
        normalize(g, budget=2)


def test_is_normal_form_examples():
    assert is_normal_form(build_chain([-2, -3]))
    bad = PlumbingGraph(((1, -1, 0), (2, -2, 1)), ((1, 2, 1),))
    assert not is_normal_form(bad)
    assert "BlowDown" in normal_form_violation(bad)
    assert is_normal_form(PlumbingGraph(((1, 0, 0), (2, 0, 0))))
    assert not is_normal_form(PlumbingGraph(((1, 3, 0), (2, -2, 0)), ((1, 2, 1),)))


def test_trace_records_moves():
    trace = []
    normalize(build_chain([-3, -2, -1, -2, -3]), trace=trace)
    assert trace and trace[0].startswith("1 ")
    assert any("BlowDown" in line for line in trace)


# -- randomized invariance ------------------------------------------------------

def random_graph(rng, max_vertices=10):
    n = rng.randrange(2, max_vertices + 1)
    verts = tuple((i, rng.randrange(-4, 5), rng.choice((0, 0, 0, 1, 2))) for i in range(1, n + 1))
    edges = []
    for _ in range(rng.randrange(1, n + 5)):
        u = rng.randrange(1, n + 1)
        w = rng.randrange(1, n + 1)
        edges.append((min(u, w), max(u, w), rng.choice((1, -1))))
    return PlumbingGraph(verts, tuple(edges))


def all_applicable_moves(g, rng):
    moves = []
    for vid in g.vertex_ids:
        moves += [
            Move("R0", vid),
            Move("BlowDown", vid),
            Move("Absorb0", vid),
            Move("Handle5", vid),
            Move("Split6", vid),
            Move("BlowUpVertex", vid, sign=rng.choice((1, -1))),
        ]
        inc = g.incident_edges(vid)
        if inc:
            k = rng.randrange(len(inc) + 1)
            subset = tuple(rng.sample(list(inc), k))
            if all(g.edges[i][0] != g.edges[i][1] or True for i in subset):
                moves.append(
                    Move("Extrude0", vid, new_side=subset, euler_split=rng.randrange(-2, 3))
                )
    for idx in range(len(g.edges)):
        moves.append(Move("BlowUpEdge", idx, sign=rng.choice((1, -1))))
    return moves


def test_homology_invariance_randomized():
    rng = random.Random(20240811)
    checked = 0
    for _ in range(400):
        g = random_graph(rng)
        before = first_homology(g)
        for mv in all_applicable_moves(g, rng):
            try:
                out = apply_move(g, mv)
            except MoveNotApplicable:
                continue
            assert first_homology(out) == before, (mv, g)
            checked += 1
    assert checked > 2000


def test_chain_fraction_preserved_under_inverse_moves_and_renormalization():
    rng = random.Random(99)
    for _ in range(60):
        p = rng.randrange(3, 50)
        q = rng.randrange(1, p)
        from math import gcd

        if gcd(p, q) != 1:
            continue
        hs = expand_ncf(p, q).entries
        signs = [rng.choice((1, -1)) for _ in range(len(hs) + 1)]
        chain = build_chain([-h for h in hs], signs=signs)
        g = chain
        for _ in range(rng.randrange(1, 7)):
            kind = rng.choice(("edge", "edge", "extrude"))
            if kind == "edge":
                idx = rng.randrange(len(g.edges))
                g = apply_move(g, Move("BlowUpEdge", idx, sign=rng.choice((1, -1))))
            else:
                interior = [v for v in g.vertex_ids if g.genus(v) == 0 and g.edge_ends(v) == 2]
                if not interior:
                    continue
                v = rng.choice(interior)
                side = (g.incident_edges(v)[1],)
                g = apply_move(g, Move("Extrude0", v, new_side=side, euler_split=rng.randrange(-2, 3)))
        out = normalize(g)
        assert is_isomorphic(out, chain), (p, q, signs)


def test_normalize_confluence_randomized_strategies():
    base = build_chain([-3, -2, -1, -2, -3])
    reference = normalize(base)
    for seed in range(10):
        out = normalize(base, rng=random.Random(seed))
        assert is_isomorphic(out, reference)
