import pytest

from plumbline.arrangement import enumerate_arrangements, is_arrangement_isomorphic, make_family, validate
from plumbline.boundary import build_boundary_graph, build_reduced_graph
from plumbline.calculus import normalize
from plumbline.errors import (
    AmbiguousBipartition,
    NotNormalForm,
    NoValidBipartition,
    Unrecognized,
)
from plumbline.fixtures import broken_pappus_poset, ceva_arrangement
from plumbline.plumbing import PlumbingGraph, canonical_signs
from plumbline.reconstruct import classify_boundary, determine_poset, roundtrip


def isolated_zeros(n):
    return PlumbingGraph(tuple((i, 0, 0) for i in range(1, n + 1)))


def one_triple_arrangement(d=5):
    pts = [(1, 2, 3)] + [
        (i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1) if not (i <= 3 and j <= 3)
    ]
    return validate(pts, d)


# -- classification of explicit normal forms ------------------------------------

def test_classify_empty_graph():
    assert classify_boundary(PlumbingGraph(())).tag == "SingleLine"


def test_classify_isolated_zeros():
    got = classify_boundary(isolated_zeros(4))
    assert got.tag == "Pencil" and got.d == 3
    assert classify_boundary(isolated_zeros(1)).d == 2  # single zero vertex
    with pytest.raises(Unrecognized):
        classify_boundary(isolated_zeros(5))  # not a square


def test_classify_near_pencil_vertex():
    got = classify_boundary(PlumbingGraph(((1, 0, 3),)))
    assert got.tag == "NearPencil" and got.d == 5


def test_classify_rejects_unnormalized():
    g = PlumbingGraph(((1, -1, 0), (2, -2, 0)), ((1, 2, 1),))
    with pytest.raises(NotNormalForm):
        classify_boundary(g)


def test_classify_double_pencil_pipeline():
    nf = normalize(build_boundary_graph(make_family("double_pencil", a=4, b=3)))
    got = classify_boundary(nf)
    assert got.tag == "DoublePencil" and (got.a, got.b) == (4, 3)


def test_classify_unrecognized_disconnected():
    g = PlumbingGraph(((1, 0, 2), (2, 0, 1)))
    with pytest.raises(Unrecognized):
        classify_boundary(g)


# -- poset determination -----------------------------------------------------------

def test_determine_poset_generic4():
    arr = make_family("generic", d=4)
    nf = normalize(build_boundary_graph(arr))
    got = classify_boundary(nf)
    assert got.tag == "Poset"
    assert got.poset.pair_axiom_ok
    assert is_arrangement_isomorphic(arr, got.poset.arrangement)


def test_determine_poset_unique_bipartition_one_triple():
    arr = one_triple_arrangement()
    nf = normalize(build_boundary_graph(arr))
    poset = determine_poset(nf)
    assert is_arrangement_isomorphic(arr, poset.arrangement)


def test_determine_poset_rejects_wrong_chain_fractions():
    # one-triple d=5 shape whose strings carry [2,2] instead of [3,2]:
    # the regular node graph is not bipartite, and no part assignment
    # satisfies the fraction condition
    arr = one_triple_arrangement()
    good = build_reduced_graph(arr)
    bad_vertices = tuple(
        (i, (-2 if e == -3 else e), g) for i, e, g in good.vertices
    )
    bad = PlumbingGraph(bad_vertices, good.edges)
    with pytest.raises((NoValidBipartition, Unrecognized)):
        classify_boundary(canonical_signs(bad))


def test_determine_poset_invariant_under_resigning_and_relabeling():
    arr = make_family("generic", d=5)
    nf = normalize(build_boundary_graph(arr))
    resigned = canonical_signs(nf)
    shifted = nf.relabeled({v: v + 100 for v in nf.vertex_ids})
    for g in (resigned, shifted):
        got = classify_boundary(g)
        assert got.tag == "Poset"
        assert is_arrangement_isomorphic(arr, got.poset.arrangement)


def test_broken_pappus_round_trips_as_poset():
    arr = broken_pappus_poset()
    report = roundtrip(arr)
    assert report.output_class.tag == "Poset"
    assert report.matches and report.iso


# -- round trips -------------------------------------------------------------------

def test_roundtrip_families():
    cases = [
        make_family("pencil", d=5),
        make_family("pencil", d=2),
        make_family("near_pencil", d=3),
        make_family("near_pencil", d=6),
        make_family("double_pencil", a=5, b=4),
        make_family("generic", d=5),
        validate([], 1),
    ]
    for arr in cases:
        report = roundtrip(arr)
        assert report.matches, (arr, report)


def test_roundtrip_pencil_component_count():
    report = roundtrip(make_family("pencil", d=5))
    assert report.components == 16
    assert "class=Pencil" in report.key_values()
    assert "iso=n/a" in report.key_values()


def test_roundtrip_corpus_d_le_5():
    for d in range(1, 6):
        for arr in enumerate_arrangements(d):
            report = roundtrip(arr)
            assert report.matches, (d, arr)


def test_roundtrip_ceva():
    report = roundtrip(ceva_arrangement())
    assert report.matches and report.iso
