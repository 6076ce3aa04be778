import itertools
from fractions import Fraction

import pytest

from plumbline.arrangement import (
    Arrangement,
    ExceptionalClass,
    RationalLine,
    arrangement_from_text,
    arrangement_to_text,
    classify,
    enumerate_arrangements,
    from_lines,
    is_arrangement_isomorphic,
    lines_from_text,
    lines_to_text,
    make_family,
    validate,
)
from plumbline.errors import (
    DegeneratePoint,
    DuplicateLine,
    DuplicatePoint,
    FormatError,
    PairAxiomViolation,
    ParamOutOfRange,
)


def test_validate_triangle():
    arr = validate([{1, 2}, {1, 3}, {2, 3}], 3)
    assert all(arr.point_count_on_line(i) == 2 for i in (1, 2, 3))
    assert all(arr.multiplicity(j) == 2 for j in range(3))


def test_validate_pencil():
    arr = validate([{1, 2, 3}], 3)
    assert arr.multiplicity(0) == 3
    assert arr.gcd_with_d(0) == 3


def test_validate_errors():
    with pytest.raises(PairAxiomViolation):
        validate([{1, 2}, {1, 3}], 4)
    with pytest.raises(PairAxiomViolation):
        validate([{1, 2}, {1, 2, 3}], 3)
    with pytest.raises(DuplicatePoint):
        validate([{1, 2}, {2, 1}, {1, 3}, {2, 3}], 3)
    with pytest.raises(DegeneratePoint):
        validate([{1}], 2)


def test_from_lines_triangle():
    arr = from_lines([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert arr.d == 3 and arr.point_count == 3
    assert all(arr.multiplicity(j) == 2 for j in range(3))


def test_from_lines_near_pencil():
    # x, y, x-y concur at [0:0:1]; z is generic to them
    arr = from_lines([(1, 0, 0), (0, 1, 0), (1, -1, 0), (0, 0, 1)])
    assert sorted(arr.multiplicity(j) for j in range(arr.point_count)) == [2, 2, 2, 3]
    assert classify(arr) == ExceptionalClass("NearPencil", d=4)


def test_from_lines_ceva_type():
    lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1)]
    arr = from_lines(lines)
    mults = sorted(arr.multiplicity(j) for j in range(arr.point_count))
    assert mults == [2, 2, 2, 3, 3, 3, 3]
    assert classify(arr).tag == "NonExceptional"


def test_from_lines_duplicate():
    with pytest.raises(DuplicateLine):
        from_lines([(1, 0, 0), (2, 0, 0)])


def test_from_lines_rescale_and_permute_invariance():
    base = [(1, 0, 0), (0, 1, 0), (1, -1, 0), (0, 0, 1)]
    arr = from_lines(base)
    scaled = from_lines([(Fraction(3, 7) * a, Fraction(3, 7) * b, Fraction(3, 7) * c) for a, b, c in base])
    assert arr == scaled  # same canonical coefficients, same labels
    for perm in itertools.permutations(base):
        assert is_arrangement_isomorphic(arr, from_lines(perm))


def test_make_family_examples():
    dp = make_family("double_pencil", a=3, b=3)
    assert dp.d == 5 and dp.point_count == 6
    assert sorted(dp.multiplicity(j) for j in range(6)) == [2, 2, 2, 2, 3, 3]

    p4 = make_family("pencil", d=4)
    assert p4.point_count == 1 and p4.multiplicity(0) == 4

    g4 = make_family("generic", d=4)
    assert g4.point_count == 6
    assert all(g4.multiplicity(j) == 2 for j in range(6))
    assert all(g4.point_count_on_line(i) == 3 for i in range(1, 5))


def test_make_family_bounds():
    with pytest.raises(ParamOutOfRange):
        make_family("pencil", d=1)
    with pytest.raises(ParamOutOfRange):
        make_family("double_pencil", a=3, b=2)
    with pytest.raises(ParamOutOfRange):
        make_family("nonsense", d=3)


def test_classify_round_trips_families():
    for d in range(2, 9):
        assert classify(make_family("pencil", d=d)) == ExceptionalClass("Pencil", d=d)
    for d in range(3, 9):
        assert classify(make_family("near_pencil", d=d)) == ExceptionalClass("NearPencil", d=d)
    for a in range(3, 7):
        for b in range(3, a + 1):
            got = classify(make_family("double_pencil", a=a, b=b))
            assert got == ExceptionalClass("DoublePencil", a=a, b=b)
    assert classify(make_family("generic", d=4)).tag == "NonExceptional"
    # small generic arrangements collapse into exceptional classes
    assert classify(make_family("generic", d=3)) == ExceptionalClass("NearPencil", d=3)
    assert classify(make_family("generic", d=2)) == ExceptionalClass("Pencil", d=2)
    assert classify(make_family("generic", d=1)).tag == "SingleLine"


def test_pair_count_identity():
    import math

    for arr in enumerate_arrangements(6):
        pairs = sum(math.comb(arr.multiplicity(j), 2) for j in range(arr.point_count))
        assert pairs == math.comb(arr.d, 2)


def test_non_exceptional_iff_min_line_degree_three():
    for d in range(2, 7):
        for arr in enumerate_arrangements(d):
            m = min(arr.point_count_on_line(i) for i in range(1, d + 1))
            assert (classify(arr).tag == "NonExceptional") == (m >= 3)


def test_enumeration_counts():
    # arrangements of d lines up to isomorphism = linear spaces on d points
    assert [len(enumerate_arrangements(d)) for d in range(1, 7)] == [1, 1, 2, 3, 5, 10]


def test_enumeration_contains_families():
    found = enumerate_arrangements(5)
    for target in (
        make_family("pencil", d=5),
        make_family("near_pencil", d=5),
        make_family("double_pencil", a=3, b=3),
        make_family("generic", d=5),
    ):
        assert any(is_arrangement_isomorphic(target, arr) for arr in found)


def test_isomorphism_negative():
    a = make_family("generic", d=5)
    b = make_family("double_pencil", a=3, b=3)
    assert not is_arrangement_isomorphic(a, b)


def test_text_round_trip():
    arr = make_family("double_pencil", a=4, b=3)
    text = arrangement_to_text(arr)
    assert arrangement_from_text(text) == arr
    assert arrangement_to_text(arrangement_from_text(text)) == text


def test_text_errors_cite_line_numbers():
    with pytest.raises(FormatError, match="line 1"):
        arrangement_from_text("bogus\n")
    with pytest.raises(FormatError, match="line 2"):
        arrangement_from_text("arrangement d=3\npoint: 2 1\n")


def test_lines_file_round_trip():
    lines = [RationalLine.of(1, 0, 0), RationalLine.of(Fraction(1, 2), 1, -3)]
    text = lines_to_text(lines)
    assert lines_from_text(text) == lines
    arr = from_lines(lines_from_text("lines d=3\nline: 1/1 0/1 0/1\nline: 0 1 0\nline: 0 0 1\n"))
    assert arr.point_count == 3
