"""Combinatorics of projective line arrangements.

An arrangement of d lines is carried by its rank-2 intersection poset:
the set of intersection points, each recorded as the set of line indices
through it.  Every pair of distinct lines must lie in exactly one point
(the pair axiom).  Derived quantities: point_count_on_line(i) is the
number of points on line i, multiplicity(j) the number of lines through
point j, and gcd_with_d(j) = gcd(d, multiplicity(j)).

Exact projective geometry over the rationals is provided for building
arrangements from explicit line equations; coincidence of multiple points
is decided exactly, never numerically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    DegeneratePoint,
    DomainError,
    DuplicateLine,
    DuplicatePoint,
    FormatError,
    PairAxiomViolation,
    ParamOutOfRange,
)

__all__ = [
    "Arrangement",
    "RationalLine",
    "ExceptionalClass",
    "validate",
    "from_lines",
    "make_family",
    "classify",
    "is_arrangement_isomorphic",
    "enumerate_arrangements",
    "arrangement_to_text",
    "arrangement_from_text",
    "lines_to_text",
    "lines_from_text",
]

SINGLE_LINE = "SingleLine"
PENCIL = "Pencil"
NEAR_PENCIL = "NearPencil"
DOUBLE_PENCIL = "DoublePencil"
NON_EXCEPTIONAL = "NonExceptional"


@dataclass(frozen=True)
class ExceptionalClass:
    """Classification tag with integer parameters.

    tag is one of SingleLine, Pencil, NearPencil, DoublePencil,
    NonExceptional; d carries the line count for Pencil/NearPencil and
    (a, b) the two pencil sizes for DoublePencil.
    """

    tag: str
    d: int | None = None
    a: int | None = None
    b: int | None = None

    def __post_init__(self):
        if self.tag == PENCIL and (self.d is None or self.d < 2):
            raise ParamOutOfRange("pencil requires d >= 2")
        if self.tag == NEAR_PENCIL and (self.d is None or self.d < 3):
            raise ParamOutOfRange("near-pencil requires d >= 3")
        if self.tag == DOUBLE_PENCIL:
            if self.a is None or self.b is None or not (self.a >= self.b >= 3):
                raise ParamOutOfRange("double pencil requires a >= b >= 3")

    def __str__(self):
        if self.tag == DOUBLE_PENCIL:
            return f"DoublePencil({self.a},{self.b})"
        if self.tag in (PENCIL, NEAR_PENCIL):
            return f"{self.tag}({self.d})"
        return self.tag


@dataclass(frozen=True)
class Arrangement:
    """d lines (indexed 1..d) and their intersection points.

    ``points`` is a lexicographically sorted tuple of strictly increasing
    index tuples.  Instances are produced by :func:`validate` and are
    immutable; all derived counts are recomputed on demand (the graphs in
    play are tiny).
    """

    d: int
    points: tuple[tuple[int, ...], ...]

    @property
    def point_count(self) -> int:
        return len(self.points)

    def multiplicity(self, j: int) -> int:
        """Number of lines through point j (0-based index)."""
        return len(self.points[j])

    def gcd_with_d(self, j: int) -> int:
        return gcd(self.d, self.multiplicity(j))

    def points_on_line(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, pt in enumerate(self.points) if i in pt)

    def point_count_on_line(self, i: int) -> int:
        return sum(1 for pt in self.points if i in pt)

    def line_profile(self, i: int) -> tuple[int, ...]:
        """Sorted multiset of multiplicities of the points on line i."""
        return tuple(sorted(len(pt) for pt in self.points if i in pt))

    def incidences(self):
        """All (line, point index) pairs, lines ascending within each point."""
        for j, pt in enumerate(self.points):
            for i in pt:
                yield i, j


def validate(incidence, d: int) -> Arrangement:
    """Check the rank-2 poset axioms and return the canonical Arrangement.

    incidence: iterable of iterables of line indices (one per point).
    """
    if d < 1:
        raise DomainError(f"need d >= 1, got {d}")
    points = []
    for pt in incidence:
        pt = tuple(sorted(set(pt)))
        if len(pt) < 2:
            raise DegeneratePoint(f"point {pt} contains fewer than 2 lines")
        if any(not 1 <= i <= d for i in pt):
            raise DomainError(f"line index out of range 1..{d} in point {pt}")
        points.append(pt)
    points.sort()
    for a, b in zip(points, points[1:]):
        if a == b:
            raise DuplicatePoint(f"point {a} listed twice")
    seen = {}
    for pt in points:
        for pair in itertools.combinations(pt, 2):
            if pair in seen:
                raise PairAxiomViolation(pair, 2)
            seen[pair] = True
    for pair in itertools.combinations(range(1, d + 1), 2):
        if pair not in seen:
            raise PairAxiomViolation(pair, 0)
    return Arrangement(d=d, points=tuple(points))


# -- exact projective lines --------------------------------------------------

def _normalize_triple(coeffs):
    fracs = tuple(Fraction(c) for c in coeffs)
    if all(f == 0 for f in fracs):
        raise DomainError("line coefficients must not all vanish")
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


@dataclass(frozen=True)
class RationalLine:
    """A projective line a*x + b*y + c*z = 0 with exact rational coefficients.

    Stored in a canonical primitive integer form, so two proportional
    coefficient triples compare equal.
    """

    coeffs: tuple[int, int, int]

    @staticmethod
    def of(a, b, c) -> "RationalLine":
        return RationalLine(_normalize_triple((a, b, c)))

    def contains(self, point) -> bool:
        x, y, z = point
        a, b, c = self.coeffs
        return a * x + b * y + c * z == 0


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _canonical_point(p):
    g = 0
    for v in p:
        g = gcd(g, v)
    p = tuple(v // g for v in p)
    lead = next(v for v in p if v != 0)
    return tuple(-v for v in p) if lead < 0 else p


def from_lines(lines) -> Arrangement:
    """Intersect pairwise in exact projective arithmetic and validate.

    Coincident intersection points are merged, so multiple points come out
    with the correct multiplicity.
    """
    lines = [ln if isinstance(ln, RationalLine) else RationalLine.of(*ln) for ln in lines]
    if not lines:
        raise DomainError("need at least one line")
    for a, b in itertools.combinations(range(len(lines)), 2):
        if lines[a] == lines[b]:
            raise DuplicateLine(f"lines {a + 1} and {b + 1} are proportional")
    d = len(lines)
    by_point: dict[tuple[int, int, int], set[int]] = {}
    for a, b in itertools.combinations(range(d), 2):
        p = _canonical_point(_cross(lines[a].coeffs, lines[b].coeffs))
        by_point.setdefault(p, set()).update((a + 1, b + 1))
    return validate(by_point.values(), d)


# -- families ----------------------------------------------------------------

def make_family(kind: str, **params) -> Arrangement:
    """Construct pencil(d), near_pencil(d), double_pencil(a, b) or generic(d)."""
    if kind == "pencil":
        d = params["d"]
        if d < 2:
            raise ParamOutOfRange("pencil requires d >= 2")
        return validate([range(1, d + 1)], d)
    if kind == "near_pencil":
        d = params["d"]
        if d < 3:
            raise ParamOutOfRange("near-pencil requires d >= 3")
        points = [range(2, d + 1)] + [(1, i) for i in range(2, d + 1)]
        return validate(points, d)
    if kind == "double_pencil":
        a, b = params["a"], params["b"]
        if not a >= b >= 3:
            raise ParamOutOfRange("double pencil requires a >= b >= 3")
        d = a + b - 1
        points = [tuple(range(1, a + 1)), (1,) + tuple(range(a + 1, d + 1))]
        points += [(i, j) for i in range(2, a + 1) for j in range(a + 1, d + 1)]
        return validate(points, d)
    if kind == "generic":
        d = params["d"]
        if d < 1:
            raise ParamOutOfRange("generic requires d >= 1")
        return validate(itertools.combinations(range(1, d + 1), 2), d)
    raise ParamOutOfRange(f"unknown family kind {kind!r}")


def classify(arr: Arrangement) -> ExceptionalClass:
    """Classify into the four exceptional families or NonExceptional."""
    if arr.d == 1:
        return ExceptionalClass(SINGLE_LINE)
    if arr.point_count == 1:
        return ExceptionalClass(PENCIL, d=arr.d)
    two_point_lines = [i for i in range(1, arr.d + 1) if arr.point_count_on_line(i) == 2]
    if not two_point_lines:
        return ExceptionalClass(NON_EXCEPTIONAL)
    ln = two_point_lines[0]
    p, q = arr.points_on_line(ln)
    a, b = sorted((arr.multiplicity(p), arr.multiplicity(q)), reverse=True)
    if b == 2:
        return ExceptionalClass(NEAR_PENCIL, d=arr.d)
    return ExceptionalClass(DOUBLE_PENCIL, a=a, b=b)


# -- isomorphism ---------------------------------------------------------------

def is_arrangement_isomorphic(a: Arrangement, b: Arrangement, witness: bool = False):
    """Decide isomorphism of incidence structures by backtracking.

    Lines are matched in an order that visits the rarest line profiles
    first; partial maps are pruned against point-set compatibility.
    Returns a bool, or (bool, mapping) when witness is requested.
    """
    result = _find_line_bijection(a, b)
    if witness:
        return result is not None, result
    return result is not None


def _find_line_bijection(a: Arrangement, b: Arrangement):
    if a.d != b.d or a.point_count != b.point_count:
        return None
    if sorted(len(p) for p in a.points) != sorted(len(p) for p in b.points):
        return None
    prof_a = {i: a.line_profile(i) for i in range(1, a.d + 1)}
    prof_b = {i: b.line_profile(i) for i in range(1, b.d + 1)}
    if sorted(prof_a.values()) != sorted(prof_b.values()):
        return None
    b_points = set(b.points)
    rarity = {}
    for p in prof_a.values():
        rarity[p] = rarity.get(p, 0) + 1
    order = sorted(range(1, a.d + 1), key=lambda i: (rarity[prof_a[i]], i))
    mapping: dict[int, int] = {}
    used = set()

    def consistent():
        # any fully mapped point of a must be a point of b
        for pt in a.points:
            if all(i in mapping for i in pt):
                if tuple(sorted(mapping[i] for i in pt)) not in b_points:
                    return False
        return True

    def extend(k):
        if k == len(order):
            return True
        i = order[k]
        for j in range(1, b.d + 1):
            if j in used or prof_b[j] != prof_a[i]:
                continue
            mapping[i] = j
            used.add(j)
            if consistent() and extend(k + 1):
                return True
            del mapping[i]
            used.discard(j)
        return False

    if extend(0):
        return dict(mapping)
    return None


# -- exhaustive enumeration ------------------------------------------------------

def enumerate_arrangements(d: int) -> list[Arrangement]:
    """All arrangements of d lines up to isomorphism.

    Backtracks over families of pairwise-compatible multiple points
    (subsets of size >= 3 meeting in at most one line); the remaining line
    pairs become double points.  Isomorphic duplicates are filtered.
    """
    if d < 1:
        raise DomainError("need d >= 1")
    if d == 1:
        return [Arrangement(d=1, points=())]
    candidates = []
    for size in range(3, d + 1):
        candidates.extend(itertools.combinations(range(1, d + 1), size))
    candidates.sort()

    found: list[Arrangement] = []
    buckets: dict[tuple, list[Arrangement]] = {}

    def signature(arr):
        return (
            tuple(sorted(len(p) for p in arr.points)),
            tuple(sorted(arr.line_profile(i) for i in range(1, d + 1))),
        )

    def emit(multiples):
        covered = set()
        for pt in multiples:
            covered.update(itertools.combinations(pt, 2))
        doubles = [
            pair
            for pair in itertools.combinations(range(1, d + 1), 2)
            if pair not in covered
        ]
        arr = validate(list(multiples) + doubles, d)
        key = signature(arr)
        for other in buckets.get(key, ()):
            if is_arrangement_isomorphic(arr, other):
                return
        buckets.setdefault(key, []).append(arr)
        found.append(arr)

    def compatible(pt, chosen):
        return all(len(set(pt) & set(prev)) <= 1 for prev in chosen)

    def search(start, chosen):
        emit(chosen)
        for idx in range(start, len(candidates)):
            pt = candidates[idx]
            if compatible(pt, chosen):
                chosen.append(pt)
                search(idx + 1, chosen)
                chosen.pop()

    search(0, [])
    return found


# -- text formats ------------------------------------------------------------------

def arrangement_to_text(arr: Arrangement) -> str:
    lines = [f"arrangement d={arr.d}"]
    for pt in arr.points:
        lines.append("point: " + " ".join(str(i) for i in pt))
    return "\n".join(lines) + "\n"


def _content_lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def arrangement_from_text(text: str) -> Arrangement:
    it = _content_lines(text)
    try:
        no, header = next(it)
    except StopIteration:
        raise FormatError("empty arrangement file") from None
    if not header.startswith("arrangement d="):
        raise FormatError("expected 'arrangement d=<int>' header", no)
    try:
        d = int(header.removeprefix("arrangement d="))
    except ValueError:
        raise FormatError("bad line count in header", no) from None
    points = []
    for no, line in it:
        if not line.startswith("point:"):
            raise FormatError("expected 'point: <i1> <i2> ...'", no)
        try:
            idx = [int(tok) for tok in line.removeprefix("point:").split()]
        except ValueError:
            raise FormatError("point indices must be integers", no) from None
        if idx != sorted(idx) or len(set(idx)) != len(idx):
            raise FormatError("point indices must be strictly increasing", no)
        points.append(idx)
    return validate(points, d)


def lines_to_text(lines) -> str:
    out = [f"lines d={len(lines)}"]
    for ln in lines:
        coeffs = ln.coeffs if isinstance(ln, RationalLine) else _normalize_triple(ln)
        out.append("line: " + " ".join(f"{c}/1" for c in coeffs))
    return "\n".join(out) + "\n"


def lines_from_text(text: str) -> list[RationalLine]:
    it = _content_lines(text)
    try:
        no, header = next(it)
    except StopIteration:
        raise FormatError("empty lines file") from None
    if not header.startswith("lines d="):
        raise FormatError("expected 'lines d=<int>' header", no)
    try:
        d = int(header.removeprefix("lines d="))
    except ValueError:
        raise FormatError("bad line count in header", no) from None
    lines = []
    for no, line in it:
        if not line.startswith("line:"):
            raise FormatError("expected 'line: <p>/<q> <p>/<q> <p>/<q>'", no)
        toks = line.removeprefix("line:").split()
        if len(toks) != 3:
            raise FormatError("a line needs exactly three coefficients", no)
        try:
            coeffs = [Fraction(t) for t in toks]
        except (ValueError, ZeroDivisionError):
            raise FormatError("coefficients must be rationals p/q with q > 0", no) from None
        for t in toks:
            if "/" in t and int(t.split("/", 1)[1]) <= 0:
                raise FormatError("denominators must be positive", no)
        lines.append(RationalLine.of(*coeffs))
    if len(lines) != d:
        raise FormatError(f"header declares d={d} but found {len(lines)} lines")
    return lines
