"""Negative (Hirzebruch-Jung) continued fractions and string multiplicities.

A negative continued fraction expands a rational p/q > 1 as

    p/q = [k_1, ..., k_s] = k_1 - 1/(k_2 - 1/(... - 1/k_s))

with every k_l >= 2.  The expansion is unique and is computed by ceiling
division.  Strings of plumbing graphs carry these entries as (negated)
Euler numbers, together with an integer multiplicity on each vertex
satisfying the three-term recursion  k_l*m_l - m_{l-1} - m_{l+1} = 0.

All arithmetic is exact (arbitrary-precision integers and Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError, InconsistentRecursion

__all__ = [
    "NcfExpansion",
    "StringData",
    "expand_ncf",
    "eval_ncf",
    "dual_ncf",
    "dual_by_runs",
    "string_multiplicities",
]


@dataclass(frozen=True)
class NcfExpansion:
    """A finite expansion [k_1, ..., k_s], all entries >= 2, with its value."""

    entries: tuple[int, ...]
    value: Fraction

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class StringData:
    """Euler numbers and multiplicities of one string in a boundary graph.

    ``mults`` holds m_1..m_s; the boundary values m_0 = 1 and
    m_{s+1} = n/gcd(d,n) close the recursion.  ``last_mult`` is m_s, the
    multiplicity adjacent to the point vertex.
    """

    eulers: tuple[int, ...]
    mults: tuple[int, ...]
    m_start: int
    m_end: int
    last_mult: int


def expand_ncf(p: int, q: int) -> NcfExpansion:
    """Expand p/q (0 < q < p after reduction) as a negative continued fraction.

    Unreduced input is reduced internally; q >= p or q <= 0 is rejected.
    """
    if q <= 0 or p <= 0:
        raise DomainError(f"expand_ncf requires 0 < q < p, got ({p}, {q})")
    g = gcd(p, q)
    p, q = p // g, q // g
    if q >= p:
        raise DomainError(f"expand_ncf requires q < p, got ({p}, {q})")
    value = Fraction(p, q)
    entries = []
    while q > 0:
        k = -(-p // q)  # ceil(p/q)
        entries.append(k)
        p, q = q, k * q - p
    return NcfExpansion(tuple(entries), value)


def eval_ncf(entries) -> Fraction:
    """Evaluate k_1 - 1/(k_2 - 1/(...)) exactly.

    Arbitrary integer sequences are accepted (used by normalization checks);
    a zero intermediate raises ZeroDivisionError.
    """
    entries = tuple(entries)
    if not entries:
        raise DomainError("cannot evaluate an empty expansion")
    value = Fraction(entries[-1])
    for k in reversed(entries[:-1]):
        value = k - 1 / value  # raises ZeroDivisionError on degenerate input
    return value


def dual_ncf(entries) -> NcfExpansion:
    """Dual expansion: if entries = expand_ncf(p, q), return expand_ncf(p, p-q)."""
    entries = tuple(entries)
    value = eval_ncf(entries)
    p, q = value.numerator, value.denominator
    if any(k < 2 for k in entries):
        raise DomainError("dual_ncf requires a normalized expansion (entries >= 2)")
    return expand_ncf(p, p - q)


def dual_by_runs(entries) -> tuple[int, ...]:
    """Compute the dual expansion by the run-length transform.

    Decompose the input into maximal runs of 2's alternating with single
    entries >= 3 (empty runs count, including at the ends).  A run of length
    m becomes one entry m+3, reduced by 1 for each end of the sequence the
    run touches; an entry K >= 3 becomes a run of K-3 twos.  Agrees with
    ``dual_ncf`` on every valid expansion.
    """
    entries = tuple(entries)
    if not entries or any(k < 2 for k in entries):
        raise DomainError("run transform requires a nonempty expansion with entries >= 2")
    # alternating decomposition: run_0, K_1, run_1, ..., K_t, run_t
    runs = [0]
    bigs = []
    for k in entries:
        if k == 2:
            runs[-1] += 1
        else:
            bigs.append(k)
            runs.append(0)
    out = []
    last = len(runs) - 1
    for i, m in enumerate(runs):
        ends_touched = (i == 0) + (i == last)
        out.append(m + 3 - ends_touched)
        if i < last:
            out.extend([2] * (bigs[i] - 3))
    return tuple(out)


def string_multiplicities(d: int, n: int) -> StringData:
    """Multiplicities along the string attached to a point of multiplicity n.

    The Euler entries are expand_ncf(d, d-n); with m_0 = 1 and
    m_{s+1} = n/gcd(d,n) the recursion k_l*m_l = m_{l-1} + m_{l+1} has a
    unique solution, solved here as a boundary value problem.
    """
    if not 2 <= n < d:
        raise DomainError(f"string_multiplicities requires 2 <= n < d, got (d={d}, n={n})")
    eulers = expand_ncf(d, d - n).entries
    c = gcd(d, n)
    m_end = n // c
    # m_l = a_l*t + b_l with t = m_1 unknown; a, b are continuant sequences
    a_prev, b_prev = 0, 1  # m_0
    a_cur, b_cur = 1, 0  # m_1
    coeffs = [(a_cur, b_cur)]
    for k in eulers:
        a_prev, b_prev, a_cur, b_cur = a_cur, b_cur, k * a_cur - a_prev, k * b_cur - b_prev
        coeffs.append((a_cur, b_cur))
    # last coefficient pair encodes m_{s+1}
    a_last, b_last = coeffs.pop()
    if a_last == 0 or (m_end - b_last) % a_last != 0:
        raise InconsistentRecursion(f"no integer solution for (d={d}, n={n})")
    t = (m_end - b_last) // a_last
    mults = tuple(a * t + b for a, b in coeffs)
    if t <= 0 or any(m <= 0 for m in mults):
        raise InconsistentRecursion(f"non-positive multiplicity for (d={d}, n={n})")
    return StringData(eulers=eulers, mults=mults, m_start=1, m_end=m_end, last_mult=mults[-1])
