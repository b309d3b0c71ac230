"""Thresholding-greedy set machinery on exact coefficient vectors."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .space import Basis, CoeffVector, DimensionError, indicator, sign_vector

__all__ = [
    "as_level",
    "support_set",
    "GreedySetFamily",
    "iter_greedy_sets",
    "greedy_sets",
    "is_greedy_set",
    "truncation_value",
    "rho_numerator",
]


def as_level(a, m: int | None = None) -> Fraction:
    """Validate a threshold level ``0 < a <= 1``, optionally on the grid ``1/m``."""
    a = Fraction(a)
    if not 0 < a <= 1:
        raise ValueError(f"threshold level must lie in (0, 1], got {a}")
    if m is not None and (a * m).denominator != 1:
        raise ValueError(f"level {a} is not on the grid with denominator {m}")
    return a


def support_set(c: CoeffVector, a) -> frozenset:
    """``{n : |c_n| >= a}``, compared exactly."""
    a = Fraction(a)
    m = c.denominator
    # |k|/m >= p/q  <=>  |k| q >= p m
    return frozenset(
        n for n, k in enumerate(c.numerators) if abs(k) * a.denominator >= a.numerator * m
    )


def is_greedy_set(c: CoeffVector, A) -> bool:
    A = set(A)
    inside = [abs(k) for n, k in enumerate(c.numerators) if n in A]
    outside = [abs(k) for n, k in enumerate(c.numerators) if n not in A]
    return not inside or not outside or min(inside) >= max(outside)


@dataclass(frozen=True)
class GreedySetFamily:
    base: CoeffVector
    sets: tuple

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    def __contains__(self, A):
        return frozenset(A) in self.sets


def iter_greedy_sets(c: CoeffVector) -> Iterator[frozenset]:
    """Yield every greedy set of ``c``, the empty set first.

    A nonempty greedy set is determined by its smallest modulus ``v``: it
    contains everything strictly above ``v`` and a nonempty part of the
    coordinates tied at ``v``.  Sets come out by decreasing ``v``, then by
    size, then lexicographically.
    """
    yield frozenset()
    mods = [abs(k) for k in c.numerators]
    for v in sorted(set(mods), reverse=True):
        above = [n for n, x in enumerate(mods) if x > v]
        tied = [n for n, x in enumerate(mods) if x == v]
        for r in range(1, len(tied) + 1):
            for T in combinations(tied, r):
                yield frozenset(above).union(T)


def greedy_sets(c: CoeffVector) -> GreedySetFamily:
    return GreedySetFamily(base=c, sets=tuple(iter_greedy_sets(c)))


def truncation_value(basis: Basis, c: CoeffVector, A) -> float:
    """``min_{n in A} |c_n| * ||1_{eps(c), A}||``."""
    A = sorted(set(A))
    if not A:
        raise ValueError("truncation value needs a nonempty index set")
    if len(c) != basis.dim:
        raise DimensionError(f"expected {basis.dim} coefficients, got {len(c)}")
    eps = sign_vector(c)
    low = min(abs(c.fractions[n]) for n in A)
    return float(low) * float(basis.norm(indicator(basis, [eps[n] for n in A], A)))


def rho_numerator(basis: Basis, c: CoeffVector, a) -> float | None:
    """``a * ||1_{eps(c), A(a, c)}||``, or ``None`` when ``A(a, c)`` is empty."""
    a = as_level(a)
    A = sorted(support_set(c, a))
    if not A:
        return None
    eps = sign_vector(c)
    return float(a) * float(basis.norm(indicator(basis, [eps[n] for n in A], A)))
