from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab.greedy import (
    as_level,
    greedy_sets,
    is_greedy_set,
    rho_numerator,
    support_set,
    truncation_value,
)
from greedylab.space import CoeffVector, Lp, QuasiNormedSpace, make_basis

F = Fraction


def cv(*xs):
    return CoeffVector.from_fractions(xs)


def l1(N):
    return make_basis(QuasiNormedSpace(N, 1, Lp(1)), np.eye(N))


def test_support_set_examples():
    assert support_set(cv("9/10", "-1/2", "1/5"), F(1, 2)) == {0, 1}
    assert support_set(cv("3/10", "3/10", "3/10"), F(2, 5)) == frozenset()
    assert support_set(cv(1, 1, 0), 1) == {0, 1}


def test_greedy_sets_examples():
    assert set(greedy_sets(cv(3, 2, 1))) == {frozenset(), frozenset({0}), frozenset({0, 1}), frozenset({0, 1, 2})}
    assert set(greedy_sets(cv(1, 1, 0))) == {
        frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1}), frozenset({0, 1, 2})
    }
    assert len(greedy_sets(cv(0, 0, 0, 0))) == 16


def test_truncation_value_examples(basis_of):
    assert truncation_value(l1(3), cv(1, 1, 1), {0, 1, 2}) == 3
    assert truncation_value(l1(3), cv(F(1, 2), 1, 0), {0, 1}) == 1
    assert truncation_value(basis_of("summing-3"), cv(1, 0, 1), {0, 2}) == 2
    with pytest.raises(ValueError):
        truncation_value(l1(3), cv(1, 1, 1), set())


def test_rho_numerator_examples():
    assert rho_numerator(l1(2), cv(1, 1), 1) == 2
    assert rho_numerator(l1(2), cv(1, 1), F(1, 2)) == 1
    assert rho_numerator(l1(2), cv(F(1, 4), 0), F(1, 2)) is None


def test_level_validation():
    with pytest.raises(ValueError):
        as_level(0)
    with pytest.raises(ValueError):
        as_level(F(3, 2))
    with pytest.raises(ValueError):
        as_level(F(1, 3), 4)
    assert as_level(F(1, 2), 4) == F(1, 2)


coeff_vectors = st.lists(st.integers(-4, 4), min_size=1, max_size=5).map(lambda ks: CoeffVector(ks, 4))
levels = st.integers(1, 4).map(lambda j: F(j, 4))


@settings(max_examples=200, deadline=None)
@given(coeff_vectors, levels, levels)
def test_support_set_properties(c, a, b):
    A = support_set(c, a)
    assert A in greedy_sets(c)
    lo, hi = min(a, b), max(a, b)
    assert support_set(c, hi) <= support_set(c, lo)
    if A:
        low = min(abs(c.fractions[n]) for n in A)
        assert support_set(c, low) == A


def _brute_greedy(c):
    N = len(c)
    out = set()
    for r in range(N + 1):
        for A in combinations(range(N), r):
            if is_greedy_set(c, A):
                out.add(frozenset(A))
    return out


@settings(max_examples=200, deadline=None)
@given(coeff_vectors)
def test_greedy_sets_match_definition(c):
    fam = greedy_sets(c)
    assert set(fam) == _brute_greedy(c)
    assert len(set(fam)) == len(fam)


@settings(max_examples=100, deadline=None)
@given(coeff_vectors, st.randoms(use_true_random=False))
def test_greedy_sets_permutation_equivariant(c, rnd):
    perm = list(range(len(c)))
    rnd.shuffle(perm)
    moved = CoeffVector([c.numerators[perm.index(n)] for n in range(len(c))], c.denominator)
    mapped = {frozenset(perm[n] for n in A) for A in greedy_sets(c)}
    assert mapped == set(greedy_sets(moved))
