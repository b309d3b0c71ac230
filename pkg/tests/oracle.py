"""Brute-force reference values: plain loops over the grid, no vectorisation."""
from fractions import Fraction
from itertools import combinations, product

import numpy as np


def _norm(basis, coeffs):
    return float(basis.space.norm(basis.B @ np.array([float(x) for x in coeffs])))


def _subsets(idx):
    for r in range(1, len(idx) + 1):
        yield from combinations(idx, r)


def grid_vectors(N, m):
    vals = [Fraction(k, m) for k in range(-m, m + 1)]
    return product(vals, repeat=N)


def _sgn(x):
    return -1 if x < 0 else 1


def phi(basis, a, m):
    best = -np.inf
    for f in grid_vectors(basis.dim, m):
        nf = _norm(basis, f)
        if nf == 0:
            continue
        big = [n for n, x in enumerate(f) if abs(x) >= a]
        for A in _subsets(big):
            best = max(best, _norm(basis, [x if n in A else 0 for n, x in enumerate(f)]) / nf)
    return best


def level_family(basis, a, m):
    """(theta, lambda, rho) at level a."""
    th = lam = rho = -np.inf
    for f in grid_vectors(basis.dim, m):
        nf = _norm(basis, f)
        A = [n for n, x in enumerate(f) if abs(x) >= a]
        if nf == 0 or not A:
            continue
        proj = _norm(basis, [x if n in A else 0 for n, x in enumerate(f)])
        ind = _norm(basis, [_sgn(x) if n in A else 0 for n, x in enumerate(f)])
        low = min(abs(f[n]) for n in A)
        th = max(th, proj / nf)
        lam = max(lam, float(low) * ind / nf)
        rho = max(rho, float(a) * ind / nf)
    return th, lam, rho


def gamma(basis, m, signs=(-1, 1), scales=(1,)):
    N = basis.dim
    best = -np.inf
    for A in _subsets(range(N)):
        rest = [n for n in range(N) if n not in A]
        for eps in product(signs, repeat=len(A)):
            one = [0] * N
            for n, e in zip(A, eps):
                one[n] = e
            ind = _norm(basis, one)
            for g in product([Fraction(k, m) for k in range(-m, m + 1)], repeat=len(rest)):
                for s in scales:
                    v = list(one)
                    for n, x in zip(rest, g):
                        v[n] = Fraction(s) * x
                    best = max(best, ind / _norm(basis, v))
    return best


def succ(basis):
    N = basis.dim
    best = -np.inf
    for A in _subsets(range(N)):
        for eps in product((-1, 1), repeat=len(A)):
            full = [0] * N
            for n, e in zip(A, eps):
                full[n] = e
            den = _norm(basis, full)
            for r in range(0, len(A) + 1):
                for B in combinations(A, r):
                    part = [full[n] if n in B else 0 for n in range(N)]
                    best = max(best, _norm(basis, part) / den)
    return best
