"""Grid-restricted lower bounds for threshold functions and greediness constants.

Every estimate is a maximum of a norm ratio over a finite search space built
from the coefficient grid ``{k/m : -m <= k <= m}``.  Each point of a search
space is a vector of per-coordinate symbols; the meaning of a symbol depends
on the quantity:

* ``phi``: a grid numerator, optionally flagged as a member of the
  projection set ``A``;
* ``theta``, ``lambda``, ``rho``: a grid numerator (``A = A(a, f)``);
* ``gamma``, ``one_sign``, ``qglc_v``: a grid numerator of the perturbation
  ``f`` (off ``A``) or a sign on ``A``;
* ``succ``: outside ``A``, in ``A \\ B`` with a sign, or in ``B`` with a sign.

Exhaustive mode walks the symbol space in mixed-radix order (first
coordinate most significant) and keeps the first maximiser, so ties resolve
to the lexicographically smallest symbol vector.  Sampled mode draws random
symbol vectors, then refines the best ones by coordinate ascent.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .greedy import as_level
from .space import Basis, CoeffVector, indicator, project, sign_vector, synth

__all__ = [
    "QUANTITIES",
    "LEVEL_QUANTITIES",
    "DEFAULT_BUDGET",
    "DEFAULT_SCALES",
    "GridSpec",
    "SearchMode",
    "Witness",
    "Estimate",
    "estimate",
    "estimate_phi",
    "estimate_theta",
    "estimate_lambda",
    "estimate_rho",
    "estimate_gamma",
    "estimate_Lambda",
    "estimate_succ",
    "estimate_qglc_v",
    "estimate_one_sign_K",
    "level_estimates",
    "reevaluate",
    "clear_cache",
]

LEVEL_QUANTITIES = ("phi", "theta", "lambda", "rho")
QUANTITIES = LEVEL_QUANTITIES + ("gamma", "Lambda", "succ", "qglc_v", "one_sign")

DEFAULT_BUDGET = 10**7
SAMPLE_CAP = 10**6
ASCENT_SWEEPS = 50
ASCENT_STARTS = 8
CHUNK = 1 << 14
DEFAULT_SCALES = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))


@dataclass(frozen=True)
class GridSpec:
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"grid denominator must be a positive integer, got {self.m}")

    @property
    def levels(self) -> tuple:
        return tuple(Fraction(j, self.m) for j in range(1, self.m + 1))

    def size(self, N: int) -> int:
        return (2 * self.m + 1) ** N

    def level_index(self, a) -> int:
        """``j`` such that ``a = j/m``; off-grid levels are an error."""
        return int(as_level(a, self.m) * self.m)


def _grid(grid) -> GridSpec:
    return grid if isinstance(grid, GridSpec) else GridSpec(int(grid))


@dataclass(frozen=True)
class SearchMode:
    kind: str  # "exhaustive" or "sampled"
    m: int | None
    budget: int | None = None
    seed: int | None = None

    def describe(self) -> dict:
        if self.kind == "exhaustive":
            return {"kind": "exhaustive", "m": self.m}
        return {"kind": "sampled", "m": self.m, "budget": self.budget, "seed": self.seed}

    def __str__(self):
        if self.kind == "exhaustive":
            return f"Exhaustive({self.m})"
        return f"Sampled({self.m},{self.budget},{self.seed})"


@dataclass(frozen=True)
class Witness:
    """``f`` (grid coefficients), the set ``A`` and the signs on ``A``.

    For ``gamma``-type quantities ``f`` is the perturbation supported off
    ``A`` and ``scale`` multiplies it; for ``succ`` there is no ``f`` and
    ``B`` is the suppressed subset of ``A``.
    """

    f: CoeffVector | None
    A: tuple
    signs: tuple
    scale: Fraction | None = None
    B: tuple | None = None

    def describe(self) -> dict:
        out = {
            "f": None if self.f is None else [str(x) for x in self.f.fractions],
            "A": list(self.A),
            "signs": list(self.signs),
        }
        if self.scale is not None:
            out["scale"] = str(self.scale)
        if self.B is not None:
            out["B"] = list(self.B)
        return out


@dataclass(frozen=True)
class Estimate:
    quantity: str
    level: Fraction | None
    value: float
    witness: Witness
    mode: SearchMode

    @property
    def m(self):
        return self.mode.m


# --------------------------------------------------------------------------
# search problems
#
# A problem describes, for every coordinate n and symbol s, the contribution
# of that coordinate to a handful of features: ambient vectors combined by
# summation, and scalars combined by min or max.  The driver splits the
# coordinates into a head and a tail half, tabulates each half once, and
# assembles any state from one head row and one tail row.  The head and tail
# partials are accumulated coordinate by coordinate, so a state's feature
# values never depend on how the search was chunked.

_NONE = np.inf  # neutral element of a min-combined feature


class _Problem:
    name = ""
    r = 0
    N = 0
    slots: list = []

    def features(self) -> dict:
        """``{name: (contrib[N, r, d], op)}`` with ``op`` in {"sum", "min", "max"}."""
        raise NotImplementedError

    def score(self, feat: dict) -> np.ndarray:
        raise NotImplementedError

    def seeds(self) -> np.ndarray:
        return np.full((1, self.N), self.r - 1)

    def witness(self, row, slot) -> Witness:
        raise NotImplementedError

    def order_key(self, rows: np.ndarray, slot: int) -> np.ndarray:
        """Integer columns ordering witnesses lexicographically by ``(f, A, eps)``."""
        raise NotImplementedError


def _set_key(inA: np.ndarray) -> np.ndarray:
    """Sorted indices of each row's set, padded with -1 so a prefix sorts first."""
    N = inA.shape[1]
    idx = np.sort(np.where(inA, np.arange(N), N), axis=1)
    return np.where(idx == N, -1, idx)


def _signs_key(inA: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Signs on each row's set in index order, padded with 0."""
    N = inA.shape[1]
    order = np.argsort(np.where(inA, np.arange(N), N), axis=1, kind="stable")
    packed = np.take_along_axis(np.where(inA, signs, 0), order, axis=1)
    return packed


def _vec_contrib(B: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``contrib[n, s] = weights[n, s] * x_n``, shape (N, r, N)."""
    return weights[:, :, None] * B.T[:, None, :]


def _scalar_contrib(values: np.ndarray, N: int) -> np.ndarray:
    return np.broadcast_to(np.asarray(values, dtype=float)[None, :, None], (N, len(values), 1))


class _PhiProblem(_Problem):
    """Pairs (f, A) with ``A`` a nonempty subset of the support of ``f``."""

    name = "phi"

    def __init__(self, basis: Basis, m: int):
        self.basis, self.m, self.N = basis, m, basis.dim
        ks = list(range(-m, m + 1)) + [k for k in range(-m, m + 1) if k]
        self.k_of = np.array(ks, dtype=np.int64)
        self.s_of = np.array([False] * (2 * m + 1) + [True] * (2 * m))
        self.r = len(ks)
        self.slots = [("phi", Fraction(j, m)) for j in range(1, m + 1)]

    def features(self):
        N, B = self.N, self.basis.B
        c = np.tile(self.k_of / self.m, (N, 1))
        return {
            "f": (_vec_contrib(B, c), "sum"),
            "proj": (_vec_contrib(B, c * self.s_of), "sum"),
            "low": (_scalar_contrib(np.where(self.s_of, np.abs(self.k_of), _NONE), N), "min"),
        }

    def score(self, feat):
        nf = self.basis.norm(feat["f"])
        num = self.basis.norm(feat["proj"])
        low = feat["low"][:, 0]
        ok = (low < _NONE) & (nf > 0)
        ratio = num / np.where(ok, nf, 1.0)
        out = np.full((len(nf), self.m), -np.inf)
        for j in range(1, self.m + 1):
            col = ok & (low >= j)
            out[col, j - 1] = ratio[col]
        return out

    def witness(self, row, slot):
        K = self.k_of[row]
        A = tuple(int(n) for n in np.nonzero(self.s_of[row])[0])
        f = CoeffVector(tuple(int(k) for k in K), self.m)
        eps = sign_vector(f)
        return Witness(f=f, A=A, signs=tuple(eps[n] for n in A))

    def order_key(self, rows, slot):
        # the signs on A follow from f
        return np.hstack([self.k_of[rows], _set_key(self.s_of[rows])])


class _LevelProblem(_Problem):
    """Grid vectors f with ``A = A(a, f)``: theta, lambda and rho at every level."""

    name = "level"

    def __init__(self, basis: Basis, m: int):
        self.basis, self.m, self.N = basis, m, basis.dim
        self.r = 2 * m + 1
        self.slots = [(q, Fraction(j, m)) for q in ("theta", "lambda", "rho") for j in range(1, m + 1)]

    def features(self):
        N, B, m = self.N, self.basis.B, self.m
        k = np.arange(-m, m + 1)
        c = np.tile(k / m, (N, 1))
        eps = np.tile(np.where(k < 0, -1.0, 1.0), (N, 1))
        out = {"f": (_vec_contrib(B, c), "sum")}
        for j in range(1, m + 1):
            keep = np.abs(k) >= j
            out[f"proj{j}"] = (_vec_contrib(B, c * keep), "sum")
            out[f"ind{j}"] = (_vec_contrib(B, eps * keep), "sum")
            out[f"low{j}"] = (_scalar_contrib(np.where(keep, np.abs(k), _NONE), N), "min")
        return out

    def score(self, feat):
        m = self.m
        nf = self.basis.norm(feat["f"])
        out = np.full((len(nf), 3 * m), -np.inf)
        for j in range(1, m + 1):
            low = feat[f"low{j}"][:, 0]
            ok = (low < _NONE) & (nf > 0)
            if not ok.any():
                continue
            safe = np.where(ok, nf, 1.0)
            ind = self.basis.norm(feat[f"ind{j}"])
            out[ok, j - 1] = (self.basis.norm(feat[f"proj{j}"]) / safe)[ok]
            out[ok, m + j - 1] = ((np.where(ok, low, 0) / m) * ind / safe)[ok]
            out[ok, 2 * m + j - 1] = ((j / m) * ind / safe)[ok]
        return out

    def witness(self, row, slot):
        _, a = self.slots[slot]
        j = int(a * self.m)
        K = row.astype(np.int64) - self.m
        f = CoeffVector(tuple(int(k) for k in K), self.m)
        A = tuple(int(n) for n in np.nonzero(np.abs(K) >= j)[0])
        eps = sign_vector(f)
        return Witness(f=f, A=A, signs=tuple(eps[n] for n in A))

    def order_key(self, rows, slot):
        # A and its signs follow from f and the level
        return np.asarray(rows, dtype=np.int64) - self.m


class _IndicatorPlusProblem(_Problem):
    """``||1_{eps,A}|| / ||1_{eps,A} + s f||`` with ``f`` on the grid, off ``A``."""

    def __init__(self, basis: Basis, m: int, signs=(-1, 1), scales=(Fraction(1),), label="gamma"):
        self.basis, self.m, self.N = basis, m, basis.dim
        self.signs = tuple(signs)
        self.scales = tuple(Fraction(s) for s in scales)
        self.r = 2 * m + 1 + len(self.signs)
        self.slots = [(label, s) for s in self.scales]
        self.name = f"{label}:{self.signs}:{self.scales}"

    def features(self):
        N, B, m = self.N, self.basis.B, self.m
        off = [k / m for k in range(-m, m + 1)]
        eps = [0.0] * len(off) + [float(e) for e in self.signs]
        pert = off + [0.0] * len(self.signs)
        inA = [0.0] * len(off) + [1.0] * len(self.signs)
        return {
            "one": (_vec_contrib(B, np.tile(eps, (N, 1))), "sum"),
            "pert": (_vec_contrib(B, np.tile(pert, (N, 1))), "sum"),
            "inA": (_scalar_contrib(inA, N), "max"),
        }

    def score(self, feat):
        one, pert = feat["one"], feat["pert"]
        ind = self.basis.norm(one)
        ok = feat["inA"][:, 0] > 0
        out = np.full((len(ind), len(self.scales)), -np.inf)
        for i, s in enumerate(self.scales):
            den = self.basis.norm(one + float(s) * pert)
            out[ok, i] = ind[ok] / den[ok]
        return out

    def witness(self, row, slot):
        m = self.m
        inA = row > 2 * m
        K = np.where(inA, 0, row.astype(np.int64) - m)
        A = tuple(int(n) for n in np.nonzero(inA)[0])
        signs = tuple(self.signs[int(row[n]) - 2 * m - 1] for n in A)
        return Witness(
            f=CoeffVector(tuple(int(k) for k in K), m),
            A=A,
            signs=signs,
            scale=self.scales[slot],
        )

    def order_key(self, rows, slot):
        m = self.m
        rows = np.asarray(rows, dtype=np.int64)
        inA = rows > 2 * m
        sign_of = np.array([0] * (2 * m + 1) + list(self.signs), dtype=np.int64)
        return np.hstack([np.where(inA, 0, rows - m), _set_key(inA), _signs_key(inA, sign_of[rows])])


class _SuccProblem(_Problem):
    """``||1_{eps,B}|| / ||1_{eps,A}||`` over ``B`` inside ``A`` and signs on ``A``."""

    name = "succ"
    r = 5
    # symbols: outside A, in A\B (-), in A\B (+), in B (-), in B (+)
    _eps = np.array([0.0, -1.0, 1.0, -1.0, 1.0])
    _inB = np.array([0.0, 0.0, 0.0, 1.0, 1.0])

    def __init__(self, basis: Basis):
        self.basis, self.N = basis, basis.dim
        self.slots = [("succ", None)]

    def features(self):
        N, B = self.N, self.basis.B
        return {
            "A": (_vec_contrib(B, np.tile(self._eps, (N, 1))), "sum"),
            "B": (_vec_contrib(B, np.tile(self._eps * self._inB, (N, 1))), "sum"),
            "any": (_scalar_contrib([0.0, 1, 1, 1, 1], N), "max"),
        }

    def score(self, feat):
        den = self.basis.norm(feat["A"])
        num = self.basis.norm(feat["B"])
        ok = feat["any"][:, 0] > 0
        out = np.full((len(den), 1), -np.inf)
        out[ok, 0] = num[ok] / den[ok]
        return out

    def seeds(self):
        return np.full((1, self.N), 4)

    def witness(self, row, slot):
        A = tuple(int(n) for n in np.nonzero(row > 0)[0])
        Bset = tuple(int(n) for n in np.nonzero(row >= 3)[0])
        signs = tuple(int(self._eps[row[n]]) for n in A)
        return Witness(f=None, A=A, signs=signs, B=Bset)

    def order_key(self, rows, slot):
        rows = np.asarray(rows, dtype=np.int64)
        inA = rows > 0
        signs = self._eps.astype(np.int64)[rows]
        return np.hstack([_set_key(inA), _signs_key(inA, signs), _set_key(rows >= 3)])


# --------------------------------------------------------------------------
# search drivers

_COMBINE = {"sum": np.add, "min": np.minimum, "max": np.maximum}


class _Tables:
    """Head/tail partial features of a problem."""

    def __init__(self, problem: _Problem, tabulate: bool = True):
        self.problem = problem
        N = problem.N
        self.feats = problem.features()
        # sampled searches are the ones too big to tabulate, so they skip the tables
        self.split = (N + 1) // 2 if tabulate else N
        if tabulate:
            self.tail_size = problem.r ** (N - self.split)
            self.head = self._tabulate(0, self.split)
            self.tail = self._tabulate(self.split, N)

    def _partial(self, sym: np.ndarray, lo: int, hi: int) -> dict:
        out = {}
        for name, (contrib, op) in self.feats.items():
            acc = contrib[lo][sym[:, 0]].copy()
            for n in range(lo + 1, hi):
                acc = _COMBINE[op](acc, contrib[n][sym[:, n - lo]])
            out[name] = acc
        return out

    def _tabulate(self, lo: int, hi: int) -> dict:
        width = hi - lo
        if width == 0:
            return {}
        return self._partial(_digits(0, self.problem.r**width, self.problem.r, width), lo, hi)

    def _join(self, head: dict, tail: dict) -> dict:
        if not tail:
            return head
        return {
            name: _COMBINE[op](head[name], tail[name]) for name, (_, op) in self.feats.items()
        }

    def by_index(self, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop, dtype=np.int64)
        h, t = np.divmod(idx, self.tail_size)
        head = {k: v[h] for k, v in self.head.items()}
        tail = {k: v[t] for k, v in self.tail.items()}
        return self.problem.score(self._join(head, tail))

    def by_symbols(self, sym: np.ndarray) -> np.ndarray:
        sym = np.asarray(sym, dtype=np.int64)
        head = self._partial(sym[:, : self.split], 0, self.split)
        tail = self._partial(sym[:, self.split :], self.split, self.problem.N) if self.split < self.problem.N else {}
        return self.problem.score(self._join(head, tail))


def _digits(start: int, stop: int, r: int, N: int) -> np.ndarray:
    return _digits_of(np.arange(start, stop, dtype=np.int64), r, N)


def _digits_of(idx: np.ndarray, r: int, N: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    sym = np.empty((len(idx), N), dtype=np.int64)
    for n in range(N - 1, -1, -1):
        idx, sym[:, n] = np.divmod(idx, r)
    return sym


def _lex_first(problem: _Problem, slot: int, rows: np.ndarray) -> np.ndarray:
    if len(rows) == 1:
        return rows[0]
    key = problem.order_key(rows, slot)
    return rows[np.lexsort(key.T[::-1])[0]]


def _exhaustive(problem: _Problem, workers: int = 1):
    tables = _Tables(problem)
    total = problem.r**problem.N
    ranges = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    L = len(problem.slots)

    def run(rg):
        vals = tables.by_index(*rg)
        best = vals.max(axis=0)
        rows = []
        for l in range(L):
            if best[l] == -np.inf:
                rows.append(None)
                continue
            ties = rg[0] + np.nonzero(vals[:, l] == best[l])[0]
            rows.append(_lex_first(problem, l, _digits_of(ties, problem.r, problem.N)))
        return best, rows

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, ranges))
    else:
        results = map(run, ranges)
    # exact value ties are broken by the witness order, so chunking never matters
    best_v = [-np.inf] * L
    best_x = [None] * L
    for v, rows in results:
        for l in range(L):
            if v[l] > best_v[l]:
                best_v[l], best_x[l] = float(v[l]), rows[l]
            elif v[l] == best_v[l] and rows[l] is not None:
                best_x[l] = _lex_first(problem, l, np.stack([best_x[l], rows[l]]))
    zero = np.zeros(problem.N, dtype=np.int64)
    return [(v, zero if x is None else x) for v, x in zip(best_v, best_x)]


def _lex_key(problem, slot, v, row):
    return (-v, tuple(int(x) for x in problem.order_key(np.asarray(row)[None, :], slot)[0]))


def _ascend(tables: _Tables, slot: int, x, v):
    r, N = tables.problem.r, tables.problem.N
    for _ in range(ASCENT_SWEEPS):
        improved = False
        for n in range(N):
            cand = np.repeat(x[None, :], r, axis=0)
            cand[:, n] = np.arange(r)
            vals = tables.by_symbols(cand)[:, slot]
            i = int(np.argmax(vals))
            if vals[i] > v:
                x, v = cand[i].copy(), float(vals[i])
                improved = True
        if not improved:
            break
    return v, x


def _sampled(problem: _Problem, budget: int, seed: int):
    tables = _Tables(problem, tabulate=False)
    rng = np.random.default_rng(seed)
    L = len(problem.slots)
    pools = [[] for _ in range(L)]
    seeds = problem.seeds()
    sv = tables.by_symbols(seeds)
    for l in range(L):
        pools[l].extend((float(sv[i, l]), seeds[i]) for i in range(len(seeds)))
    remaining = min(budget, SAMPLE_CAP)
    while remaining > 0:
        size = min(CHUNK, remaining)
        remaining -= size
        sym = rng.integers(0, problem.r, size=(size, problem.N))
        vals = tables.by_symbols(sym)
        for l in range(L):
            top = np.argsort(-vals[:, l], kind="stable")[:ASCENT_STARTS]
            pools[l].extend((float(vals[i, l]), sym[i]) for i in top)
            pools[l].sort(key=lambda t, l=l: _lex_key(problem, l, *t))
            del pools[l][ASCENT_STARTS:]
    out = []
    for l in range(L):
        refined = [_ascend(tables, l, x.copy(), v) for v, x in pools[l]]
        refined.sort(key=lambda t, l=l: _lex_key(problem, l, *t))
        out.append(refined[0])
    return out

_CACHE: dict = {}


def clear_cache():
    _CACHE.clear()


def _solve(problem, grid_points: int, m, budget, seed, workers):
    """Run (or fetch) a search; returns ``(mode, [(value, row), ...])``."""
    budget = DEFAULT_BUDGET if budget is None else int(budget)
    if budget < 1:
        raise ValueError("budget must be positive")
    exhaustive = grid_points <= budget
    mode = (
        SearchMode("exhaustive", m)
        if exhaustive
        else SearchMode("sampled", m, budget=budget, seed=int(seed))
    )
    key = (problem.basis.key, problem.name, m, mode.budget, mode.seed)
    if key not in _CACHE:
        if exhaustive:
            _CACHE[key] = _exhaustive(problem, workers)
        else:
            _CACHE[key] = _sampled(problem, budget, int(seed))
    return mode, _CACHE[key]


def _make(problem, mode, results, slot):
    quantity, level = problem.slots[slot]
    v, row = results[slot]
    if quantity in ("gamma", "one_sign", "qglc_v"):
        level = None
    return Estimate(quantity, level, v, problem.witness(row, slot), mode)


def _level_family(basis, quantity, grid, budget, seed, workers):
    g = _grid(grid)
    if quantity == "phi":
        prob = _PhiProblem(basis, g.m)
    else:
        prob = _LevelProblem(basis, g.m)
    mode, res = _solve(prob, g.size(basis.dim), g.m, budget, seed, workers)
    return {
        prob.slots[i][1]: _make(prob, mode, res, i)
        for i in range(len(prob.slots))
        if prob.slots[i][0] == quantity
    }


def level_estimates(basis: Basis, quantity: str, grid, budget=None, seed=0, workers=1) -> dict:
    """``{a: Estimate}`` for a level quantity at every on-grid level ``a``."""
    if quantity not in LEVEL_QUANTITIES:
        raise ValueError(f"{quantity!r} is not a level quantity")
    return _level_family(basis, quantity, grid, budget, seed, workers)


def _at_level(quantity, basis, a, grid, budget, seed, workers):
    g = _grid(grid)
    a = Fraction(g.level_index(a), g.m)
    return _level_family(basis, quantity, g, budget, seed, workers)[a]


def estimate_phi(basis, a, grid, budget=None, seed=0, workers=1) -> Estimate:
    """Largest ``||S_A f|| / ||f||`` over grid ``f`` in the cube and ``A`` inside ``A(a, f)``."""
    return _at_level("phi", basis, a, grid, budget, seed, workers)


def estimate_theta(basis, a, grid, budget=None, seed=0, workers=1) -> Estimate:
    """As :func:`estimate_phi` with ``A = A(a, f)`` only."""
    return _at_level("theta", basis, a, grid, budget, seed, workers)


def estimate_lambda(basis, a, grid, budget=None, seed=0, workers=1) -> Estimate:
    return _at_level("lambda", basis, a, grid, budget, seed, workers)


def estimate_rho(basis, a, grid, budget=None, seed=0, workers=1) -> Estimate:
    return _at_level("rho", basis, a, grid, budget, seed, workers)


def estimate_Lambda(basis, grid, budget=None, seed=0, workers=1) -> Estimate:
    """Largest on-grid ``lambda``; the estimate records the level attaining it."""
    fam = level_estimates(basis, "lambda", grid, budget, seed, workers)
    # first level in increasing order wins ties
    best = max(sorted(fam), key=lambda a: fam[a].value)
    e = fam[best]
    return Estimate("Lambda", e.level, e.value, e.witness, e.mode)


def _indicator_plus(basis, grid, signs, scales, label, budget, seed, workers):
    g = _grid(grid)
    prob = _IndicatorPlusProblem(basis, g.m, signs=signs, scales=scales, label=label)
    mode, res = _solve(prob, g.size(basis.dim), g.m, budget, seed, workers)
    ests = [_make(prob, mode, res, i) for i in range(len(prob.slots))]
    return ests[int(np.argmax([e.value for e in ests]))]


def estimate_gamma(basis, grid, budget=None, seed=0, workers=1) -> Estimate:
    """Largest ``||1_{eps,A}|| / ||1_{eps,A} + f||`` with ``f`` in the cube, off ``A``."""
    return _indicator_plus(basis, grid, (-1, 1), (1,), "gamma", budget, seed, workers)


def estimate_one_sign_K(basis, grid, budget=None, seed=0, workers=1) -> Estimate:
    """:func:`estimate_gamma` with every sign equal to ``+1``."""
    return _indicator_plus(basis, grid, (1,), (1,), "one_sign", budget, seed, workers)


def estimate_qglc_v(basis, grid, scale_set=DEFAULT_SCALES, budget=None, seed=0, workers=1) -> Estimate:
    """:func:`estimate_gamma` with the perturbation scaled by each factor in ``scale_set``."""
    scales = tuple(sorted(Fraction(s) for s in scale_set))
    if not scales or scales[0] <= 0:
        raise ValueError("scale_set must be nonempty and positive")
    return _indicator_plus(basis, grid, (-1, 1), scales, "qglc_v", budget, seed, workers)


def estimate_succ(basis, grid=None, budget=None, seed=0, workers=1) -> Estimate:
    """Largest ``||1_{eps,B}|| / ||1_{eps,A}||`` over ``B`` inside ``A`` (no grid involved)."""
    prob = _SuccProblem(basis)
    mode, res = _solve(prob, prob.r**basis.dim, None, budget, seed, workers)
    if grid is not None and mode.kind == "exhaustive":
        mode = SearchMode("exhaustive", _grid(grid).m)
    return _make(prob, mode, res, 0)


def estimate(basis, quantity, grid, level=None, budget=None, seed=0, workers=1, scale_set=DEFAULT_SCALES):
    """Dispatch by quantity tag (``qglc-v`` and ``qglc_v`` both accepted)."""
    quantity = quantity.replace("-", "_")
    kw = dict(budget=budget, seed=seed, workers=workers)
    if quantity in LEVEL_QUANTITIES:
        if level is None:
            raise ValueError(f"{quantity} needs a level")
        return _at_level(quantity, basis, level, grid, budget, seed, workers)
    if quantity == "gamma":
        return estimate_gamma(basis, grid, **kw)
    if quantity == "Lambda":
        return estimate_Lambda(basis, grid, **kw)
    if quantity == "succ":
        return estimate_succ(basis, grid, **kw)
    if quantity == "qglc_v":
        return estimate_qglc_v(basis, grid, scale_set, **kw)
    if quantity == "one_sign":
        return estimate_one_sign_K(basis, grid, **kw)
    raise ValueError(f"unknown quantity {quantity!r}")


# --------------------------------------------------------------------------


def reevaluate(basis: Basis, est: Estimate) -> float:
    """Recompute an estimate's value from its witness alone."""
    w = est.witness
    q = est.quantity
    norm = basis.norm
    if q == "succ":
        signs = dict(zip(w.A, w.signs))
        return float(norm(indicator(basis, {n: signs[n] for n in w.B}, w.B)) / norm(indicator(basis, signs, w.A)))
    if q in ("gamma", "one_sign", "qglc_v"):
        one = indicator(basis, w.signs, w.A)
        pert = synth(basis, w.f) * float(w.scale if w.scale is not None else 1)
        return float(norm(one) / norm(one + pert))
    f = synth(basis, w.f)
    if q in ("phi", "theta"):
        return float(norm(synth(basis, project(basis, w.f, w.A))) / norm(f))
    ind = norm(indicator(basis, w.signs, w.A))
    if q in ("lambda", "Lambda"):
        low = min(abs(w.f.fractions[n]) for n in w.A)
        return float(low) * float(ind) / float(norm(f))
    if q == "rho":
        return float(est.level) * float(ind) / float(norm(f))
    raise ValueError(f"unknown quantity {q!r}")
