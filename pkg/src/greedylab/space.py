"""Finite-dimensional quasi-normed spaces and exact basis algebra.

Vectors live in ambient coordinates (length ``dim``).  A basis is an
invertible matrix whose columns are the basis vectors; its dual functionals
are the rows of the inverse.  Coefficient vectors on a rational grid are
carried exactly as integer numerators over a shared denominator.

Index sets are 0-based throughout.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "SingularBasisError",
    "Lp",
    "WeightedLp",
    "Summing",
    "MaxTail",
    "Composite",
    "QuasiNormedSpace",
    "Basis",
    "CoeffVector",
    "PConvexityReport",
    "norm_eval",
    "make_basis",
    "coeffs",
    "synth",
    "project",
    "sign_vector",
    "indicator",
    "validate_p_convexity",
]

MAX_CONDITION = 1e10
BIORTHOGONALITY_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when a vector or index set does not fit the space dimension."""


class SingularBasisError(ValueError):
    """Raised for singular or badly conditioned basis matrices."""


# --------------------------------------------------------------------------
# norm descriptors
#
# Every descriptor is a callable evaluating the quasi-norm along the last
# axis, so a batch of vectors (n, dim) gives n values.  Sums are taken
# coordinate by coordinate so that a row's value never depends on the batch
# it was evaluated in.


def _rowsum(a: np.ndarray) -> np.ndarray:
    out = a[..., 0].copy()
    for n in range(1, a.shape[-1]):
        out += a[..., n]
    return out


def _lq(v: np.ndarray, q: float, weights: np.ndarray | None = None) -> np.ndarray:
    a = np.abs(v)
    if math.isinf(q):
        if weights is not None:
            a = a * weights
        return a.max(axis=-1)
    if q == 1:
        s = a if weights is None else a * weights
        return _rowsum(s)
    with np.errstate(over="ignore", under="ignore"):
        out = _lq_plain(a, q, weights)
    # powers can under- or overflow for extreme magnitudes; redo those rows scaled
    top = a.max(axis=-1)
    bad = ((out == 0) & (top > 0)) | np.isinf(out)
    if np.any(bad):
        top = np.where(bad, top, 1.0)
        out = np.where(bad, top * _lq_plain(a / top[..., None], q, weights), out)
    return out


def _lq_plain(a: np.ndarray, q: float, weights: np.ndarray | None) -> np.ndarray:
    if q == 2:
        s = a * a if weights is None else a * a * weights
        return np.sqrt(_rowsum(s))
    s = a**q if weights is None else a**q * weights
    return _rowsum(s) ** (1.0 / q)


@dataclass(frozen=True)
class Lp:
    """``(sum |v_n|^q)^(1/q)``; ``q = inf`` is the max norm."""

    q: float

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError(f"Lp exponent must be positive, got {self.q}")

    def __call__(self, v):
        return _lq(np.asarray(v, dtype=float), float(self.q))

    def describe(self) -> dict:
        return {"family": "Lp", "q": _q_out(self.q)}


@dataclass(frozen=True)
class WeightedLp:
    """``(sum w_n |v_n|^q)^(1/q)`` with positive weights."""

    q: float
    weights: tuple

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError(f"WeightedLp exponent must be positive, got {self.q}")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not all(w > 0 for w in self.weights):
            raise ValueError("WeightedLp weights must be positive")

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != len(self.weights):
            raise DimensionError(
                f"vector length {v.shape[-1]} does not match {len(self.weights)} weights"
            )
        return _lq(v, float(self.q), np.asarray(self.weights))

    def describe(self) -> dict:
        return {"family": "WeightedLp", "q": _q_out(self.q), "weights": list(self.weights)}


@dataclass(frozen=True)
class Summing:
    """Largest partial sum ``max_k |v_1 + ... + v_k|``."""

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        return np.abs(np.cumsum(v, axis=-1)).max(axis=-1)

    def describe(self) -> dict:
        return {"family": "Summing"}


@dataclass(frozen=True)
class MaxTail:
    """Largest tail sum ``max_k |v_k + ... + v_N|``."""

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        tails = np.cumsum(v[..., ::-1], axis=-1)
        return np.abs(tails).max(axis=-1)

    def describe(self) -> dict:
        return {"family": "MaxTail"}


@dataclass(frozen=True, eq=False)
class Composite:
    """``||T v||_q`` for an invertible matrix ``T``."""

    T: np.ndarray
    q: float

    def __post_init__(self):
        T = np.array(self.T, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise ValueError("Composite needs a square matrix")
        if not np.isfinite(np.linalg.cond(T)) or np.linalg.matrix_rank(T) < T.shape[0]:
            raise SingularBasisError("Composite matrix T must be invertible")
        T.setflags(write=False)
        object.__setattr__(self, "T", T)
        Lp(self.q)  # validates q

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        # T v row by row, accumulated in a fixed order
        tv = v[..., :1] * self.T[:, 0]
        for n in range(1, v.shape[-1]):
            tv = tv + v[..., n : n + 1] * self.T[:, n]
        return _lq(tv, float(self.q))

    def __eq__(self, other):
        return (
            isinstance(other, Composite)
            and self.q == other.q
            and np.array_equal(self.T, other.T)
        )

    def __hash__(self):
        return hash((self.q, self.T.tobytes()))

    def describe(self) -> dict:
        return {"family": "Composite", "q": _q_out(self.q), "T": self.T.tolist()}


def _q_out(q):
    return "inf" if math.isinf(q) else q


NormDescriptor = Lp | WeightedLp | Summing | MaxTail | Composite


@dataclass(frozen=True)
class QuasiNormedSpace:
    """``R^dim`` with a quasi-norm and a declared p-convexity exponent."""

    dim: int
    p: float
    norm: NormDescriptor

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim}")
        if not 0 < self.p <= 1:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if isinstance(self.norm, WeightedLp) and len(self.norm.weights) != self.dim:
            raise DimensionError("weights length must equal the dimension")
        if isinstance(self.norm, Composite) and self.norm.T.shape[0] != self.dim:
            raise DimensionError("Composite matrix size must equal the dimension")

    @property
    def is_banach(self) -> bool:
        return self.p == 1

    def describe(self) -> dict:
        return {"dim": self.dim, "p": self.p, "norm": self.norm.describe()}


def norm_eval(space: QuasiNormedSpace, v) -> np.ndarray | float:
    """Quasi-norm of ``v`` (or of each row of a batch)."""
    v = np.asarray(v, dtype=float)
    if v.ndim == 0 or v.shape[-1] != space.dim:
        raise DimensionError(f"expected vectors of length {space.dim}, got shape {v.shape}")
    out = space.norm(v)
    return float(out) if v.ndim == 1 else out


# --------------------------------------------------------------------------
# bases


def _exact_inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan with partial pivoting (largest modulus) over the rationals."""
    n = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise SingularBasisError("basis matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [x - factor * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _as_fraction_matrix(B) -> list[list[Fraction]] | None:
    try:
        rows = [list(r) for r in B]
    except TypeError:
        return None
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
                row.append(Fraction(x))
            elif isinstance(x, str):
                row.append(Fraction(x))
            else:
                return None
        out.append(row)
    return out


@dataclass(frozen=True, eq=False)
class Basis:
    """Columns of ``B`` are the basis vectors, rows of ``D`` the dual functionals."""

    space: QuasiNormedSpace
    B: np.ndarray
    D: np.ndarray
    name: str = ""
    key: str = field(default="", repr=False)

    @property
    def dim(self) -> int:
        return self.space.dim

    def norm(self, v):
        return self.space.norm(np.asarray(v, dtype=float))

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Basis) and self.key == other.key


def make_basis(space: QuasiNormedSpace, B, name: str = "") -> Basis:
    """Build a basis from the matrix of basis vectors (as columns).

    Integer, ``Fraction`` or ``"num/den"`` string entries are inverted
    exactly; float matrices go through LAPACK's pivoted LU.  Matrices with
    condition number above 1e10 are rejected.
    """
    exact = _as_fraction_matrix(B)
    Bf = np.array(
        [[float(x) for x in r] for r in exact] if exact is not None else B, dtype=float
    )
    N = space.dim
    if Bf.shape != (N, N):
        raise DimensionError(f"basis matrix must be {N}x{N}, got {Bf.shape}")
    if exact is not None:
        D = np.array([[float(x) for x in r] for r in _exact_inverse(exact)])
    else:
        try:
            D = np.linalg.inv(Bf)
        except np.linalg.LinAlgError as exc:
            raise SingularBasisError("basis matrix is singular") from exc
    cond = np.linalg.cond(Bf)
    if not np.isfinite(cond):
        raise SingularBasisError("basis matrix is singular")
    if cond > MAX_CONDITION:
        raise SingularBasisError(f"basis matrix condition number {cond:.3g} exceeds 1e10")
    err = np.abs(D @ Bf - np.eye(N)).max()
    if err > BIORTHOGONALITY_TOL:
        raise SingularBasisError(f"biorthogonality residual {err:.3g} exceeds 1e-12")
    Bf.setflags(write=False)
    D.setflags(write=False)
    h = hashlib.sha256()
    h.update(Bf.tobytes())
    h.update(repr(sorted(space.describe().items())).encode())
    return Basis(space=space, B=Bf, D=D, name=name, key=h.hexdigest()[:24])


# --------------------------------------------------------------------------
# coefficients


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients ``k_n / m`` with integer numerators and a shared denominator."""

    numerators: tuple
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(int(k) for k in self.numerators))
        if int(self.denominator) != self.denominator or self.denominator < 1:
            raise ValueError("denominator must be a positive integer")

    @classmethod
    def from_fractions(cls, values: Iterable) -> "CoeffVector":
        fr = [Fraction(v) for v in values]
        m = math.lcm(*(x.denominator for x in fr)) if fr else 1
        return cls(tuple(int(x * m) for x in fr), m)

    @classmethod
    def from_real(cls, values, m: int, tol: float = 1e-9) -> "CoeffVector":
        vals = np.asarray(values, dtype=float)
        ks = np.rint(vals * m)
        if np.abs(ks / m - vals).max(initial=0.0) > tol:
            raise ValueError(f"coefficients are not on the grid with denominator {m}")
        return cls(tuple(int(k) for k in ks), m)

    def __len__(self):
        return len(self.numerators)

    @property
    def fractions(self) -> tuple:
        return tuple(Fraction(k, self.denominator) for k in self.numerators)

    @property
    def values(self) -> np.ndarray:
        return np.array(self.numerators, dtype=float) / self.denominator

    @property
    def in_cube(self) -> bool:
        return all(abs(k) <= self.denominator for k in self.numerators)

    def on_denominator(self, m: int) -> "CoeffVector":
        """Same vector written over denominator ``m``."""
        out = []
        for k in self.numerators:
            q, r = divmod(k * m, self.denominator)
            if r:
                raise ValueError(f"{self} is not on the grid with denominator {m}")
            out.append(q)
        return CoeffVector(tuple(out), m)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.fractions) + ")"


def _check_index_set(A, N: int) -> tuple:
    A = tuple(sorted(set(int(n) for n in A)))
    if A and (A[0] < 0 or A[-1] >= N):
        raise DimensionError(f"index set {A} out of range for dimension {N}")
    return A


def coeffs(basis: Basis, f, m: int | None = None):
    """Coefficients ``(x_n^*(f))_n``.

    Returns a float array, or a :class:`CoeffVector` snapped onto the grid
    with denominator ``m`` when ``m`` is given.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (basis.dim,):
        raise DimensionError(f"expected a vector of length {basis.dim}, got shape {f.shape}")
    c = basis.D @ f
    return c if m is None else CoeffVector.from_real(c, m)


def synth(basis: Basis, c) -> np.ndarray:
    """Ambient vector ``sum_n c_n x_n``."""
    vals = c.values if isinstance(c, CoeffVector) else np.asarray(c, dtype=float)
    if vals.shape != (basis.dim,):
        raise DimensionError(f"expected {basis.dim} coefficients, got shape {vals.shape}")
    return basis.B @ vals


def project(basis: Basis, c: CoeffVector, A) -> CoeffVector:
    """Coefficient-space projection: keep ``c`` on ``A``, zero elsewhere."""
    if len(c) != basis.dim:
        raise DimensionError(f"expected {basis.dim} coefficients, got {len(c)}")
    keep = set(_check_index_set(A, basis.dim))
    return CoeffVector(
        tuple(k if n in keep else 0 for n, k in enumerate(c.numerators)), c.denominator
    )


def sign_vector(c) -> tuple:
    """Signs of the coefficients, with ``sgn(0) = +1``."""
    vals = c.numerators if isinstance(c, CoeffVector) else np.asarray(c, dtype=float)
    return tuple(-1 if x < 0 else 1 for x in vals)


def indicator(basis: Basis, signs, A) -> np.ndarray:
    """Ambient vector ``sum_{n in A} signs_n x_n``.

    ``signs`` is either a mapping index -> sign or a sequence aligned with
    ``sorted(A)``.
    """
    A = _check_index_set(A, basis.dim)
    if isinstance(signs, dict):
        if set(signs) != set(A):
            raise ValueError(f"signs defined on {sorted(signs)} but A = {list(A)}")
        eps = [signs[n] for n in A]
    else:
        eps = list(signs)
        if len(eps) != len(A):
            raise ValueError(f"{len(eps)} signs for an index set of size {len(A)}")
    if any(e not in (-1, 1) for e in eps):
        raise ValueError("signs must be +1 or -1")
    c = np.zeros(basis.dim)
    for n, e in zip(A, eps):
        c[n] = e
    return basis.B @ c


# --------------------------------------------------------------------------
# p-convexity falsification


@dataclass(frozen=True)
class PConvexityReport:
    p: float
    samples: int
    seed: int
    violations: tuple  # (f, g, lhs, rhs) with lhs = ||f+g||^p, rhs = ||f||^p + ||g||^p

    @property
    def falsified(self) -> bool:
        return bool(self.violations)


def _test_pairs(N: int, count: int, rng: np.random.Generator):
    F = rng.standard_normal((count, N))
    G = rng.standard_normal((count, N))
    # a third of the pairs are scaled coordinate vectors, a third sparse
    third = count // 3
    idx_f = rng.integers(0, N, third)
    idx_g = rng.integers(0, N, third)
    F[:third] = 0
    G[:third] = 0
    F[np.arange(third), idx_f] = rng.choice([-1.0, 1.0], third) * rng.exponential(1, third)
    G[np.arange(third), idx_g] = rng.choice([-1.0, 1.0], third) * rng.exponential(1, third)
    sl = slice(third, 2 * third)
    F[sl] *= rng.random((third, N)) < 0.4
    G[sl] *= rng.random((third, N)) < 0.4
    return F, G


def validate_p_convexity(
    space: QuasiNormedSpace, sample_count: int = 10_000, seed: int = 0
) -> PConvexityReport:
    """Search for pairs violating ``||f+g||^p <= ||f||^p + ||g||^p``.

    An empty violation list means the declared exponent was not falsified.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    F, G = _test_pairs(space.dim, sample_count, rng)
    p = space.p
    lhs = space.norm(F + G) ** p
    rhs = space.norm(F) ** p + space.norm(G) ** p
    bad = np.nonzero(lhs > rhs * (1 + 1e-9))[0]
    violations = tuple(
        (tuple(F[i]), tuple(G[i]), float(lhs[i]), float(rhs[i])) for i in bad
    )
    return PConvexityReport(p=p, samples=sample_count, seed=seed, violations=violations)
