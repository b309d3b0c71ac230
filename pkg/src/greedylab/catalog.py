"""Basis catalog, on-disk result store and curve emission.

Catalog files are JSON: either a list of entries or ``{"entries": [...]}``.
An entry looks like::

    {"id": "my-basis", "description": "...",
     "space": {"dim": 3, "p": 1, "norm": {"family": "Lp", "q": "inf"}},
     "constructor": "custom", "matrix": [["1", "1/2", "0"], ...]}

``constructor`` is one of ``canonical``, ``summing``, ``difference`` or
``custom``; only ``custom`` takes a ``matrix`` (columns are the basis
vectors).  Matrix entries are integers or ``"num/den"`` strings so bases
round-trip exactly.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .estimate import LEVEL_QUANTITIES, GridSpec, Estimate, estimate, estimate_gamma
from .greedy import as_level
from .space import (
    Basis,
    Composite,
    Lp,
    MaxTail,
    QuasiNormedSpace,
    Summing,
    WeightedLp,
    make_basis,
)

__all__ = [
    "CatalogError",
    "CatalogEntry",
    "ResultRecord",
    "ResultStore",
    "BUILTIN_DIMS",
    "builtin_entries",
    "load_catalog",
    "full_catalog",
    "run_estimate",
    "emit_curves",
    "CSV_COLUMNS",
]

BUILTIN_DIMS = range(2, 7)
CONSTRUCTORS = ("canonical", "summing", "difference", "custom")
CSV_COLUMNS = ("basis_id", "dim", "quantity", "a", "value", "mode", "m")


class CatalogError(ValueError):
    """Malformed or invalid catalog content."""


# --------------------------------------------------------------------------
# entries


def _parse_norm(spec, where: str):
    if not isinstance(spec, dict) or "family" not in spec:
        raise CatalogError(f"{where}: norm must be an object with a 'family' field")
    fam = spec["family"]

    def q_of():
        if "q" not in spec:
            raise CatalogError(f"{where}: norm family {fam} needs 'q'")
        q = spec["q"]
        if q in ("inf", "infinity"):
            return math.inf
        try:
            return float(Fraction(q)) if isinstance(q, str) else float(q)
        except (ValueError, TypeError):
            raise CatalogError(f"{where}: bad 'q' value {q!r}") from None

    try:
        if fam == "Lp":
            return Lp(q_of())
        if fam == "WeightedLp":
            return WeightedLp(q_of(), tuple(float(Fraction(w)) for w in spec["weights"]))
        if fam == "Summing":
            return Summing()
        if fam == "MaxTail":
            return MaxTail()
        if fam == "Composite":
            T = [[float(Fraction(x)) if isinstance(x, str) else float(x) for x in row] for row in spec["T"]]
            return Composite(T, q_of())
    except KeyError as exc:
        raise CatalogError(f"{where}: norm family {fam} needs field {exc.args[0]!r}") from None
    except (ValueError, TypeError) as exc:
        raise CatalogError(f"{where}: {exc}") from None
    raise CatalogError(f"{where}: unknown norm family {fam!r}")


def _matrix_for(constructor: str, N: int, matrix):
    if constructor == "canonical":
        return [[int(i == j) for j in range(N)] for i in range(N)]
    if constructor == "summing":
        # column j is e_1 + ... + e_(j+1)
        return [[int(i <= j) for j in range(N)] for i in range(N)]
    if constructor == "difference":
        # x_1 = e_1, x_n = e_n - e_(n-1)
        return [[1 if i == j else (-1 if j == i + 1 else 0) for j in range(N)] for i in range(N)]
    return matrix


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    id: str
    description: str
    space: QuasiNormedSpace
    constructor: str
    matrix: tuple  # rows of Fractions
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis(self) -> Basis:
        return _basis_cache(self)

    @property
    def fingerprint(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def describe(self) -> dict:
        return dict(self.raw)


_BASES: dict = {}


def _basis_cache(entry: CatalogEntry) -> Basis:
    key = (entry.id, entry.fingerprint)
    if key not in _BASES:
        _BASES[key] = make_basis(entry.space, [list(r) for r in entry.matrix], name=entry.id)
    return _BASES[key]


def _fraction_cell(x, where):
    if isinstance(x, bool):
        raise CatalogError(f"{where}: boolean matrix entry")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise CatalogError(f"{where}: bad rational {x!r}") from None
    if isinstance(x, float):
        # floats are accepted but carried as their exact binary value
        return Fraction(x)
    raise CatalogError(f"{where}: matrix entries must be integers or 'num/den' strings")


def entry_from_dict(d: dict, index: int = 0) -> CatalogEntry:
    where = f"entry {index}"
    if not isinstance(d, dict):
        raise CatalogError(f"{where}: expected an object")
    if not isinstance(d.get("id"), str) or not d["id"]:
        raise CatalogError(f"{where}: field 'id' must be a nonempty string")
    where = f"entry {index} ({d['id']})"
    sp = d.get("space")
    if not isinstance(sp, dict):
        raise CatalogError(f"{where}: field 'space' must be an object")
    for k in ("dim", "p", "norm"):
        if k not in sp:
            raise CatalogError(f"{where}: field 'space.{k}' is missing")
    try:
        dim = int(sp["dim"])
        p = float(Fraction(sp["p"])) if isinstance(sp["p"], str) else float(sp["p"])
    except (TypeError, ValueError):
        raise CatalogError(f"{where}: 'space.dim' and 'space.p' must be numbers") from None
    norm = _parse_norm(sp["norm"], f"{where} field 'space.norm'")
    try:
        space = QuasiNormedSpace(dim, p, norm)
    except ValueError as exc:
        raise CatalogError(f"{where}: {exc}") from None
    cons = d.get("constructor", "custom")
    if cons not in CONSTRUCTORS:
        raise CatalogError(f"{where}: field 'constructor' must be one of {CONSTRUCTORS}")
    if cons == "custom":
        mat = d.get("matrix")
        if not isinstance(mat, list) or len(mat) != dim:
            raise CatalogError(f"{where}: field 'matrix' must be a list of {dim} rows")
        rows = []
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != dim:
                raise CatalogError(f"{where}: field 'matrix' row {i} must have {dim} entries")
            rows.append(tuple(_fraction_cell(x, f"{where} field 'matrix' row {i}") for x in row))
    else:
        rows = [tuple(Fraction(x) for x in r) for r in _matrix_for(cons, dim, None)]
    entry = CatalogEntry(
        id=d["id"],
        description=str(d.get("description", "")),
        space=space,
        constructor=cons,
        matrix=tuple(rows),
        raw=json.loads(json.dumps(d)),
    )
    try:
        entry.basis()
    except ValueError as exc:
        raise CatalogError(f"{where}: {exc}") from None
    return entry


def _builtin_dicts():
    out = []
    families = [
        ("l1-canonical", "canonical basis of l1", 1, {"family": "Lp", "q": 1}, "canonical"),
        ("l2-canonical", "canonical basis of l2", 1, {"family": "Lp", "q": 2}, "canonical"),
        ("lhalf-canonical", "canonical basis of l_1/2", 0.5, {"family": "Lp", "q": 0.5}, "canonical"),
        ("summing", "summing basis s_n = e_1 + ... + e_n in l_inf", 1, {"family": "Lp", "q": "inf"}, "summing"),
        ("difference", "difference basis e_n - e_(n-1) in l1", 1, {"family": "Lp", "q": 1}, "difference"),
    ]
    for prefix, desc, p, norm, cons in families:
        for N in BUILTIN_DIMS:
            out.append({
                "id": f"{prefix}-{N}",
                "description": f"{desc}, dimension {N}",
                "space": {"dim": N, "p": p, "norm": norm},
                "constructor": cons,
            })
    return out


_BUILTINS: list | None = None


def builtin_entries() -> list:
    global _BUILTINS
    if _BUILTINS is None:
        _BUILTINS = [entry_from_dict(d, i) for i, d in enumerate(_builtin_dicts())]
    return list(_BUILTINS)


def load_catalog(path) -> list:
    """Entries of a catalog file (built-ins are not included)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("entries")
    if not isinstance(data, list):
        raise CatalogError(f"{path}: expected a list of entries or an object with 'entries'")
    entries = [entry_from_dict(d, i) for i, d in enumerate(data)]
    seen = set()
    for e in entries:
        if e.id in seen:
            raise CatalogError(f"{path}: duplicate id {e.id!r}")
        seen.add(e.id)
    return entries


def full_catalog(path=None) -> dict:
    """Built-ins plus the entries of ``path``, by id."""
    out = {e.id: e for e in builtin_entries()}
    if path is not None:
        for e in load_catalog(path):
            if e.id in out:
                raise CatalogError(f"{path}: id {e.id!r} clashes with a built-in entry")
            out[e.id] = e
    return out


# --------------------------------------------------------------------------
# result store


@dataclass(frozen=True)
class ResultRecord:
    entry_id: str
    m: int
    quantity: str
    level: str | None
    value: float
    witness: dict
    mode: dict
    budget: int | None
    seed: int
    version: str
    fingerprint: str
    timestamp: float

    def key(self) -> tuple:
        return _record_key(self.entry_id, self.quantity, self.level, self.m, self.budget, self.seed, self.version)

    def to_dict(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "m": self.m,
            "quantity": self.quantity,
            "level": self.level,
            "value": self.value,
            "witness": self.witness,
            "mode": self.mode,
            "budget": self.budget,
            "seed": self.seed,
            "version": self.version,
            "fingerprint": self.fingerprint,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRecord":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})


def _record_key(entry_id, quantity, level, m, budget, seed, version) -> tuple:
    return (entry_id, quantity, None if level is None else str(level), int(m), budget, int(seed), version)


def default_cache_dir() -> Path:
    env = os.environ.get("GREEDYLAB_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "greedylab"


class ResultStore:
    """One JSON file per record, named by a hash of the record key."""

    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def _path(self, key: tuple) -> Path:
        h = hashlib.sha256(json.dumps(list(key)).encode()).hexdigest()[:32]
        return self.root / f"{h}.json"

    def get(self, key: tuple, fingerprint: str) -> ResultRecord | None:
        path = self._path(key)
        try:
            rec = ResultRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, KeyError, TypeError):
            return None  # unreadable records are recomputed and overwritten
        if rec.key() != key or rec.fingerprint != fingerprint:
            return None
        return rec

    def put(self, rec: ResultRecord) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(rec.key())
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(rec.to_dict(), fh, sort_keys=True, indent=1)
        os.replace(tmp, path)
        return path


def _record_from_estimate(entry: CatalogEntry, est: Estimate, m, budget, seed) -> ResultRecord:
    return ResultRecord(
        entry_id=entry.id,
        m=int(m),
        quantity=est.quantity,
        level=None if est.level is None else str(est.level),
        value=est.value,
        witness=est.witness.describe(),
        mode=est.mode.describe(),
        budget=budget,
        seed=int(seed),
        version=__version__,
        fingerprint=entry.fingerprint,
        timestamp=time.time(),
    )


def run_estimate(entry: CatalogEntry, quantity: str, levels, m: int, budget=None, seed=0,
                 store: ResultStore | None = None, workers=1) -> list:
    """Estimate ``quantity`` for ``entry`` at each level, via the store.

    Returns ``(record, cache_hit)`` pairs.  Level quantities default to all
    on-grid levels; other quantities ignore ``levels``.
    """
    quantity = quantity.replace("-", "_")
    if quantity == "one_sign_K":
        quantity = "one_sign"
    known = LEVEL_QUANTITIES + ("gamma", "Lambda", "succ", "qglc_v", "one_sign")
    if quantity not in known:
        raise ValueError(f"unknown quantity {quantity!r}")
    grid = GridSpec(int(m))
    if quantity in LEVEL_QUANTITIES:
        lv = grid.levels if not levels else [as_level(a, grid.m) for a in levels]
    else:
        lv = [None]
    out = []
    for a in lv:
        key = _record_key(entry.id, quantity, a, grid.m, budget, seed, __version__)
        rec = store.get(key, entry.fingerprint) if store is not None else None
        if rec is not None:
            out.append((rec, True))
            continue
        est = estimate(entry.basis(), quantity, grid, level=a, budget=budget, seed=seed, workers=workers)
        rec = _record_from_estimate(entry, est, grid.m, budget, seed)
        if store is not None:
            store.put(rec)
        out.append((rec, False))
    return out


# --------------------------------------------------------------------------
# curves


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def emit_curves(entries, quantity: str, m: int, out=None, levels=None, envelope=False,
                budget=None, seed=0, store: ResultStore | None = None) -> str:
    """CSV of ``quantity`` against the level for each entry; returned and optionally written.

    Non-level quantities give one row per entry with an empty ``a``.  With
    ``envelope`` a column ``(G+1)/a^G - 1`` (``G`` the gamma estimate on the
    same grid) is appended.
    """
    cols = list(CSV_COLUMNS) + (["envelope"] if envelope else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for entry in entries:
        recs = run_estimate(entry, quantity, levels, m, budget=budget, seed=seed, store=store)
        G = estimate_gamma(entry.basis(), m, budget=budget, seed=seed).value if envelope else None
        for rec, _ in recs:
            row = [entry.id, entry.dim, rec.quantity, rec.level or "", _fmt(rec.value), rec.mode["kind"], rec.m]
            if envelope:
                if rec.level is None:
                    row.append("")
                else:
                    a = float(Fraction(rec.level))
                    row.append(_fmt((G + 1) / a**G - 1))
            w.writerow(row)
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
