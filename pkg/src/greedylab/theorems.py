"""Executable inequalities between threshold functions, checked on grid estimates.

Every check returns a :class:`CheckReport`.  A check usually compares many
instances (levels, level pairs, ...); the report's top-level ``lhs``/``rhs``
are those of the instance closest to failing, and the full list is kept in
``instances``.  An instance passes iff ``lhs <= rhs * (1 + rel) + abs``.

Checks read their inputs from a *profile*: either :class:`Profile`, which
runs the estimators for one basis on one grid, or :class:`TableProfile`,
which serves hand-made tables (used for synthetic hypotheses and for
estimates computed elsewhere).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .estimate import (
    DEFAULT_SCALES,
    Estimate,
    GridSpec,
    estimate_gamma,
    estimate_one_sign_K,
    estimate_qglc_v,
    estimate_succ,
    level_estimates,
)
from .space import Basis, QuasiNormedSpace

__all__ = [
    "IncomparableInputsError",
    "MissingEstimateError",
    "OutOfScopeError",
    "ConstantPack",
    "CheckReport",
    "Profile",
    "TableProfile",
    "lemma24_constants",
    "check_level_one",
    "check_morebounds",
    "check_morebounds_all",
    "check_growth_lemma",
    "check_phi_power_bound",
    "check_nu_level",
    "check_scale_chain",
    "check_lipschitz",
    "check_monotone_products",
    "check_one_sign",
    "check_succ_remark",
    "check_sumc",
    "check_anso8",
    "check_claim34",
    "sweep_claim34",
    "check_prop35",
    "check_lemma41",
    "check_prop42",
    "SUITES",
    "run_suite",
]

IDENTITY_SLACK = 1e-9
CHAIN_SLACK = 0.05
ONE_TOL = 1e-6


class IncomparableInputsError(ValueError):
    """Estimates from different grids or bases were combined."""


class MissingEstimateError(KeyError):
    """A check needed a quantity the profile does not carry."""


class OutOfScopeError(ValueError):
    """The check's theorem does not cover these inputs (e.g. ``p < 1``)."""


# --------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class ConstantPack:
    """Geometric constants for real ``p``-Banach spaces.

    ``delta``, ``L`` and ``C1`` depend on a constant of the basis and are
    ``None`` until that constant is supplied.
    """

    p: float
    A_p: float
    B_p: float
    one_sign_K: float | None = None
    succ: float | None = None
    sign_classes: int = 2

    @classmethod
    def build(cls, p: float, one_sign_K: float | None = None, succ: float | None = None):
        if not 0 < p <= 1:
            raise ValueError(f"p must lie in (0, 1], got {p}")
        A_p = (2.0**p - 1.0) ** (1.0 / p)
        return cls(p=p, A_p=A_p, B_p=2.0 ** (1.0 / p) * A_p, one_sign_K=one_sign_K, succ=succ)

    @property
    def delta(self) -> float | None:
        if self.one_sign_K is None:
            return None
        return 2.0 / (self.A_p * self.B_p * self.one_sign_K**2)

    @property
    def L(self) -> float | None:
        if self.one_sign_K is None:
            return None
        return 2.0 * self.B_p * self.sign_classes ** (1.0 / self.p) * self.one_sign_K

    @property
    def C1(self) -> float | None:
        if self.succ is None:
            return None
        return self.A_p * self.succ

    def lemma24(self, c, phi_c: float, phi_1: float) -> tuple:
        return lemma24_constants(self.p, c, phi_c, phi_1)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "A_p": self.A_p,
            "B_p": self.B_p,
            "delta": self.delta,
            "L": self.L,
            "C1": self.C1,
        }


def lemma24_constants(p: float, c, phi_c: float, phi_1: float) -> tuple:
    """``(C, d)`` with ``phi(a) <= C a^-d`` from ``phi(c)`` and ``phi(1)``."""
    c = float(c)
    if not 0 < c < 1:
        raise ValueError(f"c must lie strictly between 0 and 1, got {c}")
    grow = 1.0 + (1.0 - c) ** p * phi_c**p
    C = grow ** (1.0 / p) * (phi_1**p + 1.0) ** (1.0 / p)
    d = -(1.0 / p) * math.log(grow) / math.log(c)
    return C, d


# --------------------------------------------------------------------------
# reports


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass(frozen=True)
class Instance:
    label: str
    lhs: float
    rhs: float
    rel: float = 0.0
    abs: float = 0.0

    @property
    def margin(self) -> float:
        return self.lhs - (self.rhs * (1.0 + self.rel) + self.abs)

    @property
    def ok(self) -> bool:
        return self.margin <= 0.0

    def describe(self) -> dict:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rel_slack": self.rel,
            "abs_slack": self.abs,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    inputs: dict
    lhs: float | None
    rhs: float | None
    rel_slack: float
    abs_slack: float
    verdict: str  # pass | fail | hypothesis-fail | out-of-scope
    instances: tuple = ()
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True unless the theorem itself was contradicted."""
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "check_id": self.check_id,
                "inputs": self.inputs,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "rel_slack": self.rel_slack,
                "abs_slack": self.abs_slack,
                "verdict": self.verdict,
                "instances": [i.describe() for i in self.instances],
                "witness": self.witness,
                "details": self.details,
            }
        )


def _report(check_id, inputs, instances, witness_of=None, details=None) -> CheckReport:
    if not instances:
        raise ValueError(f"{check_id}: no instances to check")
    worst = max(instances, key=lambda i: i.margin)
    ok = all(i.ok for i in instances)
    witness = None
    if not ok and witness_of is not None:
        witness = witness_of(worst)
    return CheckReport(
        check_id=check_id,
        inputs=inputs,
        lhs=worst.lhs,
        rhs=worst.rhs,
        rel_slack=worst.rel,
        abs_slack=worst.abs,
        verdict="pass" if ok else "fail",
        instances=tuple(instances),
        witness=witness,
        details=details or {},
    )


def _gated(check_id, inputs, reason, details=None, verdict="hypothesis-fail") -> CheckReport:
    d = {"reason": reason}
    d.update(details or {})
    return CheckReport(check_id, inputs, None, None, 0.0, 0.0, verdict, details=d)


# --------------------------------------------------------------------------
# profiles


class Profile:
    """Lazily computed estimates of one basis on one grid."""

    def __init__(self, basis: Basis, grid, budget=None, seed=0, workers=1, scale_set=DEFAULT_SCALES):
        self.basis = basis
        self.grid = grid if isinstance(grid, GridSpec) else GridSpec(int(grid))
        self.m = self.grid.m
        self.p = basis.space.p
        self.budget, self.seed, self.workers = budget, seed, workers
        self.scale_set = scale_set
        self._memo: dict = {}

    @property
    def basis_id(self) -> str:
        return self.basis.name or self.basis.key

    @property
    def levels(self) -> tuple:
        return self.grid.levels

    def _kw(self):
        return dict(budget=self.budget, seed=self.seed, workers=self.workers)

    def estimates(self, quantity) -> dict:
        if quantity not in self._memo:
            self._memo[quantity] = level_estimates(self.basis, quantity, self.grid, **self._kw())
        return self._memo[quantity]

    def value(self, quantity, a) -> float:
        a = Fraction(a)
        table = self.estimates(quantity)
        if a not in table:
            raise ValueError(f"level {a} is not on the grid with denominator {self.m}")
        return table[a].value

    def table(self, quantity) -> dict:
        return {a: e.value for a, e in self.estimates(quantity).items()}

    def scalar_estimate(self, quantity) -> Estimate:
        if quantity not in self._memo:
            if quantity == "gamma":
                e = estimate_gamma(self.basis, self.grid, **self._kw())
            elif quantity == "one_sign":
                e = estimate_one_sign_K(self.basis, self.grid, **self._kw())
            elif quantity == "one_sign_ind":
                e = estimate_one_sign_K(self.basis, 1, **self._kw())
            elif quantity == "succ":
                e = estimate_succ(self.basis, self.grid, **self._kw())
            elif quantity == "qglc_v":
                e = estimate_qglc_v(self.basis, self.grid, self.scale_set, **self._kw())
            else:
                raise MissingEstimateError(quantity)
            self._memo[quantity] = e
        return self._memo[quantity]

    def scalar(self, quantity) -> float:
        return self.scalar_estimate(quantity).value

    def witness(self, quantity, a=None) -> dict | None:
        if quantity in ("phi", "theta", "lambda", "rho"):
            e = self.estimates(quantity)[Fraction(a)]
        else:
            e = self.scalar_estimate(quantity)
        return {"quantity": quantity, "level": e.level, "value": e.value, **e.witness.describe()}

    def inputs(self, **extra) -> dict:
        out = {"basis": self.basis_id, "m": self.m}
        if self.budget is not None:
            out["budget"] = self.budget
            out["seed"] = self.seed
        out.update(extra)
        return out


class TableProfile:
    """Profile backed by explicit tables ``{level: value}`` and scalars."""

    def __init__(self, p: float, tables: dict | None = None, scalars: dict | None = None,
                 basis_id: str = "table", m: int | None = None):
        self.p = p
        self.m = m
        self.basis_id = basis_id
        self._tables = {q: {Fraction(a): float(v) for a, v in t.items()} for q, t in (tables or {}).items()}
        self._scalars = dict(scalars or {})
        levels = set()
        for t in self._tables.values():
            levels |= set(t)
        self.levels = tuple(sorted(levels))

    @classmethod
    def from_estimates(cls, p: float, estimates, basis_id: str = "estimates") -> "TableProfile":
        """Collect estimates that must all come from the same grid."""
        estimates = list(estimates)
        grids = {e.mode.m for e in estimates if e.quantity != "succ"}
        if len(grids) > 1:
            raise IncomparableInputsError(f"estimates come from different grids: {sorted(grids)}")
        tables, scalars = {}, {}
        for e in estimates:
            if e.quantity in ("phi", "theta", "lambda", "rho"):
                tables.setdefault(e.quantity, {})[e.level] = e.value
            else:
                scalars[e.quantity] = e.value
        return cls(p, tables, scalars, basis_id=basis_id, m=grids.pop() if grids else None)

    def value(self, quantity, a) -> float:
        try:
            return self._tables[quantity][Fraction(a)]
        except KeyError:
            raise MissingEstimateError(f"{quantity} at level {a}") from None

    def table(self, quantity) -> dict:
        if quantity not in self._tables:
            raise MissingEstimateError(quantity)
        return dict(self._tables[quantity])

    def scalar(self, quantity) -> float:
        if quantity not in self._scalars:
            raise MissingEstimateError(quantity)
        return self._scalars[quantity]

    def witness(self, quantity, a=None):
        return None

    def inputs(self, **extra) -> dict:
        out = {"basis": self.basis_id, "m": self.m}
        out.update(extra)
        return out


def _profile(source, grid=None, budget=None, seed=0, workers=1):
    if isinstance(source, (Profile, TableProfile)):
        return source
    if isinstance(source, Basis):
        if grid is None:
            raise ValueError("a grid is needed to estimate from a basis")
        return Profile(source, grid, budget=budget, seed=seed, workers=workers)
    raise TypeError(f"expected a Basis or a profile, got {type(source).__name__}")


def _on_levels(prof, x) -> Fraction:
    x = Fraction(x)
    if x not in prof.levels:
        raise ValueError(f"level {x} is not on the grid")
    return x


def _powers_on_grid(prof, a, n) -> list:
    a = Fraction(a)
    out = []
    for k in range(1, n + 1):
        if a**k not in prof.levels:
            raise ValueError(f"power {a}^{k} = {a**k} is off the grid")
        out.append(a**k)
    return out


# --------------------------------------------------------------------------
# level one


def check_level_one(source, grid=None, **kw) -> CheckReport:
    """Level-one identities between phi, theta, lambda, rho and gamma.

    ``theta``, ``lambda`` and ``rho`` at level 1 must coincide exactly and
    all five values must agree within ``IDENTITY_SLACK``.  A grid cannot
    move a coefficient of modulus 1 by less than ``1/m``, so ``theta(1)``
    can stay below ``phi(1)`` on conditional bases; that gap is reported
    in the details and makes the check fail.
    """
    prof = _profile(source, grid, **kw)
    one = Fraction(1)
    phi, theta = prof.value("phi", one), prof.value("theta", one)
    lam, rho = prof.value("lambda", one), prof.value("rho", one)
    gamma = prof.scalar("gamma")
    inst = [
        Instance("|theta(1) - lambda(1)|", abs(theta - lam), 0.0),
        Instance("|theta(1) - rho(1)|", abs(theta - rho), 0.0),
        Instance("|phi(1) - gamma|", abs(phi - gamma), 0.0, abs=IDENTITY_SLACK),
        Instance("|phi(1) - theta(1)|", abs(phi - theta), 0.0, abs=IDENTITY_SLACK),
    ]
    details = {
        "values": {"phi": phi, "theta": theta, "lambda": lam, "rho": rho, "gamma": gamma},
        "grid_gap_phi_minus_theta": phi - theta,
    }
    return _report("level-one", prof.inputs(), inst, details=details)


# --------------------------------------------------------------------------
# submultiplicativity


def check_morebounds(source, a, b, grid=None, **kw) -> tuple:
    """Three reports (phi, theta, rho) for the level-product bounds at ``(a, b)``."""
    prof = _profile(source, grid, **kw)
    a, b = _on_levels(prof, a), _on_levels(prof, b)
    ab = _on_levels(prof, a * b)
    p = prof.p
    rel, ab_slack = (0.0, IDENTITY_SLACK) if b == 1 else (CHAIN_SLACK, 0.0)
    q = 1.0 - float(b)
    th_b = prof.value("theta", b)
    grow = 1.0 + q**p * th_b**p
    rhs_phi = (q**p * prof.value("phi", b) ** p + prof.value("phi", a) ** p * grow) ** (1 / p)
    rhs_theta = (q**p * th_b**p + prof.value("theta", a) ** p * grow) ** (1 / p)
    rhs_rho = prof.value("rho", a) * (1.0 + (q * th_b) ** p) ** (1 / p)
    out = []
    for name, rhs in (("phi", rhs_phi), ("theta", rhs_theta), ("rho", rhs_rho)):
        inst = [Instance(f"{name}({ab}) at a={a}, b={b}", prof.value(name, ab), rhs, rel, ab_slack)]
        out.append(
            _report(
                f"morebounds-{name}",
                prof.inputs(a=a, b=b),
                inst,
                witness_of=lambda i, name=name: prof.witness(name, ab),
            )
        )
    return tuple(out)


def check_morebounds_all(source, grid=None, **kw) -> tuple:
    """Level-product bounds at every on-grid ``(a, b)`` with ``ab`` on the grid."""
    prof = _profile(source, grid, **kw)
    levels = set(prof.levels)
    by_name = {"phi": [], "theta": [], "rho": []}
    for a in prof.levels:
        for b in prof.levels:
            if a * b in levels:
                for rep in check_morebounds(prof, a, b):
                    by_name[rep.check_id.split("-")[1]].extend(rep.instances)
    return tuple(
        _report(f"morebounds-{name}", prof.inputs(), inst) for name, inst in by_name.items()
    )


# --------------------------------------------------------------------------
# growth lemma and the power bound


def _match(table: dict, t: Fraction):
    for k, v in table.items():
        if math.isclose(float(k), float(t), rel_tol=1e-12, abs_tol=0.0):
            return v
    return None


def check_growth_lemma(table: dict, a, C: float, D: float) -> CheckReport:
    """Power-law envelope for a tabulated non-increasing ``f`` with ``f(a^n) <= C + D f(a^(n-1))``.

    ``table`` maps points of ``(0, 1]`` to values; it must contain ``1`` and
    the powers of ``a`` down to the smallest tabulated point.
    """
    a = Fraction(a)
    inputs = {"a": a, "C": C, "D": D, "points": len(table)}
    if not 0 < a < 1 or not D > 1 or C < 0:
        raise ValueError("need 0 < a < 1, D > 1 and C >= 0")
    pts = sorted((Fraction(k), float(v)) for k, v in table.items())
    if not pts or pts[-1][0] != 1 or pts[0][0] <= 0:
        raise ValueError("table must live in (0, 1] and contain the point 1")
    for (s, fs), (t, ft) in zip(pts, pts[1:]):
        if ft > fs:
            return _gated("growth-lemma", inputs, f"table increases between {s} and {t}")
    f1 = pts[-1][1]
    prev, k = f1, 1
    while a ** (k - 1) > pts[0][0]:
        cur = _match(table, a**k)
        if cur is None:
            return _gated("growth-lemma", inputs, f"power a^{k} missing from the table")
        if cur > (C + D * prev) * (1 + 1e-12):
            return _gated(
                "growth-lemma", inputs, f"f(a^{k}) = {cur} exceeds C + D f(a^{k - 1}) = {C + D * prev}"
            )
        prev, k = cur, k + 1
    expo = math.log(D) / math.log(float(a))
    shift = C / (D - 1.0)
    inst = [
        Instance(f"t={t}", ft + shift, D * (f1 + shift) * float(t) ** expo, abs=IDENTITY_SLACK)
        for t, ft in pts
    ]
    return _report("growth-lemma", inputs, inst)


def check_phi_power_bound(source, grid=None, c=Fraction(1, 2), **kw) -> CheckReport:
    """``phi(a) <= C a^-d`` at every on-grid level with ``(C, d)`` computed from ``phi(c)``, ``phi(1)``."""
    prof = _profile(source, grid, **kw)
    c = _on_levels(prof, c)
    C, d = lemma24_constants(prof.p, c, prof.value("phi", c), prof.value("phi", 1))
    inst = [
        Instance(f"a={a}", prof.value("phi", a), C * float(a) ** (-d), rel=CHAIN_SLACK)
        for a in prof.levels
    ]
    return _report("lemma24", prof.inputs(c=c), inst, details={"C": C, "d": d})


def check_nu_level(source, grid=None, **kw) -> CheckReport:
    """Level-``a`` bound ``phi(a) <= 2^(1/p) C1 gamma`` for ``a`` near 1.

    ``C1`` is taken as ``A_p`` times the SUCC constant, a heuristic
    stand-in for a constant that has no closed form.  Levels ``a < 1`` with
    ``C1^(2p) gamma^p (1-a)^p / a^p <= 1/2`` are checked.
    """
    prof = _profile(source, grid, **kw)
    p = prof.p
    pack = ConstantPack.build(p, succ=prof.scalar("succ"))
    gamma = prof.scalar("gamma")
    C1 = pack.C1
    admissible = [
        a for a in prof.levels
        if a < 1 and C1 ** (2 * p) * gamma**p * (1 - float(a)) ** p / float(a) ** p <= 0.5
    ]
    inputs = prof.inputs()
    if not admissible:
        return _gated("nu-level", inputs, "no on-grid level below 1 is close enough to 1", {"C1": C1})
    bound = 2 ** (1 / p) * C1 * gamma
    inst = [Instance(f"a={a}", prof.value("phi", a), bound, abs=IDENTITY_SLACK) for a in admissible]
    return _report("nu-level", inputs, inst, details={"C1": C1, "gamma": gamma})


# --------------------------------------------------------------------------
# chains, Lipschitz bounds, monotone products


def check_scale_chain(source, grid=None, **kw) -> CheckReport:
    """``rho <= lambda``, ``theta <= phi`` and ``lambda <= A_p phi`` at every level."""
    prof = _profile(source, grid, **kw)
    A_p = ConstantPack.build(prof.p).A_p
    inst = []
    for a in prof.levels:
        rho, lam = prof.value("rho", a), prof.value("lambda", a)
        th, phi = prof.value("theta", a), prof.value("phi", a)
        inst += [
            Instance(f"rho<=lambda a={a}", rho, lam),
            Instance(f"theta<=phi a={a}", th, phi),
            Instance(f"lambda<=A_p phi a={a}", lam, A_p * phi, rel=1e-9),
        ]
    return _report("scale", prof.inputs(), inst)


def check_lipschitz(source, grid=None, c=None, d_level=Fraction(1), **kw) -> CheckReport:
    """Increments of phi, theta and rho on ``[c, d]`` against their p-Lipschitz bounds.

    For ``p = 1`` and ``d = 1`` the gamma-based Lipschitz bounds on
    ``[c, 1]`` are checked as well.
    """
    prof = _profile(source, grid, **kw)
    p = prof.p
    c = _on_levels(prof, c if c is not None else prof.levels[0])
    d = _on_levels(prof, d_level)
    if not c < d:
        raise ValueError("need c < d")
    r = _on_levels(prof, c / d)
    val = prof.value
    phi_c, th_c, rho_c = val("phi", c), val("theta", c), val("rho", c)
    phi_r, th_r = val("phi", r), val("theta", r)
    bounds = {
        "phi": (phi_c ** (1 - p) * phi_r**p + phi_c * th_r**p) / (p * float(c) ** p),
        "theta": th_r**p * (th_c ** (1 - p) + th_c) / (p * float(c) ** p),
        "rho": rho_c * th_r**p / (p * float(c) ** p),
    }
    window = [a for a in prof.levels if c <= a <= d]
    inst = []
    for name, L in bounds.items():
        for s, t in combinations(window, 2):
            inc = abs(val(name, t) - val(name, s))
            inst.append(Instance(f"{name} [{s},{t}]", inc, L * float(t - s) ** p, abs=CHAIN_SLACK))
    details = {"bounds": bounds}
    if p == 1 and d == 1:
        gamma = prof.scalar("gamma")
        cor = {
            "phi": gamma * (1 + phi_c) / float(c),
            "theta": gamma * (1 + th_c) / float(c),
            "rho": gamma * rho_c / float(c),
        }
        for name, L in cor.items():
            for s, t in combinations(window, 2):
                inc = abs(val(name, t) - val(name, s))
                inst.append(Instance(f"{name} gamma-Lip [{s},{t}]", inc, L * float(t - s), abs=CHAIN_SLACK))
        details["gamma_bounds"] = cor
    return _report("lipschitz", prof.inputs(c=c, d=d), inst, details=details)


def _require_banach(prof, check_id):
    if prof.p != 1:
        raise OutOfScopeError(f"{check_id} holds for Banach spaces only (p = 1), got p = {prof.p}")


def check_monotone_products(source, grid=None, **kw) -> CheckReport:
    """Monotonicity of ``(phi+1) a^G``, ``(theta+1) a^G``, ``rho a^G`` and the derived envelopes."""
    prof = _profile(source, grid, **kw)
    _require_banach(prof, "monotone")
    G = prof.scalar("gamma")
    inst = []
    prods = {
        "(phi+1)a^G": lambda a: (prof.value("phi", a) + 1) * float(a) ** G,
        "(theta+1)a^G": lambda a: (prof.value("theta", a) + 1) * float(a) ** G,
        "rho a^G": lambda a: prof.value("rho", a) * float(a) ** G,
    }
    for name, fn in prods.items():
        for s, t in combinations(prof.levels, 2):
            inst.append(Instance(f"{name} at {s} <= at {t}", fn(s), fn(t), abs=CHAIN_SLACK))
    for a in prof.levels:
        x = float(a)
        inst.append(Instance(f"phi envelope a={a}", prof.value("phi", a), (G + 1) / x**G - 1, abs=CHAIN_SLACK))
        inst.append(Instance(f"rho envelope a={a}", prof.value("rho", a), G / x**G, abs=CHAIN_SLACK))
    return _report("monotone", prof.inputs(), inst, details={"gamma": G})


# --------------------------------------------------------------------------
# one-sign criteria


def check_one_sign(source, grid=None, **kw) -> CheckReport:
    """``gamma <= 2 B_p 2^(1/p) K`` where ``K`` is the all-plus-signs constant."""
    prof = _profile(source, grid, **kw)
    pack = ConstantPack.build(prof.p, one_sign_K=prof.scalar("one_sign"))
    inst = [Instance("gamma <= L", prof.scalar("gamma"), pack.L, abs=IDENTITY_SLACK)]
    return _report("one-sign", prof.inputs(), inst, details={"K": pack.one_sign_K, "L": pack.L})


def check_succ_remark(source, grid=None, **kw) -> CheckReport:
    """SUCC constant against the all-plus-signs constant over indicator perturbations.

    Indicator perturbations ``1_{eps,B}`` with ``B`` disjoint from ``A`` are
    exactly the off-``A`` vectors of the grid with denominator 1.
    """
    if isinstance(source, Basis):
        prof = _profile(source, 1 if grid is None else grid, **kw)
    else:
        prof = _profile(source, grid, **kw)
    K_ind = prof.scalar("one_sign_ind")
    pack = ConstantPack.build(prof.p, one_sign_K=K_ind)
    inst = [Instance("succ <= L_ind", prof.scalar("succ"), pack.L, abs=IDENTITY_SLACK)]
    return _report("succ-remark", prof.inputs(), inst, details={"K_ind": K_ind, "L_ind": pack.L})


# --------------------------------------------------------------------------
# growth chains


def check_sumc(source, grid=None, a=Fraction(1, 2), n=2, **kw) -> CheckReport:
    """``phi(a^n) <= (C1/a) (sum_k rho^p(a^k))^(1/p)`` with ``C1 = A_p * SUCC``."""
    prof = _profile(source, grid, **kw)
    a = _on_levels(prof, a)
    powers = _powers_on_grid(prof, a, n)
    p = prof.p
    C1 = ConstantPack.build(p, succ=prof.scalar("succ")).C1
    total = sum(prof.value("rho", t) ** p for t in powers) ** (1 / p)
    inst = [Instance(f"phi({a**n})", prof.value("phi", a**n), C1 / float(a) * total, rel=CHAIN_SLACK)]
    return _report(
        "sumc", prof.inputs(a=a, n=n), inst,
        witness_of=lambda i: prof.witness("phi", a**n), details={"C1": C1},
    )


def check_anso8(source, grid=None, a=Fraction(1, 4), b=Fraction(1, 2), **kw) -> CheckReport:
    """``phi(a) <= (2^(1/p) C1 theta(b) / b) (1 + log_b a)^(1/p) rho(a)``."""
    prof = _profile(source, grid, **kw)
    a, b = _on_levels(prof, a), _on_levels(prof, b)
    if not b < 1:
        raise ValueError("b must be below 1")
    p = prof.p
    C1 = ConstantPack.build(p, succ=prof.scalar("succ")).C1
    factor = 2 ** (1 / p) * C1 * prof.value("theta", b) / float(b)
    logs = 1 + math.log(float(a)) / math.log(float(b))
    rhs = factor * logs ** (1 / p) * prof.value("rho", a)
    inst = [Instance(f"phi({a})", prof.value("phi", a), rhs, rel=CHAIN_SLACK)]
    return _report(
        "anso8", prof.inputs(a=a, b=b), inst,
        witness_of=lambda i: prof.witness("phi", a), details={"C1": C1},
    )


def _level_at_or_below(levels, x: float):
    below = [t for t in levels if float(t) <= x * (1 + 1e-12)]
    return max(below) if below else None


def check_claim34(source, grid=None, a=Fraction(1, 2), n=2, C2=1.0, M=1.5, C1=None, **kw) -> CheckReport:
    """Finite step of the rho/phi growth comparison, gated on its two hypotheses.

    ``rho`` at the non-grid level ``a^(alpha (n-1))`` is read at the
    nearest tabulated level at or below it.
    """
    prof = _profile(source, grid, **kw)
    p = prof.p
    a = Fraction(a)
    inputs = prof.inputs(a=a, n=n, C2=C2, M=M)
    if not 0 < a < 1 or not M > 1 or not C2 > 0:
        raise ValueError("need 0 < a < 1, M > 1 and C2 > 0")
    if C1 is None:
        C1 = ConstantPack.build(p, succ=prof.scalar("succ")).C1
    an = _on_levels(prof, a**n)
    alpha = 1 - 1 / M
    if n < 2 * M - 1:
        return _gated("claim34", inputs, f"n = {n} is below 2M - 1 = {2 * M - 1}")
    lhs1 = -2 * C1**p * C2**p / (float(a) ** p * math.log(float(a)) * M)
    if lhs1 > 1 - 2.0**-p:
        return _gated("claim34", inputs, f"first hypothesis: {lhs1} > {1 - 2.0 ** -p}")
    phi_an = prof.value("phi", an)
    lhs2 = (-math.log(float(an))) ** (1 / p) * prof.value("rho", an)
    if lhs2 > C2 * phi_an:
        return _gated("claim34", inputs, f"second hypothesis: {lhs2} > {C2 * phi_an}")
    target = float(a) ** (alpha * (n - 1))
    lev = _level_at_or_below(prof.levels, target)
    if lev is None:
        return _gated("claim34", inputs, f"no tabulated level at or below {target}", verdict="out-of-scope")
    rhs = 2 * alpha ** (1 / p) * C1 / float(a) * (n - 1) ** (1 / p) * prof.value("rho", lev)
    inst = [Instance(f"phi({an})", phi_an, rhs, rel=CHAIN_SLACK)]
    return _report("claim34", inputs, inst, details={"C1": C1, "alpha": alpha, "rho_level": lev})


def sweep_claim34(source, grid=None, C2_values=(0.05, 0.1, 0.5, 1.0, 2.0, 5.0),
                  M_values=(1.25, 1.5, 2.0, 3.0), **kw) -> list:
    """Run the claim for every on-grid base ``a < 1``, on-grid power and parameter pair."""
    prof = _profile(source, grid, **kw)
    out = []
    levels = set(prof.levels)
    for a in prof.levels:
        if a == 1:
            continue
        n = 1
        while a ** (n + 1) in levels:
            n += 1
            for C2 in C2_values:
                for M in M_values:
                    out.append(check_claim34(prof, a=a, n=n, C2=C2, M=M))
    return out


def check_prop35(source, grid=None, c=Fraction(1, 2), C=2.0, variant="rho", d=None, **kw) -> CheckReport:
    """Geometric-sum hypothesis on ``psi(c^k)`` and the resulting bound of ``phi`` by ``psi``.

    ``psi`` is rho or theta.  The constant ``K`` with
    ``rho(c^(n+1)) <= K psi(c^(n-1))`` is built from the rho product bound
    for ``psi = rho`` and read off the tables for ``psi = theta``.  When
    ``d`` is given, the essentially-decreasing condition on ``a^d psi(a)``
    is measured and its implied geometric-sum constant is checked too.
    """
    if variant not in ("rho", "theta"):
        raise ValueError("variant must be 'rho' or 'theta'")
    prof = _profile(source, grid, **kw)
    p = prof.p
    c = _on_levels(prof, c)
    if not c < 1:
        raise ValueError("c must be below 1")
    levels = set(prof.levels)
    top = 0
    while c ** (top + 1) in levels:
        top += 1
    if top < 2:
        raise ValueError(f"c^2 = {c**2} is off the grid")
    psi = lambda t: prof.value(variant, t)  # noqa: E731
    inputs = prof.inputs(c=c, C=C, variant=variant, d=d)
    # hypothesis for every n with c^(n+1) on the grid
    for n in range(1, top):
        lhs = sum(psi(c**k) ** p for k in range(1, n + 1)) ** (1 / p)
        if lhs > C * psi(c ** (n + 1)) * (1 + 1e-12):
            return _gated("prop35", inputs, f"n={n}: {lhs} > C psi(c^{n + 1}) = {C * psi(c ** (n + 1))}")
    if variant == "rho":
        K = (1 + ((1 - float(c)) * prof.value("theta", c)) ** p) ** (2 / p)
    else:
        K = max(prof.value("rho", c ** (n + 1)) / psi(c ** (n - 1)) for n in range(1, top))
    C1 = ConstantPack.build(p, succ=prof.scalar("succ")).C1
    rho_c, rho_c2 = prof.value("rho", c), prof.value("rho", c**2)
    inst = []
    for a in prof.levels:
        rhs = (C1**p / float(c) ** p * (rho_c**p + rho_c2**p + K**p * C**p * psi(a) ** p)) ** (1 / p)
        inst.append(Instance(f"phi({a})", prof.value("phi", a), rhs, rel=CHAIN_SLACK))
    details = {"K": K, "C1": C1, "powers": top}
    if d is not None:
        D = max(
            (float(t) ** d * psi(t)) / (float(s) ** d * psi(s))
            for s in prof.levels for t in prof.levels if s <= t
        )
        implied = D * float(c) ** d / (1 - float(c) ** (d * p)) ** (1 / p)
        details.update({"D": D, "implied_C": implied})
        for n in range(1, top):
            lhs = sum(psi(c**k) ** p for k in range(1, n + 1)) ** (1 / p)
            inst.append(Instance(f"essentially decreasing => sum n={n}", lhs,
                                 implied * psi(c ** (n + 1)), rel=1e-9))
    return _report("prop35", inputs, inst, details=details)


# --------------------------------------------------------------------------
# isometric characterisation


def check_lemma41(space: QuasiNormedSpace, family, lambdas) -> CheckReport:
    """``||sum x_n|| <= ||sum lambda_n x_n||`` for ``lambda_n >= 1`` under subset domination."""
    if space.p != 1:
        raise OutOfScopeError("the scaling lemma is stated for Banach spaces (p = 1)")
    X = np.atleast_2d(np.asarray(family, dtype=float))
    lam = np.asarray(lambdas, dtype=float)
    if X.shape[1] != space.dim or len(lam) != len(X):
        raise ValueError("family and multipliers do not match the space")
    if np.any(lam < 1):
        raise ValueError("multipliers must be at least 1")
    inputs = {"dim": space.dim, "size": len(X), "lambdas": lam.tolist()}
    full = float(space.norm(X.sum(axis=0)))
    n = len(X)
    masks = np.array([[(s >> i) & 1 for i in range(n)] for s in range(1 << n)], dtype=float)
    sub = space.norm(masks @ X)
    if np.any(sub > full * (1 + 1e-12) + 1e-12):
        return _gated("lemma41", inputs, "a sub-sum is larger than the full sum")
    inst = [Instance("scaled sum", full, float(space.norm(lam @ X)), abs=IDENTITY_SLACK)]
    return _report("lemma41", inputs, inst)


def check_prop42(source, grid=None, **kw) -> CheckReport:
    """The five isometric constants must all be ``<= 1`` or all be ``> 1``."""
    prof = _profile(source, grid, **kw)
    _require_banach(prof, "prop42")
    lam = prof.table("lambda")
    rho = prof.table("rho")
    consts = {
        "Lambda": max(lam.values()),
        "max_lambda": max(lam.values()),
        "max_rho": max(rho.values()),
        "gamma": prof.scalar("gamma"),
        "qglc_v": prof.scalar("qglc_v"),
    }
    flags = {k: v <= 1 + ONE_TOL for k, v in consts.items()}
    agree = len(set(flags.values())) == 1
    inst = [Instance("booleans agree", 0.0 if agree else 1.0, 0.0)]
    return _report(
        "prop42", prof.inputs(), inst, details={"constants": consts, "at_most_one": flags}
    )


# --------------------------------------------------------------------------
# suites


def _suite_lemma41(prof):
    # a deterministic family for catalog runs: the columns of the basis itself
    basis = prof.basis
    X = basis.B.T
    rng = np.random.default_rng(0)
    return [check_lemma41(basis.space, X, 1 + 3 * rng.random(len(X)))]


def _claim34_summary(prof):
    reps = sweep_claim34(prof)
    return reps if reps else [
        _gated("claim34", prof.inputs(), "no base level has two on-grid powers")
    ]


def _levels_exist(prof, *xs):
    return all(Fraction(x) in prof.levels for x in xs)


def _sumc_suite(prof):
    if _levels_exist(prof, Fraction(1, 2), Fraction(1, 4)):
        return [check_sumc(prof, a=Fraction(1, 2), n=2)]
    return [check_sumc(prof, a=prof.levels[0], n=1)]


def _anso8_suite(prof):
    if _levels_exist(prof, Fraction(1, 2), Fraction(1, 4)):
        return [check_anso8(prof, a=Fraction(1, 4), b=Fraction(1, 2))]
    b = prof.levels[0] if prof.levels[0] < 1 else None
    if b is None:
        return [_gated("anso8", prof.inputs(), "grid has no level below 1", verdict="out-of-scope")]
    return [check_anso8(prof, a=b, b=b)]


def _lemma24_suite(prof):
    c = Fraction(1, 2) if Fraction(1, 2) in prof.levels else prof.levels[0]
    if c == 1:
        return [_gated("lemma24", prof.inputs(), "grid has no level below 1", verdict="out-of-scope")]
    return [check_phi_power_bound(prof, c=c)]


def _lipschitz_suite(prof):
    if prof.levels[0] == 1:
        return [_gated("lipschitz", prof.inputs(), "grid has no level below 1", verdict="out-of-scope")]
    return [check_lipschitz(prof, c=prof.levels[0])]


def _prop35_suite(prof):
    c = Fraction(1, 2)
    if not _levels_exist(prof, c, c * c):
        return [_gated("prop35", prof.inputs(), "c^2 is off the grid", verdict="out-of-scope")]
    return [check_prop35(prof, c=c, C=2.0, variant=v) for v in ("rho", "theta")]


SUITES = {
    "level-one": lambda prof: [check_level_one(prof)],
    "morebounds": lambda prof: list(check_morebounds_all(prof)),
    "lemma24": _lemma24_suite,
    "scale": lambda prof: [check_scale_chain(prof)],
    "lipschitz": _lipschitz_suite,
    "monotone": lambda prof: [check_monotone_products(prof)],
    "one-sign": lambda prof: [check_one_sign(prof)],
    "succ-remark": lambda prof: [check_succ_remark(prof)],
    "sumc": _sumc_suite,
    "anso8": _anso8_suite,
    "claim34": _claim34_summary,
    "prop35": _prop35_suite,
    "lemma41": _suite_lemma41,
    "prop42": lambda prof: [check_prop42(prof)],
}
# heuristic constant, available on request only
EXTRA_SUITES = {"nu-level": lambda prof: [check_nu_level(prof)]}
SUITE_NAMES = ("all",) + tuple(SUITES) + tuple(EXTRA_SUITES)


def run_suite(basis: Basis, suite: str, grid, budget=None, seed=0, workers=1) -> list:
    """Run one named suite (or ``all``); out-of-scope theorems become out-of-scope reports."""
    if suite not in SUITE_NAMES:
        raise KeyError(f"unknown suite {suite!r}")
    prof = Profile(basis, grid, budget=budget, seed=seed, workers=workers)
    names = list(SUITES) if suite == "all" else [suite]
    reports = []
    for name in names:
        fn = SUITES.get(name) or EXTRA_SUITES[name]
        try:
            reports.extend(fn(prof))
        except OutOfScopeError as exc:
            reports.append(_gated(name, prof.inputs(), str(exc), verdict="out-of-scope"))
    return reports
