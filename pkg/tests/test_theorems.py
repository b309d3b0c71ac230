import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab.estimate import estimate_phi, estimate_succ, estimate_theta
from greedylab.space import Lp, QuasiNormedSpace, Summing
from greedylab.theorems import (
    SUITE_NAMES,
    ConstantPack,
    IncomparableInputsError,
    MissingEstimateError,
    OutOfScopeError,
    Profile,
    TableProfile,
    check_anso8,
    check_claim34,
    check_growth_lemma,
    check_lemma41,
    check_level_one,
    check_lipschitz,
    check_monotone_products,
    check_morebounds,
    check_one_sign,
    check_phi_power_bound,
    check_prop35,
    check_prop42,
    check_scale_chain,
    check_succ_remark,
    check_sumc,
    lemma24_constants,
    run_suite,
    sweep_claim34,
)

F = Fraction


def test_constants_banach():
    pack = ConstantPack.build(1.0, one_sign_K=1.0, succ=1.0)
    assert pack.A_p == 1.0 and pack.B_p == 2.0
    assert pack.L == 8.0
    assert pack.delta == pytest.approx(1.0)
    assert pack.C1 == 1.0
    assert ConstantPack.build(1.0).L is None


def test_constants_quasi_banach():
    pack = ConstantPack.build(0.5)
    assert pack.A_p == pytest.approx((math.sqrt(2) - 1) ** 2)
    assert pack.B_p == pytest.approx(4 * pack.A_p)
    with pytest.raises(ValueError):
        ConstantPack.build(1.5)


def test_power_bound_constants_closed_form():
    C, d = lemma24_constants(1.0, F(1, 2), 1.0, 1.0)
    assert C == pytest.approx(3.0, abs=1e-12)
    assert d == pytest.approx(math.log2(1.5), abs=1e-12)
    assert d == pytest.approx(0.58496, abs=1e-5)
    with pytest.raises(ValueError):
        lemma24_constants(1.0, 1, 1.0, 1.0)


def test_growth_lemma_examples():
    a = F(1, 2)
    table = {a**k: 2.0**k for k in range(6)}  # f(a^n) = 2 f(a^(n-1))
    rep = check_growth_lemma(table, a, C=0.0, D=2.0)
    assert rep.verdict == "pass"
    # f(t) = 1/t, envelope D f(1) t^(log_a D) = 2/t
    for inst in rep.instances:
        assert inst.lhs == pytest.approx(inst.rhs / 2)
    bad = check_growth_lemma({F(1): 1.0, F(1, 2): 5.0}, a, C=0.0, D=2.0)
    assert bad.verdict == "hypothesis-fail"
    increasing = check_growth_lemma({F(1): 3.0, F(1, 2): 1.0}, a, C=0.0, D=2.0)
    assert increasing.verdict == "hypothesis-fail"
    with pytest.raises(ValueError):
        check_growth_lemma(table, a, C=0.0, D=1.0)


@settings(max_examples=1000, deadline=None)
@given(
    st.sampled_from([F(1, 2), F(1, 3), F(2, 3), F(3, 4)]),
    st.floats(0, 3),
    st.floats(1.05, 4),
    st.lists(st.floats(0, 1), min_size=1, max_size=6),
    st.floats(0.5, 3),
)
def test_growth_lemma_random_tables(a, C, D, fracs, f1):
    # build f(a^n) in [f(a^(n-1)), C + D f(a^(n-1))]
    table = {F(1): f1}
    prev = f1
    for k, u in enumerate(fracs, 1):
        prev = prev + u * (C + (D - 1) * prev)
        table[a**k] = prev
    rep = check_growth_lemma(table, a, C, D)
    assert rep.verdict == "pass", rep.to_dict()


def test_table_profile_errors(basis_of):
    b = basis_of("summing-3")
    e2 = estimate_phi(b, F(1, 2), 2)
    e4 = estimate_phi(b, F(1, 2), 4)
    with pytest.raises(IncomparableInputsError):
        TableProfile.from_estimates(1.0, [e2, e4])
    prof = TableProfile.from_estimates(1.0, [e2, estimate_theta(b, F(1, 2), 2), estimate_succ(b)])
    assert prof.m == 2
    with pytest.raises(MissingEstimateError):
        prof.value("phi", 1)
    with pytest.raises(MissingEstimateError):
        check_level_one(prof)


def test_level_one_on_catalog(basis_of):
    for ident in ("summing-3", "l2-canonical-3", "l1-canonical-2", "lhalf-canonical-3"):
        rep = check_level_one(basis_of(ident), grid=2)
        assert rep.verdict == "pass", rep.to_dict()


def test_level_one_grid_gap_fails(basis_of):
    # on m = 1 the summing basis has phi(1) = gamma = 2 but theta(1) = 1
    rep = check_level_one(basis_of("summing-3"), grid=1)
    v = rep.details["values"]
    assert v["theta"] == v["lambda"] == v["rho"] == pytest.approx(1.0)
    assert v["phi"] == pytest.approx(v["gamma"]) == pytest.approx(2.0)
    assert rep.verdict == "fail"
    assert rep.details["grid_gap_phi_minus_theta"] == pytest.approx(1.0)


def test_morebounds_b_equal_one_is_tight(basis_of):
    b = basis_of("summing-3")
    for a in (F(1, 4), F(1, 2), F(3, 4), F(1)):
        for rep in check_morebounds(b, a, 1, grid=4):
            assert rep.verdict == "pass"
            assert rep.abs_slack == 1e-9 and rep.rel_slack == 0.0


def test_morebounds_rejects_off_grid(basis_of):
    with pytest.raises(ValueError):
        check_morebounds(basis_of("summing-3"), F(1, 2), F(1, 2), grid=2)


def test_phi_power_bound_and_lipschitz(basis_of):
    for ident in ("summing-4", "difference-4"):
        prof = Profile(basis_of(ident), 4)
        assert check_phi_power_bound(prof).verdict == "pass"
        assert check_lipschitz(prof, c=F(1, 4)).verdict == "pass"
        assert check_one_sign(prof).verdict == "pass"


def test_monotone_products_banach(basis_of):
    rep = check_monotone_products(basis_of("summing-3"), grid=4)
    assert rep.verdict == "pass"
    with pytest.raises(OutOfScopeError):
        check_monotone_products(basis_of("lhalf-canonical-2"), grid=2)
    with pytest.raises(OutOfScopeError):
        check_prop42(basis_of("lhalf-canonical-2"), grid=2)


def test_scale_chain_banach(basis_of):
    assert check_scale_chain(basis_of("difference-3"), grid=4).verdict == "pass"


def test_succ_remark_default_grid(basis_of):
    rep = check_succ_remark(basis_of("summing-3"))
    assert rep.inputs["m"] == 1
    assert rep.verdict == "pass"


def test_growth_chain_checks(basis_of):
    prof = Profile(basis_of("summing-4"), 4)
    assert check_sumc(prof, a=F(1, 2), n=2).verdict == "pass"
    assert check_anso8(prof, a=F(1, 4), b=F(1, 2)).verdict == "pass"
    with pytest.raises(ValueError):
        check_sumc(prof, a=F(1, 2), n=3)


def test_growth_step_gates():
    tab = TableProfile(1.0, {"phi": {F(1): 1, F(1, 2): 1, F(1, 4): 1}, "rho": {F(1): 1, F(1, 2): 1, F(1, 4): 1}},
                       {"succ": 1.0})
    assert check_claim34(tab, a=F(1, 2), n=2, C2=1.0, M=1.5).verdict == "hypothesis-fail"
    assert check_claim34(tab, a=F(1, 2), n=1, C2=1.0, M=1.5).verdict == "hypothesis-fail"


def test_growth_step_synthetic_pass_and_fail():
    levels = [F(1, 2) ** k for k in range(4)]
    phi = {t: 2.0 for t in levels}
    rho = {t: 1.0 for t in levels}
    tab = TableProfile(1.0, {"phi": phi, "rho": rho}, {"succ": 1.0})
    # log(8) rho(1/8) = 2.08 > C2 phi(1/8) = 0.2: second hypothesis fails
    assert check_claim34(tab, a=F(1, 2), n=3, C2=0.1, M=2.0, C1=0.5).verdict == "hypothesis-fail"
    # both hypotheses hold; rho read at a^(alpha (n-1)) = 1/2, rhs = 4 C1 rho(1/2)
    rep = check_claim34(tab, a=F(1, 2), n=3, C2=2.0, M=2.0, C1=0.05)
    assert rep.verdict == "fail" and rep.rhs == pytest.approx(0.2)
    rho[F(1, 2)] = 20.0
    tab = TableProfile(1.0, {"phi": phi, "rho": rho}, {"succ": 1.0})
    rep = check_claim34(tab, a=F(1, 2), n=3, C2=2.0, M=2.0, C1=0.05)
    assert rep.verdict == "pass" and rep.details["rho_level"] == F(1, 2)


def test_growth_step_sweep_on_basis(basis_of):
    reps = sweep_claim34(basis_of("summing-3"), grid=4)
    assert reps and all(r.verdict in ("pass", "hypothesis-fail") for r in reps)


def test_geometric_sum_bound_synthetic():
    levels = [F(1, 2) ** k for k in range(5)]
    rho = {t: 2.0 ** k for k, t in enumerate(levels)}
    tables = {"rho": rho, "theta": {t: 1.0 for t in levels}, "phi": {t: 1.0 for t in levels}}
    tab = TableProfile(1.0, tables, {"succ": 1.0})
    rep = check_prop35(tab, c=F(1, 2), C=2.0, variant="rho")
    assert rep.verdict == "pass", rep.to_dict()
    assert rep.details["K"] == pytest.approx(1.5**2)


def test_geometric_sum_hypothesis_fails_for_flat(basis_of):
    rep = check_prop35(basis_of("l1-canonical-2"), grid=16, c=F(1, 2), C=2.0)
    assert rep.verdict == "hypothesis-fail"
    with pytest.raises(ValueError):
        check_prop35(basis_of("l1-canonical-2"), grid=2, c=F(1, 2))


def test_scaling_lemma_simple():
    space = QuasiNormedSpace(2, 1.0, Lp(np.inf))
    rep = check_lemma41(space, [[1, 0], [0, 1]], [2, 3])
    assert rep.verdict == "pass"
    with pytest.raises(ValueError):
        check_lemma41(space, [[1, 0]], [0.5])
    with pytest.raises(OutOfScopeError):
        check_lemma41(QuasiNormedSpace(2, 0.5, Lp(0.5)), [[1, 0]], [1])
    gated = check_lemma41(space, [[1, 0], [-1, 0]], [1, 1])
    assert gated.verdict == "hypothesis-fail"


def test_scaling_lemma_summing_norm_property():
    space = QuasiNormedSpace(3, 1.0, Summing())
    rng = np.random.default_rng(1)
    seen = 0
    for _ in range(200):
        X = rng.integers(0, 3, (3, 3))
        rep = check_lemma41(space, X, 1 + 3 * rng.random(3))
        if rep.verdict != "hypothesis-fail":
            seen += 1
            assert rep.verdict == "pass"
    assert seen > 0


def test_isometric_agreement_canonical(basis_of):
    rep = check_prop42(basis_of("l1-canonical-3"), grid=2)
    assert rep.verdict == "pass"
    assert all(rep.details["at_most_one"].values())


def test_isometric_agreement_summing_finer_grid(basis_of):
    rep = check_prop42(basis_of("summing-3"), grid=2)
    assert rep.verdict == "pass", rep.details
    assert not any(rep.details["at_most_one"].values())


def test_reports_deterministic_and_json(basis_of):
    import json

    b = basis_of("difference-3")
    r1 = [r.to_dict() for r in run_suite(b, "all", 2)]
    r2 = [r.to_dict() for r in run_suite(b, "all", 2)]
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_run_suite_scope_and_names(basis_of):
    reps = run_suite(basis_of("lhalf-canonical-2"), "monotone", 2)
    assert [r.verdict for r in reps] == ["out-of-scope"]
    with pytest.raises(KeyError):
        run_suite(basis_of("summing-2"), "bogus", 2)
    assert "all" in SUITE_NAMES and "nu-level" in SUITE_NAMES
    nu = run_suite(basis_of("summing-3"), "nu-level", 4)
    assert nu[0].check_id == "nu-level"


def test_scaling_lemma_disjoint_l1():
    space = QuasiNormedSpace(3, 1.0, Lp(1.0))
    rep = check_lemma41(space, [[1, 2, 0], [0, 0, 3]], [2, 3])
    assert rep.verdict == "pass"
    assert rep.lhs == pytest.approx(6.0) and rep.rhs == pytest.approx(15.0)
