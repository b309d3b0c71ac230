import json
from fractions import Fraction

import numpy as np
import pytest

from greedylab.catalog import (
    CSV_COLUMNS,
    CatalogError,
    ResultStore,
    builtin_entries,
    emit_curves,
    entry_from_dict,
    full_catalog,
    load_catalog,
    run_estimate,
)

CUSTOM = {
    "id": "custom-3",
    "description": "a rational custom basis",
    "space": {"dim": 3, "p": 1, "norm": {"family": "Lp", "q": "inf"}},
    "constructor": "custom",
    "matrix": [[1, "1/2", 0], [0, 1, "-1/3"], [0, 0, 1]],
}


def test_builtins():
    ents = builtin_entries()
    assert len(ents) == 25
    ids = {e.id for e in ents}
    for fam in ("l1-canonical", "l2-canonical", "lhalf-canonical", "summing", "difference"):
        for N in range(2, 7):
            assert f"{fam}-{N}" in ids


def test_summing_entry(catalog):
    e = catalog["summing-3"]
    assert e.dim == 3 and e.space.p == 1
    b = e.basis()
    # s_1 - s_2 + s_3 = (1, 0, 1) has sup norm 1
    assert b.norm(b.B @ np.array([1.0, -1.0, 1.0])) == pytest.approx(1.0)
    assert b.norm(b.B @ np.array([1.0, 0.0, 1.0])) == pytest.approx(2.0)


def test_custom_entry_round_trip(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"entries": [CUSTOM]}))
    (e,) = load_catalog(path)
    assert e.matrix[0][1] == Fraction(1, 2)
    assert e.fingerprint == entry_from_dict(json.loads(json.dumps(CUSTOM))).fingerprint
    cat = full_catalog(path)
    assert "custom-3" in cat and len(cat) == 26


def test_empty_file(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    assert load_catalog(path) == []


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('[\n  {"id": "x",\n  oops}\n]')
    with pytest.raises(CatalogError, match="line 3"):
        load_catalog(path)


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda d: d.pop("id"), "'id'"),
        (lambda d: d["space"].pop("p"), "space.p"),
        (lambda d: d.update(matrix=[[1, 0, 0], [0, 1], [0, 0, 1]]), "row 1"),
        (lambda d: d.update(matrix=[[1, 0, 0], [0, 1, 0]]), "3 rows"),
        (lambda d: d.update(matrix=[[1, 0, 0], [1, 0, 0], [0, 0, 1]]), "singular"),
        (lambda d: d["space"].update(norm={"family": "Nope"}), "unknown norm family"),
        (lambda d: d.update(constructor="weird"), "constructor"),
        (lambda d: d.update(matrix=[[1, "x", 0], [0, 1, 0], [0, 0, 1]]), "bad rational"),
    ],
)
def test_malformed_rows(mutate, message):
    d = json.loads(json.dumps(CUSTOM))
    mutate(d)
    with pytest.raises(CatalogError, match=message):
        entry_from_dict(d, 4)


def test_duplicate_and_clash(tmp_path):
    path = tmp_path / "dup.json"
    path.write_text(json.dumps([CUSTOM, CUSTOM]))
    with pytest.raises(CatalogError, match="duplicate"):
        load_catalog(path)
    clash = dict(CUSTOM, id="summing-3")
    path.write_text(json.dumps([clash]))
    with pytest.raises(CatalogError, match="clashes"):
        full_catalog(path)


def test_run_estimate_and_cache(catalog, tmp_path):
    store = ResultStore(tmp_path / "store")
    e = catalog["l1-canonical-2"]
    recs = run_estimate(e, "phi", None, 4, store=store)
    assert len(recs) == 4
    assert all(r.value == pytest.approx(1.0) and not hit for r, hit in recs)
    again = run_estimate(e, "phi", None, 4, store=store)
    assert all(hit for _, hit in again)
    assert [r.to_dict() for r, _ in again] == [r.to_dict() for r, _ in recs]
    other_seed = run_estimate(e, "phi", ["1/2"], 4, seed=9, store=store)
    assert not other_seed[0][1]


def test_cache_ignores_stale_fingerprint(tmp_path):
    store = ResultStore(tmp_path / "store")
    e1 = entry_from_dict(CUSTOM)
    run_estimate(e1, "gamma", None, 1, store=store)
    changed = json.loads(json.dumps(CUSTOM))
    changed["matrix"][0][1] = "1/4"
    e2 = entry_from_dict(changed)
    ((rec, hit),) = run_estimate(e2, "gamma", None, 1, store=store)
    assert not hit and rec.fingerprint == e2.fingerprint


def test_store_default_dir(monkeypatch, tmp_path):
    monkeypatch.setenv("GREEDYLAB_CACHE_DIR", str(tmp_path / "c"))
    assert ResultStore().root == tmp_path / "c"


def test_summing_gamma_record(catalog):
    ((rec, _),) = run_estimate(catalog["summing-3"], "gamma", None, 1)
    assert rec.value >= 2 - 1e-9
    assert rec.witness["A"]


def test_curves(catalog, tmp_path):
    out = tmp_path / "c.csv"
    text = emit_curves([catalog["summing-2"], catalog["summing-3"]], "phi", 2, out=out, envelope=True)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) + ",envelope"
    assert len(lines) == 1 + 2 * 2
    assert out.read_text() == text
    assert emit_curves([], "phi", 2).splitlines() == [",".join(CSV_COLUMNS)]
    scalar = emit_curves([catalog["summing-3"]], "gamma", 1).splitlines()
    assert scalar[1].split(",")[3] == ""


def test_curves_unknown_quantity(catalog):
    with pytest.raises(ValueError):
        emit_curves([catalog["summing-2"]], "nope", 2)
