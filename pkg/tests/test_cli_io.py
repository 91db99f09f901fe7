import csv
import io
import json

import pytest

from latpoly.cli_io import RunManifest, TableKey, TableStore, manifest_id
from latpoly.cli_io.cli import main, parse_grid, parse_ints
from latpoly.enumeration import HALF_SPACE, TRANSLATION_CLASSES, EnsembleSpec
from latpoly.errors import TableChecksumError, TableConflictError


def _tree_table(max_n=8):
    store = TableStore()
    for n in range(1, max_n + 1):
        store.count(EnsembleSpec("tree", 2, n, TRANSLATION_CLASSES))
    return store


def test_table_roundtrip(tmp_path):
    store = _tree_table()
    store.put(TableKey("walk", "-", 2, 40, "contains-origin"), 10**40 + 7)
    path = store.save(tmp_path / "t.txt")
    back = TableStore.load(path)
    assert back.data == store.data
    assert back.dumps() == store.dumps()


def test_table_checksum_refuses_tampering(tmp_path):
    path = _tree_table(4).save(tmp_path / "t.txt")
    text = path.read_text().replace("translation-classes count 22", "translation-classes count 23")
    path.write_text(text)
    with pytest.raises(TableChecksumError):
        TableStore.load(path)
    path.write_text("garbage\n")
    with pytest.raises(TableChecksumError):
        TableStore.load(path)


def test_table_conflict():
    a, b = TableStore(), TableStore()
    key = TableKey("tree", "site", 2, 3, TRANSLATION_CLASSES)
    a.put(key, 6)
    b.put(key, 7)
    with pytest.raises(TableConflictError):
        a.merge(b)
    with pytest.raises(TableConflictError):
        a.put(key, 5)
    c = TableStore()
    c.put(key, 6)
    a.merge(c)
    assert a.get(key) == 6


def test_compute_on_miss_persists(tmp_path):
    path = tmp_path / "counts.txt"
    store = TableStore(path)
    assert store.count(EnsembleSpec("tree", 2, 5, TRANSLATION_CLASSES)) == 87
    assert store.profile(EnsembleSpec("tree", 2, 2, HALF_SPACE)) == (0, 1, 2)
    again = TableStore(path)
    assert again.get(TableKey("tree", "site", 2, 5, TRANSLATION_CLASSES)) == 87
    assert again.get(TableKey("tree", "site", 2, 2, HALF_SPACE, "left[2]")) == 2


def test_manifest_id_ignores_execution_flags():
    cfg = {"model": "walk", "n": 4, "threads": 1, "out": "a.csv"}
    assert manifest_id("enumerate", cfg) == manifest_id("enumerate", {**cfg, "threads": 8, "out": "b"})
    assert manifest_id("enumerate", cfg) != manifest_id("enumerate", {**cfg, "n": 5})
    m = RunManifest("enumerate", ("--n", "4"), cfg, "0", None, "ln", (0,))
    assert json.loads(m.to_json())["id"] == m.id


def test_grid_parsing():
    assert parse_grid("0.1,0.5") == [0.1, 0.5]
    assert parse_grid("-1:1:3") == [-1.0, 0.0, 1.0]
    assert parse_ints("2,5-7") == [2, 5, 6, 7]


def _run(capsys, tmp_path, *argv):
    code = main([*argv, "--manifest-dir", str(tmp_path / "runs")])
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_cli_enumerate(capsys, tmp_path):
    code, out, err = _run(capsys, tmp_path, "enumerate", "--model", "walk", "--dim", "2", "--n", "4")
    assert code == 0
    rows = _rows(out)
    assert rows[0]["count"] == "100" and "100" in err
    manifests = list((tmp_path / "runs").glob("*.json"))
    assert len(manifests) == 1
    assert json.loads(manifests[0].read_text())["id"] == rows[0]["manifest_id"]


def test_cli_verify_single_contact(capsys, tmp_path):
    code, out, err = _run(capsys, tmp_path, "verify", "single-contact", "--dim", "2", "--n", "6")
    assert code == 0 and err.startswith("PASS single_contact")
    assert _rows(out)[0]["verdict"] == "PASS"


def test_cli_partition(capsys, tmp_path):
    code, out, _ = _run(capsys, tmp_path, "partition", "--model", "tree", "--dim", "2", "--n", "1", "--beta", "0")
    assert code == 0 and float(_rows(out)[0]["Z"]) == 1.0


def test_cli_usage_errors(capsys, tmp_path):
    assert _run(capsys, tmp_path, "enumerate", "--bogus")[0] == 1
    assert _run(capsys, tmp_path, "enumerate", "--model", "tree", "--constraint", "bridge")[0] == 1
    assert _run(capsys, tmp_path, "partition", "--model", "tree", "--weighting", "edge-contacts")[0] == 1
    assert _run(capsys, tmp_path)[0] == 1


def test_cli_resource_abort(capsys, tmp_path):
    code, _, err = _run(capsys, tmp_path, "enumerate", "--model", "tree", "--n", "9", "--limit", "20")
    assert code == 3 and "resource limit" in err


def test_cli_failing_check_exit(capsys, tmp_path):
    code, out, err = _run(capsys, tmp_path, "theorem3", "--n", "3", "--beta-grid", "0.1")
    assert code == 2 and err.startswith("FAIL")


def test_cli_out_file_and_json(capsys, tmp_path):
    target = tmp_path / "prof.json"
    code, out, _ = _run(capsys, tmp_path, "profile", "--model", "tree", "--n", "2",
                        "--constraint", "half-space", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert [r["count"] for r in data["result"]] == [0, 1, 2]
    assert (tmp_path / "prof.json.manifest.json").exists()


def test_cli_rows_carry_manifest_and_rigor(capsys, tmp_path):
    _, out, _ = _run(capsys, tmp_path, "growth", "--model", "walk", "--n", "5")
    rows = _rows(out)
    assert len({r["manifest_id"] for r in rows}) == 1
    assert all(r["rigor"] in ("exact", "rigorous-bound", "estimate") for r in rows)


def test_cli_threads_do_not_change_output(capsys, tmp_path):
    from latpoly.enumeration.ensembles import clear_cache
    outs = []
    for threads in ("1", "2"):
        clear_cache()
        outs.append(_run(capsys, tmp_path, "spans", "--model", "tree", "--n", "8",
                         "--constraint", "translation-classes", "--threads", threads)[1])
    assert outs[0] == outs[1]


def test_cli_table_option(capsys, tmp_path):
    table = tmp_path / "counts.txt"
    code, out, _ = _run(capsys, tmp_path, "enumerate", "--model", "tree", "--n", "6",
                        "--constraint", "translation-classes", "--table", str(table))
    assert code == 0 and _rows(out)[0]["count"] == "364"
    assert "translation-classes count 364" in table.read_text()


def test_cli_sample_and_span_report(capsys, tmp_path):
    code, out, _ = _run(capsys, tmp_path, "sample", "--model", "walk", "--n", "3", "--size", "400")
    assert code == 0 and _rows(out)[0]["estimate"] == "4.0"
    code, out, _ = _run(capsys, tmp_path, "sample", "--method", "mcmc", "--n", "3", "--size", "500")
    assert code == 0
    code, out, _ = _run(capsys, tmp_path, "span-report", "--model", "tree", "--n-list", "3,4")
    assert code == 0 and len(_rows(out)) == 2
    assert _run(capsys, tmp_path, "sample", "--model", "tree", "--n", "3")[0] == 1
