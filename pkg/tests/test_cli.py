import json
import subprocess
import sys

import numpy as np
import pytest

from gmalg import catalog
from gmalg.cli import execute, main
from gmalg.serialize import (SpecError, algebra_to_json, bilinear_to_json, gma_from_json,
                             gma_to_json, linear_to_json)
from gmalg.algebra import LinearMap, matrix_algebra
from gmalg.traces import left_product_map, product_map


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def full315(tmp_path):
    report, code, _ = execute(["catalog", "full", "3", "1", "5"])
    assert code == 0
    return write(tmp_path, "g.json", report)


def test_catalog_output_validates(tmp_path):
    for args in (["full", "4", "2", "5"], ["triangular", "3", "5"], ["nonloyal-demo", "5"]):
        doc, code, _ = execute(["catalog", *args])
        assert code == 0
        report, code, _ = execute(["validate", write(tmp_path, "x.json", doc)])
        assert code == 0 and report["ok"] and report["violations"] == []


def test_catalog_peirce(tmp_path):
    alg = write(tmp_path, "m2.json", algebra_to_json(matrix_algebra(2, 5)))
    doc, code, _ = execute(["catalog", "peirce", alg, "1,0,0,0"])
    assert code == 0
    assert np.array_equal(gma_from_json(doc).flat.mult, catalog.full(2, 1, 5).flat.mult)
    _, code, diag = execute(["catalog", "peirce", alg, "[2,0,0,0]"])
    assert code == 2 and "$idempotent" in diag


def test_gma_json_round_trip():
    g = catalog.full(3, 1, 5)
    doc = gma_to_json(g)
    assert gma_to_json(gma_from_json(json.loads(json.dumps(doc)))) == doc


def test_hypotheses_exit_codes(tmp_path, full315):
    doc, _, _ = execute(["catalog", "full", "4", "2", "5"])
    report, code, _ = execute(["hypotheses", "--theorem", "3.4", write(tmp_path, "g4.json", doc)])
    assert code == 0 and report["holds"]
    report, code, _ = execute(["hypotheses", "--theorem", "3.4", full315])
    assert code == 1
    assert report["failed"] == ["ZA_proper_subset", "A_noncommutative"]


def test_bad_spec_reports_path(tmp_path):
    _, code, diag = execute(["center", write(tmp_path, "bad.json", {"p": 5})])
    assert code == 2
    assert diag.startswith("error at $: ") and "'A' is a required property" in diag
    doc = gma_to_json(catalog.full(2, 1, 5))
    doc["A"]["mult"][0][0][0] = 7
    _, code, diag = execute(["validate", write(tmp_path, "bad2.json", doc)])
    assert code == 2 and "$.A.mult[0][0][0]" in diag


def test_usage_error_exit_code():
    _, code, _ = execute(["no-such-command"])
    assert code == 2
    _, code, _ = execute(["catalog", "full", "4", "2"])
    assert code == 2


def test_center_command(full315):
    report, code, _ = execute(["center", full315])
    assert code == 0 and report["center_dim"] == 1 and report["agrees_with_flat_center"]


def test_trace_space_command(tmp_path):
    doc, _, _ = execute(["catalog", "triangular", "3", "5"])
    report, code, _ = execute(["trace-space", "--kind", "centralizing", write(tmp_path, "t.json", doc)])
    assert code == 0 and report["dim"] == 28 and report["contained_in_proper"]


def test_decompose_trace_command(tmp_path):
    g = catalog.full(2, 1, 5)
    gp = write(tmp_path, "g.json", gma_to_json(g))
    good = write(tmp_path, "q.json", bilinear_to_json(product_map(g.flat)))
    report, code, _ = execute(["decompose-trace", gp, good])
    assert code == 0 and report["proper"] and report["residual_zero"]
    bad = write(tmp_path, "r.json", bilinear_to_json(left_product_map(g.flat, g.element(a=[1]))))
    report, code, _ = execute(["decompose-trace", gp, bad])
    assert code == 1 and not report["proper"]


def test_block_components_command(tmp_path):
    g = catalog.full(4, 2, 5)
    gp = write(tmp_path, "g.json", gma_to_json(g))
    qp = write(tmp_path, "q.json", bilinear_to_json(product_map(g.flat)))
    report, code, _ = execute(["block-components", gp, qp])
    assert code == 0
    assert report["derived"]["epsilon"] == [1, 0, 0, 1]
    assert all(report["relations"].values())
    bad = write(tmp_path, "r.json", bilinear_to_json(left_product_map(g.flat, g.element(a=[1, 0, 0, 0]))))
    report, code, _ = execute(["block-components", gp, bad])
    assert code == 1 and report["error"].startswith("RequiresCommuting")


def test_decompose_lie_identity(full315, tmp_path):
    mp = write(tmp_path, "l.json", linear_to_json(LinearMap(np.eye(9, dtype=np.int64), 5)))
    report, code, _ = execute(["decompose-lie", full315, full315, mp])
    assert code == 0
    assert report["kind"] == "homomorphism"
    assert report["standard_form_violations"] == []
    assert not np.array(report["n"]["matrix"]).any()


def test_check_identity_command(full315, tmp_path):
    _, code, _ = execute(["check-identity", full315])
    assert code == 1
    doc, _, _ = execute(["catalog", "triangular", "2", "5"])
    report, code, _ = execute(["check-identity", write(tmp_path, "t.json", doc)])
    assert code == 0 and report["holds"]


def test_json_report_reruns_identically(full315, capsys):
    assert main(["hypotheses", "--theorem", "3.17", full315, "--json"]) == 0
    first = capsys.readouterr().out
    argv = json.loads(first)["command"]
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_console_entry_point(full315):
    out = subprocess.run([sys.executable, "-m", "gmalg", "center", full315],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert "center_dim: 1" in out.stdout
    assert "elapsed" in out.stderr
