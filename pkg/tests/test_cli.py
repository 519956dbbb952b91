import json

import pytest

from splicekit.bundle import Bundle, generate_bundle, verify_bundle
from splicekit.cli import main
from splicekit.poly import FamilyInstance
from splicekit.splice import SimpleTypeParams

WORKED_ARGS = ["--family", "F1", "--pqparams", "1,1,1,2", "--a", "2", "--alphas", "1",
               "--betas", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def worked_bundle():
    return generate_bundle(FamilyInstance(SimpleTypeParams("F1", 1, 1, 1, 2, (2,)), (1,), (3,)))


def test_generate_worked(capsys):
    code, out, _ = run(capsys, "generate", *WORKED_ARGS)
    assert code == 0
    b = json.loads(out)
    assert b["invariants"]["degree"] == 8
    assert len(b["plumbing"]["vertices"]) == 7
    assert b["monodromy"]["h_infinity"] == [1, 2, 2, 1]
    assert b["report"]["ok"]


def test_generate_is_deterministic(capsys):
    _, a, _ = run(capsys, "generate", *WORKED_ARGS)
    _, b, _ = run(capsys, "generate", *WORKED_ARGS)
    assert a == b


def test_generate_invalid_params(capsys):
    code, out, err = run(capsys, "generate", "--family", "F1", "--pqparams", "1,1,2,1", "--a", "2")
    assert code == 2
    assert out == ""
    assert "Pq-pQ = -1 != 1" in err


@pytest.mark.parametrize("argv", [
    ["generate", "--family", "F1", "--a", "2"],
    ["generate", "--family", "F1", "--pqparams", "1,1,1", "--a", "2"],
    ["generate", "--family", "F1", "--pqparams", "1,1,1,2", "--a", "x"],
    ["generate", *WORKED_ARGS[:-1], "0"],
    ["generate", "--family", "F9"],
    ["nonsense"],
])
def test_generate_rejects_bad_requests(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_generate_f3(capsys):
    code, out, _ = run(capsys, "generate", "--family", "F3", "--a", "2", "--betas", "1",
                       "--h", "0,1")
    assert code == 0
    b = json.loads(out)
    from splicekit.poly import MultiPoly
    x, y = MultiPoly.x(), MultiPoly.y()
    assert MultiPoly.parse(b["polynomials"]["f"]) == y * (x - 1) ** 2 + x


def test_generate_to_file_and_io_error(capsys, tmp_path):
    path = tmp_path / "b.json"
    assert run(capsys, "generate", *WORKED_ARGS, "--out", str(path))[0] == 0
    assert Bundle.from_json(path.read_text())
    bad = tmp_path / "missing" / "b.json"
    assert run(capsys, "generate", *WORKED_ARGS, "--out", str(bad))[0] == 4
    assert not bad.exists()


def test_bundle_round_trip(worked_bundle):
    assert Bundle.from_json(worked_bundle.to_json()) == worked_bundle
    assert Bundle.from_json(worked_bundle.to_json()).to_json() == worked_bundle.to_json()


def test_verify_bundle_clean_and_tampered(capsys, tmp_path, worked_bundle):
    path = tmp_path / "b.json"
    path.write_text(worked_bundle.to_json())
    code, out, _ = run(capsys, "verify", "--bundle", str(path))
    assert code == 0 and json.loads(out)["ok"]

    data = json.loads(worked_bundle.to_json())
    v = next(v for v in data["plumbing"]["vertices"] if v["role"] == "Tail")
    v["weight"] = -3
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--bundle", str(path))
    assert code == 3
    props = json.loads(out)["properties"]
    assert props["morrow_and_det"]["status"] == "fail"


def test_verify_bundle_function_detects_polynomial_edit(worked_bundle):
    data = json.loads(worked_bundle.to_json())
    data["polynomials"]["f"] += " + 1/1 x^9 y^0"
    res = verify_bundle(Bundle.from_dict(data))
    assert res["degree"]["status"] == "fail"
    assert res["consistency"]["status"] == "fail"


def test_verify_malformed_and_missing(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(capsys, "verify", "--bundle", str(path))[0] == 2
    assert run(capsys, "verify", "--bundle", str(tmp_path / "nope.json"))[0] == 4


def test_verify_russell_fixture(capsys):
    code, out, _ = run(capsys, "verify", "--fixture", "russell")
    assert code == 0
    props = json.loads(out)["properties"]
    assert props["degree"]["status"] == "pass" and props["degree"]["value"] == 21
    for name in ("morrow_and_det", "multiplicities", "linking", "edge_determinants"):
        assert props[name]["status"] == "not_applicable"


def test_verify_request(capsys):
    code, out, _ = run(capsys, "verify", *WORKED_ARGS)
    assert code == 0 and json.loads(out)["ok"]


def test_verify_sweep_is_reproducible(capsys):
    argv = ["verify", "--count", "4", "--seed", "9", "--max-pq", "10", "--max-r", "4"]
    code, a, _ = run(capsys, *argv)
    assert code == 0
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert json.loads(a)["ok"]


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export-dot", "--pqparams", "1,1,1,2", "--a", "2")
    assert code == 0
    lines = out.splitlines()
    assert sum(1 for l in lines if 'label="' in l and "shape=point" not in l
               and "node [" not in l) == 7
    assert sum(1 for l in lines if " -- " in l and "arrowhead" not in l) == 6
    assert sum(1 for l in lines if "arrowhead" in l) == 4
    code, again, _ = run(capsys, "export-dot", "--pqparams", "1,1,1,2", "--a", "2")
    assert again == out


def test_export_dot_f3_and_splice(capsys, tmp_path, worked_bundle):
    code, out, _ = run(capsys, "export-dot", "--family", "F3", "--a", "2")
    assert code == 0
    assert sum(1 for l in out.splitlines() if 'label="' in l and "shape=point" not in l
               and "node [" not in l) == 4
    path = tmp_path / "b.json"
    path.write_text(worked_bundle.to_json())
    code, out, _ = run(capsys, "export-dot", "--bundle", str(path), "--section", "splice")
    assert code == 0 and out.startswith("graph splice")


@pytest.mark.parametrize("section", ["", "fibres"])
def test_export_dot_bad_section(capsys, section):
    assert run(capsys, "export-dot", "--pqparams", "1,1,1,2", "--a", "2",
               "--section", section)[0] == 2


def test_normal_form_command(capsys):
    code, out, _ = run(capsys, "normal-form", "--pqparams", "2,1,3,2", "--a", "1")
    assert code == 0
    nf = json.loads(out)
    assert (nf["q1"], nf["p1"], nf["q"], nf["p"]) == (1, 1, 1, 2)


def test_monodromy_command(capsys):
    code, out, _ = run(capsys, "monodromy", "--r", "3", "--probe-len", "3")
    assert code == 0
    data = json.loads(out)
    assert data["h_infinity"] == [1, 2, 3, 3, 2, 1]
    assert data["product_equals_h_infinity"] and data["pure"] and data["free_probe"]["ok"]
    assert run(capsys, "monodromy", "--r", "0")[0] == 2


def test_fibres_command(capsys):
    code, out, _ = run(capsys, "fibres", *WORKED_ARGS)
    assert code == 0
    data = json.loads(out)
    assert data["component_identity"] and data["euler_balance"]
    assert [f["numeric_value"] for f in data["fibres"]] == ["3/1", "0/1", "9/1"]
    code, out, _ = run(capsys, "fibres", *WORKED_ARGS, "--special")
    assert code == 0
    assert run(capsys, "fibres", "--family", "F2", "--pqparams", "1,1,1,2", "--a", "2")[0] == 2


def test_generate_invariant_failure_emits_no_bundle(capsys, tmp_path, monkeypatch):
    import splicekit.bundle as bundle_mod

    def failing(inst, names=None, polynomial=True):
        return {"degree": {"status": "fail", "failures": ["forced"]}}

    monkeypatch.setattr(bundle_mod, "run_properties", failing)
    path = tmp_path / "b.json"
    code, out, err = run(capsys, "generate", *WORKED_ARGS, "--out", str(path))
    assert code == 3
    assert out == "" and not path.exists()
    assert "degree" in err
