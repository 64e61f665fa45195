from __future__ import annotations

import json

import pytest

from corkcalc.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path, capsys):
    for name in ("trivial", "fig31b", "fig41c", "fig41a", "akbulut-A", "akbulut-rev-corrected"):
        assert main(["catalog", "emit", name, "-o", str(tmp_path / f"{name}.json")]) == 0
    capsys.readouterr()
    return tmp_path


def test_rs_function_tsv(files, capsys):
    out_tsv = files / "out.tsv"
    code, out, _ = run(capsys, "rs", files / "fig31b.json", "--function", "--tsv", out_tsv)
    assert code == 0
    assert out_tsv.read_text() == "-inf\t0\t1/2\n"
    assert out.strip() == "-inf\t0\t1/2"


def test_rs_value_negative_s(files, capsys):
    code, out, _ = run(capsys, "rs", files / "fig41c.json", "--involutive", "--s", "-1/4")
    assert (code, out.strip()) == (0, "3/4")
    code, out, _ = run(capsys, "rs", files / "fig41c.json", "--involutive", "--s=-1/2", "--json")
    assert json.loads(out)["value"] == "inf"


def test_localmap_exit_codes(files, capsys):
    code, out, _ = run(capsys, "localmap", files / "trivial.json", files / "fig31b.json", "--level", "0")
    assert code == 2 and out.strip() == "none"
    witness = files / "w.json"
    code, out, _ = run(
        capsys, "localmap", files / "trivial.json", files / "akbulut-rev-corrected.json", "--equivariant", "-o", witness
    )
    assert code == 0
    assert "theta --y^0--> theta" in out
    assert json.loads(witness.read_text())["entries"]


def test_validate_garbage(tmp_path, capsys):
    bad = tmp_path / "garbage.json"
    bad.write_text('{"flavor": "D2", "generators": [{"name": "theta", "deg_z": "x"}], "diff": []}')
    code, _, err = run(capsys, "validate", bad)
    assert code == 1
    assert "generators[0]" in err
    bad.write_text("{oops")
    code, _, err = run(capsys, "validate", bad)
    assert code == 1 and "line 1" in err


def test_validate_ok(files, capsys):
    code, out, _ = run(capsys, "validate", files / "akbulut-A.json")
    assert code == 0 and "PASS" in out and "FAIL" not in out


def test_tensor_dual_csineq(files, capsys):
    prod, dual = files / "p.json", files / "d.json"
    assert run(capsys, "tensor", files / "fig41a.json", files / "fig41a.json", "-o", prod)[0] == 0
    code, out, _ = run(capsys, "rs", prod, "--involutive")
    assert out.strip() == "3/4"
    assert run(capsys, "dual", files / "fig41a.json", "-o", dual)[0] == 0
    assert json.loads(dual.read_text())["flavor"] == "D1"
    code, out, _ = run(capsys, "csineq", files / "fig41a.json", files / "fig41a.json", "--s", "0", "--s2", "0")
    assert code == 0 and "holds" in out


def test_oracle_command(files, capsys):
    code, out, _ = run(capsys, "oracle", files / "fig41c.json", "--r", "-1/2", "--s", "1", "--involutive")
    assert code == 0 and out.strip().endswith("agree")
    code, _, err = run(capsys, "oracle", files / "akbulut-A.json", "--r", "-9", "--s", "1")
    assert code == 1 and "20" in err


def test_enriched_command(files, capsys):
    m = files / "m.json"
    m.write_text(
        json.dumps(
            {
                "cluster_set": ["0", "1/2", "-3/4"],
                "terms": [{"complex": "fig41c.json"}, {"complex": "fig41c.json"}],
                "psi": [{"from": 0, "to": 1, "identity": True}],
            }
        )
    )
    code, out, _ = run(capsys, "enriched-rs", m, "--s", "-1/2")
    assert code == 0
    assert out.splitlines()[0] == "inf"
    assert "right 3/4" in out
    m.write_text(json.dumps({"cluster_set": ["0"], "terms": [{"complex": "fig41c.json"}]}))
    code, _, err = run(capsys, "enriched-rs", m, "--s", "-1/3")
    assert code in (1, 3)


def test_catalog_list_and_determinism(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "akbulut-B" in out
    first = run(capsys, "catalog", "emit", "random", "--param", "seed=5", "--param", "involutive=true")[1]
    second = run(capsys, "catalog", "emit", "random", "--param", "seed=5", "--param", "involutive=true")[1]
    assert first == second
    assert run(capsys, "catalog", "emit", "fig41a", "--param", "beta")[0] == 1


def test_bad_arguments(capsys):
    assert run(capsys, "rs")[0] == 1
    assert run(capsys, "rs", "missing.json")[0] == 1
