import hashlib
import json

import pytest

from submeasure_lab import io
from submeasure_lab.cli import main
from submeasure_lab.core import MinCover
from submeasure_lab.subsets import GroundSet
from submeasure_lab.zoo import gen_minimal_pathological


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def minpath(tmp_path):
    path = tmp_path / "minpath.json"
    io.write_json(path, io.submeasure_to_dict(gen_minimal_pathological()))
    return str(path)


def test_compute_pathology(capsys, minpath):
    code, out, _ = run(capsys, "compute", "pathology", "--input", minpath, "--scope", "all")
    assert code == 0
    assert json.loads(out) == {"degree": "4/3", "argmax": [0, 1, 2]}


def test_compute_pathology_family_scope_is_a_lower_bound(capsys, minpath):
    code, out, _ = run(capsys, "compute", "pathology", "--input", minpath, "--scope", "family",
                       "--family", "0,1;0,1,2")
    assert code == 0
    assert json.loads(out) == {"degree": "4/3", "argmax": [0, 1, 2], "lower_bound": True}
    code, _, err = run(capsys, "compute", "pathology", "--input", minpath, "--scope", "family")
    assert code == 2 and "--family" in err


def test_compute_hat_eval_metric(capsys, minpath):
    code, out, _ = run(capsys, "compute", "hat", "--input", minpath, "--set", "0,1,2")
    assert code == 0
    assert json.loads(out) == {"value": "3/2", "witness": ["1/2", "1/2", "1/2"]}
    _, out, _ = run(capsys, "compute", "eval", "--input", minpath, "--set", "0,2")
    assert json.loads(out) == {"value": "1/1"}
    _, out, _ = run(capsys, "compute", "metric", "--input", minpath, "--set", "0,1", "--set2", "1,2")
    assert json.loads(out) == {"value": "1/1"}


def test_gen_then_compute(capsys, tmp_path):
    d = str(tmp_path)
    code, out, _ = run(capsys, "gen", "solecki", "--n", "3", "--out", d)
    assert code == 0
    _, out, _ = run(capsys, "compute", "eval", "--input", str(tmp_path / "solecki3.json"), "--set", "all")
    assert json.loads(out) == {"value": "5/1"}
    run(capsys, "gen", "mazur", "--n", "2", "--out", d)
    doc = io.load_json(tmp_path / "mazur2.json")
    assert doc["ground"] == 16 and len(doc["repr"]["family"]) == 4
    _, out, _ = run(capsys, "compute", "cover-stats", "--input", str(tmp_path / "mazur2_covering.json"))
    st = json.loads(out)
    assert st["delta"] == "1/2" and st["family_size"] == 4 and st["m"] == 2
    run(capsys, "gen", "solecki", "--n", "2", "--out", d)
    assert io.load_json(tmp_path / "solecki2.json")["ground"] == 6
    run(capsys, "gen", "edfin", "--n", "2", "--out", d)
    _, out, _ = run(capsys, "compute", "cover-stats", "--input", str(tmp_path / "edfin2_chains.json"))
    assert json.loads(out)["family_size"] == 6 and json.loads(out)["delta"] == "1/3"


@pytest.mark.parametrize("argv, files", [
    (["minimal"], ["minimal.json"]),
    (["ed", "--blocks", "2,2"], ["ed_chain.json", "ed_sup.json"]),
    (["propertyA", "--variant", "b", "--stages", "2,2"], ["propertyA_b_2_2.json", "propertyA_b_2_2_blocks.json"]),
    (["finxempty", "--blocks", "2,3,4"], ["finxempty.json", "finxempty_phi.json"]),
    (["coloring", "--name", "sierpinski", "--n", "50"], ["coloring_sierpinski_50.json"]),
    (["coloring", "--name", "partition", "--blocks", "1,2"], ["coloring_partition.json"]),
])
def test_gen_manifest_hashes(capsys, tmp_path, argv, files):
    code, out, _ = run(capsys, "gen", *argv, "--out", str(tmp_path))
    assert code == 0
    manifest = json.loads(out)
    assert sorted(manifest["files"]) == sorted(files)
    for name, digest in manifest["files"].items():
        assert hashlib.sha256((tmp_path / name).read_bytes()).hexdigest() == digest
    assert json.loads((tmp_path / "manifest.json").read_text()) == manifest


def test_output_is_deterministic(capsys, tmp_path, minpath):
    outs = [run(capsys, "compute", "hat", "--input", minpath, "--set", "all")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    a = run(capsys, "gen", "mazur", "--n", "2", "--out", str(tmp_path / "a"))[1]
    b = run(capsys, "gen", "mazur", "--n", "2", "--out", str(tmp_path / "b"))[1]
    assert a == b


def test_verify_table(capsys):
    code, out, _ = run(capsys, "verify", "mazur-degree", "--level", "2")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].split("\t") == ["target", "check", "expected", "tag", "computed", "verdict"]
    rows = [l.split("\t") for l in lines[1:-1]]
    assert any(r[2] == "3/2" and r[3] == "[PAPER]" and r[4] == "3/2" and r[5] == "pass" for r in rows)
    assert all(r[3] in ("[PAPER]", "[DERIVED]", "[TRIVIAL]") for r in rows)
    assert lines[-1].startswith("# ") and lines[-1].endswith("passed")


def test_verify_decimal_column(capsys):
    _, plain, _ = run(capsys, "verify", "mazur-degree", "--level", "2")
    code, out, _ = run(capsys, "verify", "mazur-degree", "--level", "2", "--decimal", "3")
    assert code == 0
    rows = [l.split("\t") for l in out.strip().split("\n")[1:-1]]
    assert any(r[4] == "3/2" and r[6] == "1.500" for r in rows)
    # verdicts are unchanged by the display column
    assert [r[:6] for r in rows] == [l.split("\t") for l in plain.strip().split("\n")[1:-1]]


@pytest.mark.parametrize("target", ["banach-roundtrip", "color1-bound", "rk-solecki", "edfin-delta"])
def test_verify_targets_pass(capsys, target):
    code, out, _ = run(capsys, "verify", target, "--seed", "1", "--quick")
    assert code == 0, out


def test_input_errors_exit_2(capsys, tmp_path, minpath):
    code, _, err = run(capsys, "compute", "eval", "--input", minpath, "--set", "9")
    assert code == 2 and "--set" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"ground": 3}', encoding="utf-8")
    code, _, err = run(capsys, "compute", "eval", "--input", str(bad))
    assert code == 2 and "repr" in err
    code, _, _ = run(capsys, "compute", "eval", "--input", str(tmp_path / "none.json"))
    assert code == 2
    code, _, err = run(capsys, "verify", "no-such-target")
    assert code == 2 and "unknown verify target" in err
    code, _, _ = run(capsys, "bogus")
    assert code == 2
    code, _, _ = run(capsys, "gen", "propertyA", "--stages", "3", "--out", str(tmp_path))
    assert code == 2


def test_size_guard_exit_3(capsys, tmp_path, minpath, monkeypatch):
    code, _, err = run(capsys, "compute", "pathology", "--input", minpath, "--max-ground", "2")
    assert code == 3 and "size guard" in err
    monkeypatch.setenv("SUBMEASURE_LAB_MAX_GROUND", "2")
    code, _, _ = run(capsys, "compute", "pathology", "--input", minpath)
    assert code == 3
    code, _, _ = run(capsys, "gen", "mazur", "--n", "9", "--out", str(tmp_path))
    assert code == 3


def test_cover_stats_rejects_non_cover_submeasure(capsys, minpath, tmp_path):
    code, _, err = run(capsys, "compute", "cover-stats", "--input", minpath)
    assert code == 2 and "min_cover" in err
    mc = tmp_path / "mc.json"
    io.write_json(mc, io.submeasure_to_dict(MinCover(GroundSet(3), [0b011, 0b110])))
    code, out, _ = run(capsys, "compute", "cover-stats", "--input", str(mc))
    assert code == 0 and json.loads(out)["family_size"] == 2


def test_verify_failure_exits_1(capsys, monkeypatch):
    from submeasure_lab import verify
    bad = verify.Row("fake", "always fails", "1/1", "TRIVIAL", "0/1", False)
    monkeypatch.setattr(verify, "run", lambda *a, **k: [bad])
    code, out, _ = run(capsys, "verify", "fake")
    assert code == 1 and "fail" in out
