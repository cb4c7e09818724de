from __future__ import annotations

import json
import subprocess
import sys

import pytest

from reidtree import certify
from reidtree.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quotient_order_level_two(capsys):
    code, out, _ = run(capsys, "quotient", "--group", "grigorchuk", "--depth", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert [r["order"] for r in doc["levels"]] == [2, 8]


def test_quotient_text_is_tab_delimited(capsys):
    code, out, _ = run(capsys, "quotient", "--depth", "2")
    assert code == 0
    assert "2\t8\t4\tTrue" in out.splitlines()


def test_quotient_reports_cap(capsys):
    code, out, _ = run(capsys, "quotient", "--depth", "4", "--cap", "200", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["cap_exceeded"]["level"] == 4


def test_galois_p3(capsys):
    code, out, _ = run(capsys, "galois", "-p", "3", "--json")
    assert code == 0
    assert [c["name"] for c in json.loads(out)["classes"]] == ["Z_3", "S_3"]


def test_info_and_orbits(capsys, tmp_path):
    code, out, _ = run(capsys, "info", "--group", "gupta-sidki-3", "--depth", "2")
    assert code == 0 and "alphabet\t3" in out
    png = tmp_path / "orbits.png"
    code, out, _ = run(capsys, "orbits", "--group", "adding-machine", "--aut", "odometer",
                       "--depth", "5", "--plot", str(png))
    assert code == 0 and png.stat().st_size > 0
    assert "growth.verdict\tstabilized at M=1 since level 1" in out


def test_reid_with_plot(capsys, tmp_path):
    png = tmp_path / "reid.png"
    code, out, _ = run(capsys, "reid", "--aut", "word:a", "--max-n", "3", "--json", "--plot", str(png))
    assert code == 0 and png.exists()
    assert [r["reid_count"] for r in json.loads(out)["rows"]] == [2, 5, 20]


def test_wst_found_and_not_found(capsys):
    assert run(capsys, "wst", "--group", "grigorchuk", "--depth", "2")[0] == 0
    # the adding machine never has a nontrivial G_{v}
    assert run(capsys, "wst", "--group", "adding-machine", "--vertex", "0", "--depth", "3")[0] == 2


def test_witness_roundtrip(capsys, tmp_path):
    out_file = tmp_path / "cert.json"
    code, _, _ = run(capsys, "witness", "--group", "full-binary-finitary(4)", "--aut", "root-swap",
                     "-j", "1", "--out", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "certify", str(out_file))
    assert code == 0 and out.startswith("certificate OK")


def test_witness_not_found(capsys):
    code, out, _ = run(capsys, "witness", "--group", "adding-machine", "--aut", "identity",
                       "--kind", "parity", "-j", "1", "--depth", "3")
    assert code == 2 and "not found" in out


def test_chain_roundtrip_and_determinism(capsys, tmp_path):
    args = ["chain", "--group", "full-binary-finitary:4", "--aut", "root-swap", "-N", "2",
            "--depth", "3", "--json"]
    code, first, _ = run(capsys, *args)
    assert code == 0
    _, second, _ = run(capsys, *args)
    a, b = json.loads(first), json.loads(second)
    assert certify.canonical(certify.body_of(a)) == certify.canonical(certify.body_of(b))
    path = tmp_path / "chain.json"
    path.write_text(first)
    assert run(capsys, "certify", str(path))[0] == 0


def test_certify_tampered(capsys, tmp_path):
    run(capsys, "witness", "--group", "full-binary-finitary(4)", "--aut", "root-swap",
        "--out", str(tmp_path / "c.json"))
    doc = json.loads((tmp_path / "c.json").read_text())
    doc["g_word"] = "s"  # the root swap does not fix level 1
    bad = tmp_path / "bad-certificate.json"
    bad.write_text(json.dumps(certify.seal(certify.body_of(doc))))
    code, _, err = run(capsys, "certify", str(bad))
    assert code == 1 and "invariant 'stabilizer-membership'" in err
    doc["digest"] = "0" * 64
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "certify", str(bad))
    assert code == 1 and "invariant 'digest'" in err


def test_malformed_spec_file(capsys, tmp_path):
    spec = tmp_path / "g.json"
    spec.write_text('{"alphabet": 2,\n  "states": [}')
    code, _, err = run(capsys, "info", "--group", str(spec))
    assert code == 1 and "line 2" in err


def test_unknown_group_and_bad_depth(capsys):
    assert run(capsys, "info", "--group", "nope")[0] == 1
    with pytest.raises(SystemExit):
        main(["info", "--depth", "0"])


def test_cap_message(capsys):
    code, _, err = run(capsys, "reid", "--aut", "identity", "--depth", "1", "--cap", "1")
    assert code == 0  # truncated series is still a result
    code, _, err = run(capsys, "wst", "--depth", "3", "--cap", "1")
    assert code == 1 and err.startswith("cap exceeded")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "reidtree", "galois", "-p", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "Z_2" in res.stdout
