from __future__ import annotations

import json
import random
import subprocess
import sys

import pytest

from monofischer.cli import RunConfig, main, run
from monofischer.poly import ClPoly
from monofischer.spaces import monogenic_space
from strategies import random_spinor_poly


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_text(capsys):
    code, out, _ = run_cli(capsys, "verify", "--m", "3", "--k", "1", "--max-degree", "4", "--format", "text")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("PASS m=")]
    assert len(lines) == 5


def test_verify_unstable(capsys):
    code, _, err = run_cli(capsys, "verify", "--m", "3", "--k", "2", "--max-degree", "1")
    assert code == 3 and "stable range" in err


def test_verify_forced(capsys):
    code, out, _ = run_cli(capsys, "verify", "--m", "3", "--k", "2", "--degree", "1", "--force-unstable")
    assert code == 0 and json.loads(out)["cells"][0]["stable_range"] is False


def test_bad_m(capsys):
    code, _, _ = run_cli(capsys, "verify", "--m", "2", "--max-degree", "1")
    assert code == 2


def test_decompose_monogenic(tmp_path, capsys):
    P = monogenic_space(4, 2, 2).elements()[5]
    f = tmp_path / "p.json"
    f.write_text(P.dumps())
    code, out, _ = run_cli(capsys, "decompose", "--input", str(f))
    rep = json.loads(out)
    assert code == 0 and len(rep["components"]) == 1
    assert ClPoly.from_json(rep["components"][0]["monogenic"]) == P


def test_decompose_roundtrip_bytes(tmp_path, capsys):
    P = random_spinor_poly(5, 2, 2, random.Random(4))
    f = tmp_path / "p.json"
    r = tmp_path / "r.json"
    f.write_text(P.dumps())
    code, _, _ = run_cli(capsys, "decompose", "--input", str(f), "--reassembled-output", str(r))
    assert code == 0
    assert r.read_bytes() == f.read_bytes()


def test_decompose_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"m": 4, "k": 1,\n "terms": [{"exp": [[1],[0],[0]], "coeff": []}]}')
    code, _, err = run_cli(capsys, "decompose", "--input", str(f))
    assert code == 2 and "$.terms[0].exp" in err


def test_decompose_syntax_error(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"m": 4,\n  "k": }')
    code, _, err = run_cli(capsys, "decompose", "--input", str(f))
    assert code == 2 and "line 2" in err


def test_decompose_non_spinor(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(ClPoly.constant(4, 1, 1).dumps())
    code, _, _ = run_cli(capsys, "decompose", "--input", str(f))
    assert code == 2


def test_dims_table(capsys):
    code, out, _ = run_cli(capsys, "dims", "--m", "4", "--k", "2", "--max-degree", "2", "--format", "text")
    assert code == 0 and out.count("PASS") == 12 + 1  # one row per identity and degree, plus overall


def test_relations(capsys):
    code, out, _ = run_cli(capsys, "relations", "--m", "4", "--k", "1", "--relations-max-degree", "2")
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert any(r["constant_found"] == {"RSQ(1,1)": "-2"} for r in rep["relations"])


def test_spinor_info(capsys):
    code, out, _ = run_cli(capsys, "spinor-info", "--m", "6")
    rep = json.loads(out)
    assert code == 0 and rep["dim"] == 8 and rep["norms"][0] == ["1/8", "0/1"]


def test_deterministic_reports():
    cfg = RunConfig("verify", m=4, k=2, max_degree=2, timing=False)
    assert run(cfg) == run(cfg)


def test_output_file(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code, stdout, _ = run_cli(capsys, "verify", "--m", "4", "--k", "1", "--max-degree", "2", "--output", str(out))
    assert code == 0 and stdout == "" and json.loads(out.read_text())["pass"]


@pytest.mark.parametrize("argv", [["-m", "monofischer", "spinor-info", "--m", "3"]])
def test_module_entry(argv):
    res = subprocess.run([sys.executable, *argv], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["dim"] == 2
