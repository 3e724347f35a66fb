import json
import subprocess
import sys
from pathlib import Path

import pytest

from mbrank.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "mbrank" / "data" / "families"


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    return code


def test_count_m3(capsys):
    assert main(["count", "--m", "3"]) == 0
    out = capsys.readouterr().out
    assert "up to permutation: 4" in out
    assert "up to isomorphism: 6" in out
    assert "subspaces: 5" in out


def test_count_json_deterministic(capsys):
    assert main(["--json", "count", "--m", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["--json", "count", "--m", "2"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload == {"m": 2, "up_to_permutation": 2, "up_to_isomorphism": 2, "subspaces": 2}


def test_catalog_list_and_show(capsys):
    assert main(["catalog", "list", "--m", "4", "--filter", "minimal-border-rank"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 11 and out[0] == "U_{2,3}"
    assert main(["catalog", "show", "T_{1,20}"]) == 0
    out = capsys.readouterr().out
    assert "end_closed: False" in out


def test_invariants_t29(capsys):
    assert main(["invariants", "T_{2,9}"]) == 0
    out = capsys.readouterr().out
    assert "end_closed: False" in out


def test_espace_and_one11(capsys):
    assert main(["espace", "T_{1,9}"]) == 0
    capsys.readouterr()
    assert main(["one11", "T_{O58}"]) == 0
    out = capsys.readouterr().out
    assert "dim: 5" in out and "sharp: True" in out


def test_dinv_cli(capsys):
    assert main(["dinv", "T_{O54}", "--r", "2", "--dir", "B"]) == 0
    out = capsys.readouterr().out
    assert "dimension 2" in out


def test_submodules_cli(capsys):
    assert main(["submodules", "M_{1,4}", "--p", "5", "--deg", "2"]) == 0
    out = capsys.readouterr().out
    assert "count:" in out


def test_verify_family_cli(capsys):
    fam = sorted(FIXTURES.glob("*.json"))[0]
    assert main(["verify-family", str(fam)]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_verify_family_missing_file():
    assert main(["verify-family", "missing.json"]) == 2


def test_unknown_entry_usage_error():
    assert main(["invariants", "T_{77,7}"]) == 2


def test_unknown_flag_rejected():
    assert main(["count", "--m", "3", "--bogus"]) == 2


def test_classify_pencil_cli(tmp_path, capsys):
    path = tmp_path / "w13.json"
    path.write_text(json.dumps({"shape": "2x3", "basis": [[[0, 1, 0], [0, 0, 1]], [[0, 0, 0], [0, 0, 1]]]}))
    assert main(["classify-pencil", str(path)]) == 0
    out = capsys.readouterr().out
    assert "label: W13" in out


def test_console_script_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "mbrank.cli", "count", "--m", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "up to permutation: 2" in proc.stdout


def test_check_diagram_skip_certificates(tmp_path, capsys):
    dot = tmp_path / "diagram.dot"
    assert main(["check-diagram", "--skip-certificates", "--dot", str(dot)]) == 0
    out = capsys.readouterr().out
    assert "verified edges: 11" in out
    assert "digraph" in dot.read_text()
    assert '"T_{5,1}" -> "T_{4,1}" [style=solid]' in dot.read_text()
