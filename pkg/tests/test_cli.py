import json
import subprocess
import sys
from pathlib import Path

import pytest

from ambitoric.cli import main
from ambitoric.structures import bach_flat_example

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def example_file(tmp_path):
    p = tmp_path / "example.json"
    p.write_text(json.dumps(bach_flat_example().to_json()))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_example(capsys, example_file):
    code, out, _ = run(capsys, "check", example_file)
    rep = json.loads(out)
    assert code == 0
    assert rep["conditions"]["extremal"] and rep["conditions"]["bach_flat"]


def test_check_invalid_ordering(capsys, tmp_path):
    obj = bach_flat_example().to_json()
    obj["beta"] = ["0", "3"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "check", str(p))
    assert code == 2
    assert any(v["code"] == "beta2_lt_alpha1" for v in json.loads(out)["violations"])


def test_truncated_json_is_malformed(capsys, tmp_path):
    p = tmp_path / "trunc.json"
    p.write_text('{"type": "hyperbolic", "A": [')
    code, _, err = run(capsys, "check", str(p))
    assert code == 1 and "error" in err


def test_verify_example_and_injected_error(capsys, example_file):
    code, out, _ = run(capsys, "verify", example_file, "--points", "40")
    assert code == 0, out
    code, out, _ = run(capsys, "verify", example_file, "--points", "40", "--inject-error")
    assert code == 3


def test_zero_points_is_usage_error(capsys, example_file):
    code, _, err = run(capsys, "verify", example_file, "--points", "0")
    assert code == 64 and "usage" in err


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64


def test_verify_is_deterministic(capsys, example_file):
    outs = [run(capsys, "--seed", "5", "verify", example_file, "--points", "20")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["seed"] == 5
    local = run(capsys, "verify", example_file, "--points", "20", "--seed", "5")[1]
    assert local == outs[0]


def test_verify_csv(capsys, example_file, tmp_path):
    code, out, _ = run(capsys, "--format", "csv", "verify", example_file, "--points", "10")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "check,x,y,residual"
    assert len(lines) > 10
    extra = tmp_path / "grid.csv"
    run(capsys, "verify", example_file, "--points", "10", "--csv-out", str(extra))
    assert extra.read_text().startswith("check,x,y,residual")


def test_polytope_and_stability(capsys, example_file):
    code, out, _ = run(capsys, "polytope", example_file)
    assert code == 0
    assert json.loads(out)["lattice"]["covolume"] == "1/72"
    code, out, _ = run(capsys, "stability", example_file, "--crease", "x0=5/2")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "Polystable"
    code, out, _ = run(capsys, "stability", str(DATA / "unstable.json"))
    assert json.loads(out)["verdict"] == "Unstable"


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "wpp", "--beta", "1", "2", "3", "4")
    rep = json.loads(out)
    assert code == 0 and rep["weights"] == [3, 8, 15]
    code, out, _ = run(capsys, "catalog", "extremal", "--alpha", "2", "50")
    assert code == 2
    code, _, _ = run(capsys, "catalog", "extremal", "--alpha", "2", "50", "--shrink")
    assert code == 0


def test_catalog_output_pipes_into_check(tmp_path):
    gen = subprocess.run([sys.executable, "-m", "ambitoric", "catalog", "extremal", "--alpha", "21/10", "29/10"],
                         capture_output=True, text=True, check=True)
    chk = subprocess.run([sys.executable, "-m", "ambitoric", "check", "/dev/stdin"],
                         input=gen.stdout, capture_output=True, text=True)
    assert chk.returncode == 0, chk.stdout + chk.stderr
    assert json.loads(chk.stdout)["conditions"]["extremal"]
