import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize("argv, expect", [
    (["wpp_sweep.py", "--stop", "6"], "4,3 8 15,-12,60,26"),
    (["stability_scan.py", "-n", "4"], "Unstable: 1"),
    (["fd_verify.py", "--points", "20"], "boundary y=beta2"),
])
def test_script_runs(argv, expect):
    res = subprocess.run([sys.executable, str(SCRIPTS / argv[0]), *argv[1:]],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0, res.stderr
    assert expect in res.stdout
