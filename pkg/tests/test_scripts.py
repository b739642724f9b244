import runpy
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize("name, argv", [
    ("reproduce_wronskians.py", []),
    ("limit_cycle_validation.py", ["--scenario", "scs-a"]),
    ("epsilon_expansion.py", ["--levels", "2"]),
])
def test_script_runs(name, argv, monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [name, *argv])
    runpy.run_path(str(SCRIPTS / name), run_name="__main__")
    assert capsys.readouterr().out.strip()
