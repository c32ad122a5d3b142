import json
import subprocess
import sys

import pytest

from knotapprox.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_trefoil_jones(capsys):
    code, out, _ = run(capsys, "compute", "trefoil", "jones")
    assert code == 0
    assert out.strip() == "[[2,1,1],[6,1,1],[8,-1,1]]"


def test_compute_unknot_homfly(capsys):
    assert run(capsys, "compute", "unknot", "homfly")[1].strip() == "[[0,0,1]]"


def test_compute_qpoly_without_kauffman_data(capsys):
    code, _, err = run(capsys, "compute", "pd:X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)", "qpoly")
    assert code == 2
    assert "kauffman_F" in err


def test_compute_inline_braid(capsys):
    code, out, _ = run(capsys, "compute", "braid:3; 1 -2 1 -2", "alexander")
    assert code == 0
    assert json.loads(out) == [[-2, -1, 1], [0, 3, 1], [2, -1, 1]]


def test_engine_limit_flag(capsys):
    code, _, err = run(capsys, "compute", "T_6", "jones", "--max-crossings", "5")
    assert code == 2 and "limit" in err


def test_approximate_finite(capsys):
    code, out, _ = run(capsys, "approximate", "trefoil", "--n", "4", "--mode", "finite", "--d", "4")
    assert code == 0
    assert out.splitlines() == ["order,partial_sum_re,partial_sum_im,abs_error", "8,-1,0,0"]


def test_approximate_infinite_row_count(capsys):
    code, out, _ = run(capsys, "approximate", "trefoil", "--n", "1", "--mode", "infinite", "--order", "80")
    assert code == 0
    assert len(out.splitlines()) == 82


def test_approximate_infinite_unknot(capsys):
    code, out, _ = run(capsys, "approximate", "unknot", "--n", "0", "--mode", "infinite", "--order", "5")
    assert code == 0
    rows = out.splitlines()[1:]
    assert len(rows) == 6 and all(r.split(",")[1] == "1.0" for r in rows)


def test_approximate_reports_unconverged_series(capsys):
    code, _, _ = run(capsys, "approximate", "trefoil", "--n", "1", "--mode", "infinite", "--order", "5")
    assert code == 1


def test_approximate_half_grid_source(capsys):
    code, out, _ = run(capsys, "approximate", "hopf", "--n", "5", "--source", "homfly:-2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["grid"] == "half" and data["value"] == "-1"


def test_tables_single(capsys):
    code, out, _ = run(capsys, "tables", "trefoil")
    assert code == 0
    det_rows = [r for r in out.splitlines() if ",det," in r]
    assert det_rows and det_rows[0].endswith(",det,3,3,true")


def test_tables_all(capsys):
    code, out, _ = run(capsys, "tables", "--all")
    assert code == 0
    assert ",false" not in out


def test_tables_unknown(capsys):
    code, _, err = run(capsys, "tables", "nosuchknot")
    assert code == 2 and "nosuchknot" in err


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "hopf", "--format", "json")
    assert code == 0
    assert [r["link"] for r in json.loads(out)] == ["hopf", "hopf", "hopf"]


@pytest.mark.parametrize("suite", ["kronecker", "twist", "degree", "skein"])
def test_verify(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    assert code == 0
    assert out and all(line.startswith("PASS") for line in out.splitlines())


def test_deterministic_output(tmp_path):
    files = []
    for k in range(2):
        path = tmp_path / f"out{k}.csv"
        assert main(["tables", "--all", "--out", str(path)]) == 0
        files.append(path.read_bytes())
    assert files[0] == files[1]


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("KNOTAPPROX_FORMAT", "json")
    code, out, _ = run(capsys, "approximate", "trefoil", "--n", "4")
    assert code == 0 and json.loads(out)["value"] == "-1"
    monkeypatch.setenv("KNOTAPPROX_PRECISION", "32")
    code, _, err = run(capsys, "tables", "trefoil")
    assert code == 2 and "precision" in err


def test_tolerance_flag(capsys):
    code, _, _ = run(capsys, "tables", "trefoil", "--tolerance", "2^-40", "--precision", "192")
    assert code == 0
    code, _, err = run(capsys, "tables", "trefoil", "--tolerance", "bogus")
    assert code == 2


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "knotapprox.cli", "compute", "unknot", "jones"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "[[0,1,1]]"
