import math
import subprocess
import sys

import pytest

from qeclab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def field(text, name):
    for line in text.splitlines():
        if line.startswith(name + ":"):
            return line.split(":", 1)[1].strip()
    raise KeyError(name)


@pytest.mark.parametrize(
    "spec, qec, lam2",
    [("path:2", -1.0, -1.0), ("path:3", -2 / 3, 1 - math.sqrt(3)), ("complete:5", -1.0, None)],
)
def test_qec_generators(capsys, spec, qec, lam2):
    code, out, _ = run(capsys, "qec", spec)
    assert code == 0
    assert float(field(out, "qec_numeric")) == pytest.approx(qec, abs=1e-11)
    if lam2 is not None:
        assert float(field(out, "lambda2")) == pytest.approx(lam2, abs=1e-11)


def test_qec_file_and_csv(capsys, tmp_path):
    path = tmp_path / "p4.txt"
    path.write_text("# P4\n1 2\n2 3\n\n3 4\n")
    code, out, _ = run(capsys, "qec", str(path), "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.startswith("n,qec_numeric,qec_closed")
    assert float(row.split(",")[2]) == pytest.approx(-(2 - math.sqrt(2)), abs=1e-11)


def test_qec_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 4\n")
    code, _, err = run(capsys, "qec", str(bad))
    assert code == 2 and "disconnected" in err
    loop = tmp_path / "loop.txt"
    loop.write_text("1 1\n")
    code, _, err = run(capsys, "qec", str(loop))
    assert code == 2 and "line 1" in err
    code, _, _ = run(capsys, "qec", "no-such-thing")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "table", "5", "3")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert run(capsys, "region", "--grid", "1,2,3")[0] == 1
    assert run(capsys, "matrix", "--n", "0", "--s", "0", "--t", "0")[0] == 1


def test_table(capsys, tmp_path):
    out_file = tmp_path / "t.csv"
    code, _, _ = run(capsys, "table", "2", "9", "--out", str(out_file))
    assert code == 0
    rows = out_file.read_text().strip().splitlines()
    assert rows[0] == "n,qec_numeric,qec_closed,qec_bisection,lambda1,lambda2,theta_star,max_delta"
    data = [r.split(",") for r in rows[1:]]
    closed = [float(r[2]) for r in data]
    assert closed[:3] == pytest.approx([-1, -2 / 3, -(2 - math.sqrt(2))], abs=1e-11)
    assert all(a < b for a, b in zip(closed, closed[1:]))
    assert all(c <= -0.5 for c in closed)
    for r in data:
        n, lam2, qec = int(r[0]), float(r[5]), float(r[1])
        if n % 2 == 0:
            assert lam2 == pytest.approx(qec, abs=1e-10)
            assert r[6] == ""
        else:
            assert lam2 < qec and r[6] != ""


def test_region_outputs(capsys, tmp_path):
    prefix = tmp_path / "fig"
    code, out, _ = run(capsys, "region", "--grid", "-2,2,-0.6,1,41,33", "--n-list", "1,3", "--out", str(prefix))
    assert code == 0
    csv = (tmp_path / "fig.csv").read_text().splitlines()
    assert csv[0] == "s,t,psd_n1,psd_n3,psd_inf"
    assert len(csv) == 1 + 41 * 33
    assert (tmp_path / "fig.svg").read_text().startswith("<svg")
    rows = {(round(float(r.split(",")[0]), 6), round(float(r.split(",")[1]), 6)): r.split(",")[-1]
            for r in csv[1:]}
    assert rows[(0.0, 0.0)] == "1" and rows[(-2.0, 0.0)] == "0"


def test_region_cell_minus_half_quarter(capsys, tmp_path):
    prefix = tmp_path / "one"
    code, _, _ = run(capsys, "region", "--grid", "-0.5,-0.5,-0.25,-0.25,1", "--n-list", "1",
                     "--format", "csv", "--out", str(prefix))
    assert code == 0
    assert (tmp_path / "one.csv").read_text().splitlines()[1] == "-0.5,-0.25,1,1"
    assert not (tmp_path / "one.svg").exists()


def test_outputs_are_byte_deterministic(capsys, tmp_path):
    for name in ("a", "b"):
        assert run(capsys, "region", "--grid", "-1,1,-0.5,0.5,21", "--out", str(tmp_path / name))[0] == 0
        assert run(capsys, "table", "2", "7", "--out", str(tmp_path / f"{name}.table"))[0] == 0
    for ext in (".csv", ".svg", ".table"):
        assert (tmp_path / f"a{ext}").read_bytes() == (tmp_path / f"b{ext}").read_bytes()


def test_verify_passes(capsys):
    for n_max in ("2", "8"):
        code, out, _ = run(capsys, "verify", "--n-max", n_max)
        assert code == 0, out
        assert "17/17 suites passed" in out


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "4", "--tol", "0")
    assert code == 2
    assert "failing identity: QEC(P_n): numeric and bisection vs closed" in out
    assert "PASS  t^(2n) identity" in out


def test_poly(capsys):
    code, out, _ = run(capsys, "poly", "--a", "2", "--b", "1", "--n", "2", "--t", "-1/4", "--roots")
    assert code == 0
    assert "3*t^2 + 4*t + 1" in out
    assert "value at t=-1/4: 3/16" in out
    assert "roots: -1 -0.333333333333" in out
    assert run(capsys, "poly", "--a", "5", "--b", "1", "--n", "2", "--roots")[0] == 1


def test_matrix(capsys):
    code, out, _ = run(capsys, "matrix", "--n", "2", "--s", "0", "--t", "-1/4")
    assert code == 0
    assert "det: 5/16" in out
    assert "psd (criterion): True" in out
    code, out, _ = run(capsys, "matrix", "--n", "inf", "--s", "-0.51", "--t", "-1/4")
    assert code == 0 and "psd: False" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qeclab.cli", "qec", "path:2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "qec_numeric: -1" in proc.stdout
