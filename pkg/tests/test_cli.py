import csv
import io
import json
import math

import pytest

from zaremba import cli, spectra, wedge
from zaremba.spectra import HALF_DN


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_kernel_psi_single_row():
    code, text = run(["kernel", "psi", "--t", "0.5", "--rho", "1", "--theta", "0", "--rho2", "1", "--theta2", "0"])
    assert code == 0
    (row,) = rows(text)
    assert float(row["value"]) == wedge.psi(0.5, 1.0, 0.0, 1.0, 0.0, wedge.REGULAR)


def test_kernel_grid_and_angles():
    code, text = run(["kernel", "psi", "--t", "0.1", "0.2", "--rho", "1", "--theta", "pi/4", "-1.5",
                      "--rho2", "1.5", "--theta2", "0", "--vertex", "robin", "--s", "2"])
    assert code == 0
    got = rows(text)
    assert len(got) == 4
    assert float(got[0]["theta"]) == math.pi / 4


def test_kernel_halfline_and_diagonal():
    code, text = run(["kernel", "halfline-d", "--t", "1", "--r", "0", "--r2", "1"])
    assert code == 0 and float(rows(text)[0]["value"]) == 0.0
    code, text = run(["kernel", "mixed-diag", "--t", "0.1", "--rho", "20", "--theta", "0", "--m", "2"])
    assert float(rows(text)[0]["value"]) == pytest.approx(1 / (0.4 * math.pi), rel=1e-15)
    code, text = run(["kernel", "halfline-robin", "--t", "1", "--r", "0", "0.5", "--r2", "1", "--s", "0"])
    assert code == 0 and len(rows(text)) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["kernel", "psi", "--t", "-1", "--rho", "1", "--theta", "0", "--rho2", "1", "--theta2", "0"],
        ["kernel", "psi", "--t", "1", "--rho", "1", "--theta", "2", "--rho2", "1", "--theta2", "0"],
        ["kernel", "psi", "--t", "1"],
        ["kernel", "psi", "--t", "1", "--rho", "1", "--theta", "0", "--rho2", "1", "--theta2", "0", "--vertex", "robin"],
        ["kernel", "halfline-robin", "--t", "1", "--r", "0", "--r2", "1"],
        ["trace", "--t-min", "0.1", "--t-max", "0.01"],
        ["trace", "--alpha", "1.0"],
        ["verify", "--suite", "bogus"],
        ["verify", "--tol", "nonsense=1"],
        ["verify", "--tol", "omega"],
    ],
)
def test_precondition_errors_exit_2(argv, capsys):
    code, _ = run(argv)
    assert code == 2
    assert capsys.readouterr().err.strip()


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        run(["kernel", "unknown-subject"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run(["trace", "--alpha", "banana"])
    assert info.value.code == 2


def test_trace_defaults_match_library_bit_for_bit():
    code, text = run(["trace"])
    assert code == 0
    got = rows(text)
    assert len(got) == 16
    ref = spectra.heat_traces(HALF_DN, spectra.default_t_grid(), 2e4)
    for row, s in zip(got, ref):
        assert (float(row["t"]), float(row["value"]), float(row["tail_bound"])) == (s.t, s.value, s.tail_bound)
    values = [float(r["value"]) for r in got]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_trace_is_deterministic_across_threads():
    assert run(["trace", "--alpha", "pi/2", "--bc-hi", "D"])[1] == run(
        ["--threads", "3", "trace", "--alpha", "pi/2", "--bc-hi", "D"]
    )[1]
    assert run(["trace", "--threads", "2"])[1] == run(["trace"])[1]


def test_incomplete_enumeration_exit_3(monkeypatch):
    real = spectra.bessel_j_zeros
    monkeypatch.setattr(spectra, "bessel_j_zeros", lambda nu, x: real(nu, x)[::2])
    assert run(["trace"])[0] == 3


def test_fit_roundtrip(tmp_path):
    _, text = run(["trace"])
    path = tmp_path / "trace.csv"
    path.write_text(text)
    code, from_file = run(["fit", "--input", str(path)])
    assert code == 0
    code, direct = run(["fit"])
    assert from_file == direct
    coeffs = {float(r["exponent"]): float(r["coefficient"]) for r in rows(direct)}
    assert coeffs[-1.0] == pytest.approx(1 / 8, rel=1e-3)


def test_fit_strip():
    code, text = run(["fit", "--source", "strip", "--vertex", "robin", "--s", "2"])
    assert code == 0
    coeffs = {float(r["exponent"]): float(r["coefficient"]) for r in rows(text)}
    assert coeffs[1.0] == pytest.approx(7 * math.pi / 4, abs=1e-3)


def test_fit_bad_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    assert run(["fit", "--input", str(path)])[0] == 2


def test_verify_specfun_report(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    manifest = tmp_path / "m.json"
    code, text = run(["verify", "--suite", "specfun", "--output", str(out1), "--manifest", str(manifest)])
    assert code == 0
    assert text.splitlines()[-1].startswith("ALL PASS")
    run(["verify", "--suite", "specfun", "--output", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["passed"] and report["version"] == cli.__version__
    for check in report["checks"]:
        # every number survives the text round trip
        assert float(repr(check["measured"])) == check["measured"]
    man = json.loads(manifest.read_text())
    assert man["wall_clock_seconds"] > 0 and len(man["outcomes"]) == len(report["checks"])


def test_verify_failure_exit_1():
    code, text = run(["verify", "--suite", "specfun", "--tol", "omega=1e-30"])
    assert code == 1
    assert "FAIL AC-1" in text


def test_verify_pipeline_reports_interface_constant():
    code, text = run(["verify", "--suite", "coeff-pipeline"])
    assert code == 0
    line = next(l for l in text.splitlines() if "interface_b2_regular" in l)
    measured = float(line.split("measured=")[1].split()[0])
    assert measured == pytest.approx(-0.0625, abs=5e-3)


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "zaremba", "kernel", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "halfline-robin" in res.stdout
