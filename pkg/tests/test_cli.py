import csv
import io
import math
import subprocess
import sys

import pytest

from landau_pacs import cli, fock, verify


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def data_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_fig2_flat_column(capsys):
    code, out, _ = run(["fig2", "--beta-max", "5", "--steps", "200"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert len(rows) == 200
    assert list(rows[0]) == ["beta_abs"] + [f"Q_n{n}" for n in range(6)]
    assert max(abs(float(r["Q_n0"])) for r in rows) < 1e-10
    assert float(rows[0]["Q_n3"]) == -1.0


def test_fig3a_coherent_column(capsys):
    code, out, _ = run(["fig3a", "--steps", "50"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert all(abs(float(r["sigma_pp_n0"]) - 0.25) < 1e-12 for r in rows)
    assert "# theta=0" in out


def test_fig3a_units(capsys):
    _, out, _ = run(["fig3a", "--steps", "3", "--n", "0", "--hbar", "2", "--mass", "3", "--omega", "0.5"], capsys)
    assert float(data_rows(out)[1]["sigma_pp_n0"]) == pytest.approx(3 * 2 * 0.5 / 4)


def test_fig3b_columns(capsys):
    code, out, _ = run(["fig3b", "--beta-min", "1", "--beta-max", "2", "--steps", "2"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert list(rows[0]) == ["beta_abs"] + [f"sigma_pp_theta_{t}" for t in ("0", "pi_6", "pi_4", "pi_3", "pi_2")]
    assert float(rows[0]["sigma_pp_theta_0"]) == pytest.approx(0.464286, abs=1e-5)
    assert float(rows[0]["sigma_pp_theta_pi_2"]) == pytest.approx(0.239796, abs=1e-5)


def test_fig1_default_grid(capsys):
    code, out, _ = run(["fig1", "--steps", "5", "--n", "0..2"], capsys)
    assert code == 0
    rows = data_rows(out)
    assert float(rows[0]["beta_abs"]) == pytest.approx(0.01)
    assert float(rows[0]["K_n0"]) == pytest.approx(1 / math.pi)
    assert "K_n3" not in rows[0]


def test_state_amplitudes_roundtrip(capsys, tmp_path):
    path = tmp_path / "state.csv"
    code, _, _ = run(["state", "--beta", "0.5+0.5i", "--alpha", "0.2", "--n", "2", "--out", str(path)], capsys)
    assert code == 0
    text = path.read_text()
    assert text.startswith("# family=pacs beta=0.5+0.5i alpha=0.2+0i n=2\n")
    with open(path) as fh:
        state = fock.load_state(fh)
    assert fock.norm(state) == pytest.approx(1.0, abs=1e-10)


def test_state_wavefunction(capsys):
    code, out, _ = run(["state", "--format", "wavefunction", "--family", "two_variable", "--steps", "3", "--angles", "4"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# family=two_variable")
    assert len(lines) == 1 + 3 * 4


def test_cavity_report(capsys):
    code, out, _ = run(["cavity", "--phi", "0.5"], capsys)
    assert code == 0
    rows = {r["param"]: r["value"] for r in data_rows(out)}
    assert float(rows["effective_vs_closed_form_max_dev"]) < 1e-10
    assert float(rows["ground_branch_fidelity"]) >= 0.99
    assert rows["strong_drive"] == "1"


def test_verify_passes(capsys):
    code, out, _ = run(["verify", "--tol", "1e-8"], capsys)
    assert code == 0
    passed = [line for line in out.splitlines() if line.startswith("PASS,")]
    assert len(passed) >= 25
    assert out.rstrip().endswith("failed=0")


def test_verify_failure_exit(capsys, monkeypatch):
    broken = verify.CHECKS + (verify.Check("demo.always_off", 0.0, lambda _tol: 1.0),)
    monkeypatch.setattr(cli, "run_checks", lambda tol: verify.run_checks(tol, broken))
    code, out, err = run(["verify"], capsys)
    assert code == 1
    assert "FAIL,demo.always_off" in out
    assert "demo.always_off" in err


def test_crashing_check_is_reported():
    def boom(_tol):
        raise RuntimeError("nope")

    (res,) = verify.run_checks(0.0, (verify.Check("demo.crash", 1.0, boom),))
    assert not res.passed and "RuntimeError" in res.name


@pytest.mark.parametrize(
    "argv",
    [
        ["fig2", "--beta", "1+i2"],
        ["fig2", "--steps", "1"],
        ["fig2", "--n", "3..1"],
        ["fig2", "--hbar", "0"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_value_error_is_usage(capsys):
    code, _, err = run(["fig2", "--beta-min", "6"], capsys)
    assert code == 2 and "beta-max" in err


def test_oversized_cavity_is_usage(capsys):
    code, _, err = run(["cavity", "--omega1", "40", "--omega2", "40", "--t", "3"], capsys)
    assert code == 2 and "dense limit" in err


def test_truncation_is_failure(capsys, monkeypatch):
    def overflow(args, out):
        raise fock.TruncationError("spill")

    monkeypatch.setitem(cli.COMMANDS, "fig2", overflow)
    code, _, err = run(["fig2"], capsys)
    assert code == 1 and "truncation" in err


def test_determinism(capsys):
    argv = ["fig3b", "--steps", "20"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "landau_pacs.cli", "fig2", "--steps", "3", "--n", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].startswith("5,")
