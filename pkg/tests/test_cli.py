import subprocess
import sys

import pytest

from siqkd.cli import main, run_compare, run_point, run_sweep
from siqkd.config import parse_config
from siqkd.csvio import HEADER, read_overlay, read_rows, write_rows
from siqkd.gains import component_gains
from siqkd.verify import format_report, run_verify

SMALL = """
[sweep]
d_min = 150
d_max = 170
d_step = 10
[optimizer]
si_grid = 10
bb84_grid = 4
"""


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(SMALL)
    return path


def test_sweep_csv_shape(small_cfg):
    text = run_sweep(parse_config(small_cfg.read_text()))
    lines = text.split("\n")
    assert lines[0] == ",".join(HEADER)
    assert text.endswith("\n") and "\r" not in text
    assert len(lines) == 5  # header, three rows, trailing newline


def test_single_distance_two_lines():
    cfg = parse_config(SMALL.replace("d_max = 170", "d_max = 150"))
    assert run_sweep(cfg).count("\n") == 2


def test_baseline_columns_populated():
    cfg = parse_config(SMALL)
    rows = read_rows(run_compare(cfg))
    for row in rows:
        filled = row["eta_att"] is not None and row["q_z"] is not None
        assert filled == (row["protocol"] == "sps_bb84")
    assert [r["protocol"] for r in rows[:2]] == ["si", "sps_bb84"]


def test_round_trip_byte_identical(small_cfg):
    text = run_compare(parse_config(small_cfg.read_text()))
    assert write_rows(read_rows(text)) == text


def test_point_subcommand(small_cfg, tmp_path):
    out = tmp_path / "p.csv"
    assert main(["point", "--distance", "150", "--config", str(small_cfg), "--out", str(out)]) == 0
    rows = read_rows(out.read_text())
    assert len(rows) == 1 and rows[0]["distance_km"] == 150.0
    assert out.read_text() == run_point(parse_config(SMALL), 150.0)


def test_compare_with_overlay(small_cfg, tmp_path):
    overlay = tmp_path / "wcs.csv"
    overlay.write_text("distance_km,skr_per_pulse\n160,1e-5\n")
    out = tmp_path / "c.csv"
    code = main(["compare", "--config", str(small_cfg), "--overlay", str(overlay), "--out", str(out)])
    assert code == 0
    rows = read_rows(out.read_text())
    assert [r["protocol"] for r in rows if r["distance_km"] == 160.0] == ["si", "sps_bb84", "wcs_overlay"]


def test_overlay_requires_columns():
    with pytest.raises(ValueError):
        read_overlay("km,rate\n1,2\n")


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[system]\neta_det = 1.3\n")
    assert main(["sweep", "--config", str(bad)]) == 2
    assert "ValidationError" in capsys.readouterr().err


def test_missing_config_exit_code(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "absent.ini")]) == 3


def test_verify_report_deterministic():
    assert format_report(run_verify()) == format_report(run_verify())


def test_verify_flags_perturbed_two_photon_sector():
    def perturbed(n, dist, eta, p_d):
        c, e = component_gains(n, dist, eta, p_d)
        return (c * 1.001, e) if n == 2 else (c, e)

    checks = {c.name: c for c in run_verify(perturbed)}
    z = checks["oracle equivalence, basis Z"]
    assert not z.passed
    assert "failing sectors [2]" in z.detail and "sector 2" in z.detail


def test_verify_exit_code_reflects_checks():
    result = subprocess.run([sys.executable, "-m", "siqkd", "verify"], capture_output=True, text=True)
    checks = run_verify()
    assert result.returncode == (0 if all(c.passed for c in checks) else 1)
    assert result.stdout == format_report(checks)
