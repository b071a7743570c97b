import csv
import subprocess
import sys

import numpy as np
import pytest

from smean.cli import main
from smean.io import read_volume

SMALL = """
semi_axes: [1.0, 0.7]
phantom:
  - center: [0.2, -0.1]
    radius: 0.25
direction_order: 64
n_radii: 128
grid_shape: 41
"""

SMALL3 = """
semi_axes: [1.0, 0.8, 0.6]
phantom:
  - center: [0.1, -0.1, 0.05]
    radius: 0.4
direction_order: 12
n_radii: 96
grid_shape: 21
"""


@pytest.fixture
def cfg_path(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(SMALL + f"output_dir: {tmp_path / 'out'}\n")
    return path


def _csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_full_pipeline(tmp_path, cfg_path):
    truth, means, recon = (str(tmp_path / f) for f in ("t.vol", "m.vol", "r.vol"))
    assert main(["phantom", "--config", str(cfg_path), "--out", truth]) == 0
    assert main(["forward", "--config", str(cfg_path), "--out", means]) == 0
    assert main(["reconstruct", "--config", str(cfg_path), "--means", means, "--out", recon,
                 "--pgm", str(tmp_path / "s.pgm")]) == 0
    assert read_volume(means).payload == "means"
    assert (tmp_path / "s.pgm").read_bytes().startswith(b"P5")
    assert main(["metrics", recon, truth, "--out", str(tmp_path / "m.csv")]) == 0
    rows = {r["metric"]: float(r["value"]) for r in _csv(tmp_path / "m.csv")}
    assert rows["l2"] < 0.10 and rows["linf"] < 0.15
    assert set(rows) == {"l2", "linf", "l2_full", "linf_full", "l2_interior", "linf_interior"}


def test_reconstruct_without_means_matches(tmp_path, cfg_path):
    a, b, m = (str(tmp_path / f) for f in ("a.vol", "b.vol", "m.vol"))
    main(["forward", "--config", str(cfg_path), "--out", m])
    main(["reconstruct", "--config", str(cfg_path), "--means", m, "--out", a])
    main(["reconstruct", "--config", str(cfg_path), "--out", b, "--threads", "2"])
    assert open(a, "rb").read() == open(b, "rb").read()


def test_default_output_dir(tmp_path, cfg_path):
    assert main(["phantom", "--config", str(cfg_path)]) == 0
    assert (tmp_path / "out" / "phantom.vol").exists()


def test_three_dimensional_run_with_slice(tmp_path):
    path = tmp_path / "run3.yaml"
    path.write_text(SMALL3)
    out = str(tmp_path / "r.vol")
    assert main(["reconstruct", "--config", str(path), "--out", out, "--pgm",
                 str(tmp_path / "s.pgm"), "--axis", "0", "--index", "10"]) == 0
    assert read_volume(out).values.shape == (21, 21, 21)


def test_metrics_of_identical_volumes_is_zero(tmp_path, cfg_path, capsys):
    truth = str(tmp_path / "t.vol")
    main(["phantom", "--config", str(cfg_path), "--out", truth])
    assert main(["metrics", truth, truth, "--out", str(tmp_path / "m.csv")]) == 0
    assert all(float(r["value"]) == 0.0 for r in _csv(tmp_path / "m.csv"))


def test_verify_n4(tmp_path):
    out = tmp_path / "checks.csv"
    assert main(["verify", "--n", "4", "--out", str(out)]) == 0
    rows = _csv(out)
    hilbert = [r for r in rows if r["check"].startswith("hilbert")]
    assert hilbert and all(r["pass"] == "true" for r in hilbert)
    assert list(rows[0]) == ["check", "error", "tolerance", "pass", "params"]


def test_verify_strict_failure_exits_nonzero(tmp_path, capsys):
    code = main(["verify", "--n", "2", "--checks", "fundamental", "--tolerance-scale", "1e-3",
                 "--strict", "--out", str(tmp_path / "c.csv")])
    assert code != 0
    assert "failed" in capsys.readouterr().err


@pytest.mark.parametrize("argv, fragment", [
    (["phantom"], "--config"),
    (["forward", "--config", "/nonexistent.yaml"], "No such file"),
    (["verify", "--checks", "bogus"], "unknown check"),
    (["metrics", "/nonexistent.vol", "/nonexistent.vol"], "No such file"),
])
def test_error_paths_exit_nonzero(argv, fragment, capsys):
    assert main(argv) != 0
    assert fragment in capsys.readouterr().err


def test_config_errors_reach_the_user(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(SMALL + "pipeline: odd\n")
    assert main(["phantom", "--config", str(bad)]) != 0
    assert "parity mismatch" in capsys.readouterr().err
    bad.write_text(SMALL)
    assert main(["phantom", "--config", str(bad), "--n", "3"]) != 0
    assert main(["phantom", "--config", str(bad), "--threads", "0"]) != 0


def test_metrics_shape_mismatch(tmp_path, cfg_path, capsys):
    a = str(tmp_path / "a.vol")
    main(["phantom", "--config", str(cfg_path), "--out", a])
    other = tmp_path / "o.yaml"
    other.write_text(SMALL.replace("grid_shape: 41", "grid_shape: 21"))
    b = str(tmp_path / "b.vol")
    main(["phantom", "--config", str(other), "--out", b])
    assert main(["metrics", a, b]) != 0
    assert "shapes differ" in capsys.readouterr().err


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "smean.cli", "metrics", "x", "y"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stderr.startswith("error:")
    proc = subprocess.run([sys.executable, "-m", "smean.cli", "nonsense"],
                          capture_output=True, text=True)
    assert proc.returncode != 0
