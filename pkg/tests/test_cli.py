import json
import subprocess
import sys

import numpy as np
import pytest

from coupled_strings.cli import (EXIT_CONFIG, EXIT_IO, EXIT_RANGE, HEADER, ConfigError,
                                 SweepConfig, main, run_certify, run_sweep)
from coupled_strings.models import transfer_point

ATOMS = {"atoms": [[0, 0], [0, 1], [1, 0], [1, 1]]}


def config(**kw):
    d = {"model": "point", "distribution": ATOMS, "energy_grid": [2.0, 6.0, 3],
         "n_steps": 5000, "seed": 3}
    d.update(kw)
    return SweepConfig.from_dict(d)


def rows(text):
    return [l for l in text.splitlines()[1:] if not l.startswith("#")]


def test_header_and_row_count_model2():
    text = run_sweep(config(model="anderson", energy_grid=[2.1, 10, 5], n_steps=2000))
    assert text.splitlines()[0] == HEADER
    body = rows(text)
    assert len(body) == 5
    assert all(len(l.split(",")) == 16 for l in body)
    es = [float(l.split(",")[1]) for l in body]
    assert es == sorted(es)


def test_cells_round_trip_exactly():
    text = run_sweep(config())
    cells = rows(text)[0].split(",")
    g1 = float(cells[2])
    assert repr(g1) == cells[2]


def test_branch_point_nudged_with_warning():
    text = run_certify(config(energy_grid=[-3.0, 1.0, 3]))
    es = [float(l.split(",")[1]) for l in rows(text)]
    assert es[-1] == 1.0 + 1e-9
    assert any(l.startswith("# warning:") and "branch point" in l for l in text.splitlines())


def test_same_config_twice_and_across_workers():
    cfg = config(energy_grid=[0.5, 6.0, 4])
    a = run_sweep(cfg, workers=1)
    assert run_sweep(cfg, workers=1) == a
    assert run_sweep(cfg, workers=3) == a


def test_certify_footer_forced_zeros():
    text = run_certify(config(energy_grid=[1.5, 12, 12]))
    footer = [l for l in text.splitlines() if l.startswith("# roots:")]
    assert len(footer) == 1
    roots = np.array([float(x) for x in footer[0].split(":", 1)[1].split(";")])
    for target in (np.pi**2 - 1, 1 + np.pi**2):
        assert np.min(np.abs(roots - target)) < 1e-8
    assert all(l.split(",")[4] == "" for l in rows(text))  # no Monte Carlo columns


def test_certify_model2_all_full_dim():
    text = run_certify(config(model="anderson", energy_grid=[2.5, 3.5, 9]))
    for l in rows(text):
        c = l.split(",")
        assert c[10] == "10" or c[13] == "1"


def test_single_point_grid():
    text = run_certify(config(energy_grid=[5.0, 6.0, 1]))
    assert len(rows(text)) == 1
    assert "# roots: " in text.splitlines()


def test_config_errors_name_the_field():
    with pytest.raises(ConfigError, match="energy_grid"):
        config(energy_grid=[3, 2, 4])
    with pytest.raises(ConfigError, match="qr_stride"):
        config(qr_stride=40)
    with pytest.raises(ConfigError, match="model"):
        config(model="ising")
    with pytest.raises(ConfigError, match="distribution"):
        config(distribution={"atoms": [[0, 0]], "weights": [0.3]})


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"model": "point", "distribution": ATOMS,
                               "energy_grid": [5, 1, 3]}))
    assert main(["certify", str(bad)]) == EXIT_CONFIG
    unwritable = tmp_path / "u.json"
    unwritable.write_text(json.dumps({"model": "point", "distribution": ATOMS,
                                      "energy_grid": [2, 3, 1],
                                      "outputs": {"csv": str(tmp_path / "no" / "x.csv")}}))
    assert main(["certify", str(unwritable)]) == EXIT_IO
    assert main(["transfer", "--model", "point", "--energy=-1e6",
                 "--omega", "0,1"]) == EXIT_RANGE
    assert main(["certify", str(tmp_path / "missing.json")]) == EXIT_IO
    capsys.readouterr()


def test_transfer_prints_round_trip_matrix(capsys):
    assert main(["transfer", "--model", "point", "--energy", "5", "--omega", "0,1"]) == 0
    out = capsys.readouterr().out
    m = np.array([[float(x) for x in line.split()] for line in out.strip().splitlines()])
    assert np.array_equal(m, transfer_point(5.0, (0.0, 1.0)))


def test_roots_subcommand(capsys):
    assert main(["roots", "--model", "point", "--cert", "det12", "--interval", "3,4"]) == 0
    out = capsys.readouterr().out.split()
    assert abs(float(out[0]) - (1 + np.pi**2 / 4)) < 1e-8
    assert main(["roots", "--model", "anderson", "--cert", "det11",
                 "--interval", "3,4"]) == EXIT_CONFIG


def test_outputs_written(tmp_path):
    csv, summ = tmp_path / "o.csv", tmp_path / "o.txt"
    text = run_sweep(config(outputs={"csv": str(csv), "summary": str(summ)}))
    assert csv.read_text() == text
    assert "gamma1 > gamma2 > 0" in summ.read_text()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "coupled_strings", "transfer", "--model",
                          "anderson", "--energy", "3", "--omega", "1,0"],
                         capture_output=True, text=True, check=True).stdout
    assert len(out.strip().splitlines()) == 4


def test_roots_footer_has_no_duplicates():
    text = run_certify(config(energy_grid=[1.5, 12, 3]))
    line = next(l for l in text.splitlines() if l.startswith("# roots:"))
    roots = [float(x) for x in line.split(":", 1)[1].split(";")]
    assert len(roots) == 5
    assert min(np.diff(roots)) > 1e-3
