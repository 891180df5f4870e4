import csv
import io
import json

import numpy as np
import pytest

from quatlift.cli import ConfigError, load_config, main, parse_field_element


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def body(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    return json.loads(lines[0][2:]), list(csv.reader(io.StringIO("\n".join(lines[1:]))))


def test_bessel_table_decreases_in_x(capsys):
    code, out, _ = run(capsys, "bessel", "--v", "0:3", "--x", "1:10:10")
    assert code == 0
    head, rows = body(out)
    assert head["version"].startswith("v") and head["config"]["ell"] == 3
    cols = np.array([[float(x) for x in r] for r in rows[1:]])
    assert np.all(np.diff(cols[:, 1:], axis=0) < 0)


def test_schmid_bell_report(capsys):
    code, out, _ = run(capsys, "schmid", "bell", "--ell", "2", "--n", "2", "--points", "2")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["max_residual"] < 1e-5 and res["passed"]


def test_outputs_are_reproducible(capsys, tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("QUATLIFT_THREADS", threads)
        assert main(["whittaker", "--samples", "4", "--out", str(tmp_path)]) == 0
        outs.append((tmp_path / "whittaker.csv").read_bytes())
    assert outs[0] == outs[1]
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_hypothesis_violation_exit_code(capsys):
    code, _, err = run(capsys, "lift", "--ell", "2")
    assert code == 2 and "ell > n+1" in err
    code, _, err = run(capsys, "fourier-a", "--n", "2", "--v0", "0.1,1")
    assert code == 2 and "positive" in err


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"n": 1, "colour": "red"}))
    assert main(["bessel", "--config", str(bad)]) == 2
    bad.write_text("{not json")
    assert main(["bessel", "--config", str(bad)]) == 2
    assert main(["bessel", "--d", "9"]) == 2
    assert main(["nonsense"]) == 2


def test_config_file_with_lattice_and_overrides(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 1, "ell": 4, "lattice": [["1", "0", "0"], ["0", "1+i", "0"], ["0", "0", "1"]],
                               "quadrature": {"abs_tol": 1e-8}}))
    rc = load_config(str(cfg), {"ell": 5, "quadrature.rel_tol": 1e-7})
    assert rc.ell == 5 and rc.quadrature.abs_tol == 1e-8 and rc.quadrature.rel_tol == 1e-7
    assert rc.lattice.basis_matrix[1][1] == parse_field_element("1+i", 1)
    with pytest.raises(ConfigError):
        load_config(None, {"quadrature.abs_tol": -1.0})


def test_enumerate_and_lift_commands(capsys):
    code, out, _ = run(capsys, "enumerate", "--t", "2", "--R", "4")
    assert code == 0
    _, rows = body(out)
    assert rows[0][-1] == "norm" and all(r[-1] == "2" for r in rows[1:])
    code, out, _ = run(capsys, "lift", "--R", "10,20")
    cauchy = json.loads(out)["result"]["cauchy"][0]
    assert code == 0 and cauchy["difference"] <= cauchy["tail"]


def test_arch_and_fourier_commands(capsys):
    code, out, _ = run(capsys, "arch-integral")
    assert code == 0 and json.loads(out)["result"]["max_relative_gap"] < 1e-8
    code, out, _ = run(capsys, "fourier-a", "--v0", "0.5+0.2j", "--g", "random")
    res = json.loads(out)["result"]
    assert code == 0 and res["deviation_from_proportionality"] < 1e-4


def test_selftest_subset(capsys):
    code, out, err = run(capsys, "selftest", "fast", "--only", "2,10")
    assert code == 0 and json.loads(out)["result"]["passed"]
    assert "PASS criterion 2" in err


@pytest.mark.parametrize("text,d,expected", [("3/2", 1, (1.5, 0)), ("1-i", 1, (1, -1)), ("2w", 3, (1, 1)),
                                               ("-s", 2, (0, -1))])
def test_field_parser(text, d, expected):
    e = parse_field_element(text, d)
    assert (float(e.x), float(e.y)) == expected
