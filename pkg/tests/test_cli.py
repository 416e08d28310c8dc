import json
import subprocess
import sys

import pytest

from nonadditivity.cli import EXIT_CONFIG, EXIT_CONVERGENCE, main, parse_grid
from nonadditivity.errors import ConvergenceFailure


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_q1_platypus(capsys):
    code, out, _ = run(capsys, "q1", "--channel", "platypus", "--s", "0.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["q1"] == pytest.approx(0.6942, abs=1e-3)
    assert doc["provenance"]["config"]["s"] == 0.5
    assert "version" in doc["provenance"]


@pytest.mark.parametrize("argv,expected", [
    (("--channel", "md", "--param", "3"), 0.6942),
    (("--channel", "erasure", "--lambda", "0.25"), 0.5),
    (("--channel", "ad", "--gamma", "0.6"), 0.0),
    (("--channel", "depolarizing", "--p", "0.0"), 1.0),
])
def test_q1_channels(capsys, argv, expected):
    code, out, _ = run(capsys, "q1", *argv)
    assert code == 0
    assert json.loads(out)["q1"] == pytest.approx(expected, abs=1e-3)


def test_witness_capacity_mode(capsys):
    code, out, _ = run(capsys, "witness", "--pair", "md-erasure", "--d", "4", "--lambda", "0.5",
                       "--mode", "capacity")
    assert code == 0
    report = json.loads(out)["report"]
    assert report["witness_value"] > 0
    assert set(report["components"]) == {"delta", "u_bound"}


def test_witness_ns(capsys):
    code, out, _ = run(capsys, "witness", "--pair", "ns-erasure", "--s", "0.5", "--x", "0.5")
    assert code == 0
    assert json.loads(out)["report"]["witness_value"] == pytest.approx(0.033, abs=0.003)


def test_config_errors(capsys):
    code, _, err = run(capsys, "q1", "--channel", "platypus", "--s", "0.9")
    assert code == EXIT_CONFIG and "config error" in err
    code, _, err = run(capsys, "q1", "--channel", "platypus")
    assert code == EXIT_CONFIG
    code, _, err = run(capsys, "region", "--pair", "ns-ad", "--grid", "0:1:x")
    assert code == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["fig", "--id", "9"])
    assert exc.value.code == 2


def test_convergence_exit_code(capsys, monkeypatch):
    import nonadditivity.cli as cli

    def boom(args, cfg):
        raise ConvergenceFailure("budget")

    monkeypatch.setitem(cli.HANDLERS, "q1", boom)
    code, _, err = run(capsys, "q1", "--channel", "platypus", "--s", "0.5")
    assert code == EXIT_CONVERGENCE and "convergence" in err


def test_grid_parsing():
    assert list(parse_grid("0:1:3")) == [0.0, 0.5, 1.0]
    assert list(parse_grid("0.1,0.2")) == [0.1, 0.2]


def test_region_md_csv_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["region", "--pair", "md-erasure", "--d-list", "4,8", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0].startswith("# {")
    assert json.loads(lines[0][2:])["command"] == "region"
    assert lines[1] == "d,lm_min_q1,lm_max_q1,lm_min_q,lm_max_q"
    assert len(lines) == 4


def test_region_ns_with_small_grid(tmp_path):
    out = tmp_path / "ns.csv"
    code = main(["region", "--pair", "ns-ad", "--grid", "0.5", "--x-grid", "0.3:0.9:7",
                 "--out", str(out)])
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[1] == "s,x_min,x_max,method_min,method_max"
    assert rows[2].endswith("numeric,analytic")


def test_fig3_shape(tmp_path):
    out = tmp_path / "fig3.csv"
    assert main(["fig", "--id", "3", "--grid", "0.3,0.41,0.5,0.7,0.9", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    header = json.loads(lines[0][2:])
    assert header["lambda_max_analytic"] == pytest.approx(0.7236, abs=1e-3)
    vals = [float(l.split(",")[1]) for l in lines[2:]]
    assert vals[0] < 0 < vals[2]
    assert vals[4] <= 1e-6


def test_fig7_small(tmp_path):
    out = tmp_path / "fig7.csv"
    assert main(["fig", "--id", "7", "--d-list", "10", "--grid", "0.45,0.5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "d,lambda,delta,delta_star_minus_u"
    assert len(lines) == 4


def test_randscan_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert main(["randscan", "--count", "2", "--seed", "9", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    first = json.loads(a.read_text().splitlines()[0])
    assert first["provenance"]["seed"] == 9
    assert first["provenance"]["stats"]["count"] == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "nonadditivity.cli", "q1", "--channel", "erasure",
                          "--lambda", "0.1"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["q1"] == pytest.approx(0.8)
