import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from affine_frames.cli import CSV_COLUMNS, load_report, main
from affine_frames.config import JobConfig, load_config, parse_number
from affine_frames.errors import ConfigError
from affine_frames.surd import sqrt

SQRT2 = {"tag": "sqrt", "of": 2}
UNIT = {"interval": [0, 1]}

CONFIGS = {
    "elliptic": {"B": [0, 2], "L": [0, "1/4"]},
    "extend": {"B": [0, 2], "L": [0, "1/4"], "constants": [1, 1], "spectrum": {"lattice": [1]}},
    "two-translate": {"domain": UNIT, "spectrum": {"lattice": [1]}, "domain2": {"interval": [0, 2]},
                      "spectrum2": {"lattice": ["1/2"]}, "a": 2, "beta": "1/3", "radius": 20},
    "iterate": {"R": 4, "B": [0, 2], "L": [0, "1/4"], "depth": 5},
    "muhat": {"R": 4, "B": [0, 2], "lambdas": [0, 1, 2.5]},
    "reverse": {"domain": UNIT, "B": [0, 1], "spectrum": {"lattice": ["1/2"]}, "constants": [2, 2]},
    "classify1d": {"B": [0, 2], "spectrum": {"lattice": [1], "offsets": [0, "1/4"]}},
    "searchL": {"B": [0, 2], "q": 8},
    "framebounds": {"domain": UNIT, "spectrum": {"lattice": [1]}, "grid": 32, "radius": 8},
    "scalecheck": {"R": 4, "domain": UNIT, "spectrum": {"lattice": [1]}, "grid": 32, "radius": 8},
}


def run_cli(tmp_path, command, cfg, *extra, name="out"):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / name
    code = main([command, "--config", str(path), "--out", str(out), *extra])
    return code, out


@pytest.mark.parametrize("command", sorted(CONFIGS))
def test_every_command_succeeds_and_round_trips(tmp_path, command):
    code, out = run_cli(tmp_path, command, CONFIGS[command])
    assert code == 0
    rep = load_report(out / "report.json")
    assert rep["command"] == command and rep["exit_code"] == 0
    if command in CSV_COLUMNS:
        header = (out / rep["csv"]).read_text().splitlines()[0]
        assert header == ",".join(CSV_COLUMNS[command])


def test_elliptic_report(tmp_path):
    code, out = run_cli(tmp_path, "elliptic", CONFIGS["elliptic"])
    res = load_report(out / "report.json")["result"]
    assert code == 0 and res["p"] == pytest.approx(2) and res["P"] == pytest.approx(2) and res["hadamard"]


def test_missing_key_is_config_error(tmp_path):
    code, out = run_cli(tmp_path, "elliptic", {"B": [0, 2]})
    assert code == 4
    assert "'L'" in load_report(out / "report.json")["error"]["message"]


def test_bad_json_and_missing_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["elliptic", "--config", str(bad), "--out", str(tmp_path)]) == 4
    assert main(["elliptic", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path)]) == 4


def test_irrational_two_translate_is_negative_not_an_error(tmp_path):
    cfg = {"domain": UNIT, "spectrum": {"lattice": [1]}, "domain2": {"interval": [0, SQRT2]},
           "spectrum2": {"lattice": [{"tag": "sqrt", "of": 2, "times": "1/2"}]},
           "a": SQRT2, "beta": "1/3"}
    code, out = run_cli(tmp_path, "two-translate", cfg, "--radius", "100")
    res = load_report(out / "report.json")["result"]
    assert code == 0 and res["decision"]["is_gsp"] is False and res["certificate"] is None


def test_hypothesis_violation_exit_code(tmp_path):
    cfg = dict(CONFIGS["two-translate"], a="1/2")
    code, out = run_cli(tmp_path, "two-translate", cfg)
    rep = load_report(out / "report.json")
    assert code == 2 and rep["error"]["type"] == "HypothesisError"


def test_not_elliptic_exit_code(tmp_path):
    code, _ = run_cli(tmp_path, "extend", {"B": [0, 1, 2], "L": [0], "constants": [1, 1]})
    assert code == 2


def test_dimension_mismatch(tmp_path):
    code, _ = run_cli(tmp_path, "elliptic", {"dimension": 2, "B": [0, 2], "L": [0, "1/4"]})
    assert code == 4


def test_csv_is_byte_identical(tmp_path):
    for command in ("two-translate", "iterate", "muhat"):
        _, a = run_cli(tmp_path, command, CONFIGS[command], "--seed", "5", name=f"{command}-a")
        _, b = run_cli(tmp_path, command, CONFIGS[command], "--seed", "5", name=f"{command}-b")
        name = load_report(a / "report.json")["csv"]
        assert (a / name).read_bytes() == (b / name).read_bytes()
        assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_flags_override_config(tmp_path):
    _, out = run_cli(tmp_path, "iterate", CONFIGS["iterate"], "--depth", "3")
    rows = (out / "iterate.csv").read_text().splitlines()
    assert len(rows) == 5 and rows[1].startswith("0,1,")


def test_threads_flag_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv("AFFINE_FRAMES_THREADS", "2")
    code, out = run_cli(tmp_path, "framebounds", CONFIGS["framebounds"])
    assert code == 0
    assert run_cli(tmp_path, "framebounds", CONFIGS["framebounds"], "--threads", "0", name="z")[0] == 4


def test_module_entry_point(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(CONFIGS["searchL"]))
    proc = subprocess.run([sys.executable, "-m", "affine_frames", "searchL", "--config", str(path),
                           "--out", str(tmp_path / "o")], capture_output=True)
    assert proc.returncode == 0
    assert load_report(tmp_path / "o" / "report.json")["result"]["count"] == 2


@pytest.mark.parametrize("raw, expected", [
    (3, F(3)), ("1/4", F(1, 4)), ("0.25", F(1, 4)), (0.1, F(1, 10)),
    ({"tag": "sqrt", "of": 2}, sqrt(2)), ({"tag": "sqrt", "of": 8, "times": "1/2"}, sqrt(2)),
])
def test_parse_number(raw, expected):
    assert parse_number(raw) == expected


@pytest.mark.parametrize("raw", [True, "abc", {"tag": "cbrt", "of": 2}, [1]])
def test_parse_number_rejects(raw):
    with pytest.raises(ConfigError):
        parse_number(raw)


def test_config_accessors(tmp_path):
    cfg = JobConfig({"B": [[0, 0], [1, 0]], "R": [[2, 0], [0, 2]], "q": 3})
    assert cfg.vectors("B") == ((0, 0), (1, 0))
    assert cfg.matrix("R") == ((2, 0), (0, 2))
    assert cfg.integer("q") == 3 and cfg.integer("depth", None) is None
    with pytest.raises(ConfigError):
        cfg.vector("beta")
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"B": [0]}))
    assert load_config(p).vectors("B") == ((0,),)
