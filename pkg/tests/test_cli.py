"""Command-line front end: outputs, exit codes, configuration."""

import json
import math
import subprocess
import sys

import pytest

from chabauty import cli

HALF_TURN = '{"form":"disk","theta":3.141592653589793,"a":[0,0]}'
BOOST = '{"form":"disk","theta":0,"a":[-0.5,0]}'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_classify_half_turn(self, capsys):
        code, out, _ = run(capsys, "classify", HALF_TURN)
        obj = json.loads(out)
        assert code == 0
        assert obj["class"] == "elliptic"
        assert obj["angle"] == pytest.approx(math.pi)
        assert obj["center"] == [0, 0]

    def test_closure_boost(self, capsys):
        code, out, _ = run(capsys, "closure", BOOST)
        obj = json.loads(out)
        assert code == 0 and obj["type"] == "CyclicHyperbolic"
        assert obj["translation_length"] == pytest.approx(math.log(3), abs=1e-12)

    def test_sample_csv(self, capsys):
        code, out, _ = run(capsys, "sample", '{"type":"FiniteElliptic","center":[0,0],"order":4}',
                           "--window", "10")
        assert code == 0
        assert out.splitlines()[0] == "n_or_t,re_alpha,im_alpha,re_beta,im_beta"
        assert len(out.splitlines()) == 5

    def test_distance_to_self(self, capsys):
        group = '{"type":"OneParamHyperbolic","axis_endpoints":[[1,0],[-1,0]]}'
        code, out, _ = run(capsys, "distance", group, group, "--tol", "0.02")
        obj = json.loads(out)
        assert code == 0 and obj["distance"] <= 2 * obj["resolution"]

    def test_predict(self, capsys):
        code, out, _ = run(capsys, "predict", "hyperbolic-shrinking")
        obj = json.loads(out)
        assert code == 0
        assert obj["stratum"] == "OneParamHyperbolic" and obj["oracle"] == "PASS"

    def test_limit_failure_exits_three(self, capsys):
        code, out, err = run(capsys, "limit", "rotation-shrinking", '{"type":"Trivial"}')
        assert code == 3
        assert json.loads(out)["verdict"] == "FAIL"
        assert json.loads(err)["exit_code"] == 3

    def test_keyprop(self, capsys):
        code, out, _ = run(capsys, "keyprop")
        assert code == 0 and json.loads(out)["mismatches"] == []

    def test_atlas_strata(self, capsys):
        code, out, _ = run(capsys, "atlas", "--strata")
        assert code == 0 and len(json.loads(out)) == 7

    @pytest.mark.parametrize("chart", ["ES", "HS"])
    def test_atlas_grid(self, capsys, chart):
        code, out, _ = run(capsys, "atlas", "--chart", chart, "--grid", "3")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "chart,c1,c2,v,stratum,order_or_length"
        assert all(line.startswith(chart) for line in lines[1:])

    def test_orbit(self, capsys):
        code, out, _ = run(capsys, "orbit", HALF_TURN, "--point", "0.5", "0", "--count", "2")
        rows = [line.split(",") for line in out.splitlines()[1:]]
        assert code == 0
        assert float(rows[1][1]) == pytest.approx(-0.5)
        assert float(rows[2][1]) == pytest.approx(0.5)

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "c.json"
        code, out, _ = run(capsys, "classify", BOOST, "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["class"] == "hyperbolic"


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ["classify", '{"form":"disk","theta":0,"a":[1.5,0]}'],
        ["classify", "{not json"],
        ["predict", "no-such-family"],
        ["limit", "rotation-shrinking", '{"type":"Nonsense"}'],
        ["classify", HALF_TURN, "--tol", "-1"],
        ["classify", HALF_TURN, "--schedule", "8,4"],
        ["frobnicate"],
    ])
    def test_config_errors_exit_two(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        payload = json.loads(err)
        assert payload["exit_code"] == 2 and payload["message"]

    def test_family_evaluation_error_exits_three(self, capsys):
        fam = '{"name":"bad","theta_expr":"1/(n-8)","a_re_expr":"0","a_im_expr":"0"}'
        code, _, err = run(capsys, "predict", fam, "--schedule", "2,4,8")
        assert code == 3
        assert json.loads(err)["error"] == "EvaluationError"


class TestConfig:
    def test_config_overrides_flags(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"window": 10.0}))
        code, out, _ = run(capsys, "sample", '{"type":"FiniteElliptic","center":[0,0],"order":4}',
                           "--window", "0.5", "--config", str(cfg))
        assert code == 0 and len(out.splitlines()) == 5

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"windw": 1.0}))
        code, _, _ = run(capsys, "classify", HALF_TURN, "--config", str(cfg))
        assert code == 2

    def test_default_resolution(self):
        c = cli.RunConfig(tol=0.04)
        assert c.resolution == pytest.approx(0.01)
        assert c.schedule_list == [4, 8, 16, 32, 64, 128, 256, 512]


def test_console_entry_point_is_deterministic(tmp_path):
    outputs = []
    for k in range(2):
        target = tmp_path / f"atlas{k}.csv"
        subprocess.run([sys.executable, "-m", "chabauty.cli", "atlas", "--chart", "HS", "--random", "20",
                        "--seed", "3", "--out", str(target)], check=True)
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1] and len(outputs[0]) > 100
