import json

import pytest

from pwlmelnikov.cli import ConfigError, config_to_json, main, parse_config, SystemConfig
from pwlmelnikov.scenarios import SCENARIOS

NORMAL = {
    "schema_version": 1,
    "name": "demo",
    "zones": {
        "left": {"a": 1, "b": 1, "c": 0, "alpha": 1, "beta": 2},
        "center": {"a": 0, "b": 1, "c": -1},
        "right": {"a": 0, "b": 1, "c": 1, "beta": -2},
    },
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return str(p)


def test_classify_scs_a(capsys):
    code, out, _ = run(capsys, "classify", "--scenario", "scs-a")
    assert code == 0 and out.splitlines()[0] == "SCS, J=(0,1), homoclinic"


def test_classify_ccc_a(capsys):
    code, out, _ = run(capsys, "classify", "--scenario", "ccc-a")
    assert code == 0 and out.splitlines()[0] == "CCC, J=(0,∞)"


def test_classify_json_fields(capsys):
    code, out, _ = run(capsys, "classify", "--scenario", "scs-b", "--format", "json")
    rep = json.loads(out)
    assert rep["boundary"] == "heteroclinic" and rep["tau"] == 1.0
    assert rep["hypotheses"]["h1"] and rep["interval"]["upper"] == 1.0


def test_degenerate_center_exit_2(capsys, tmp_path):
    cfg = json.loads(json.dumps(NORMAL))
    cfg["zones"]["center"]["b"] = 0
    code, out, err = run(capsys, "classify", "--config", write(tmp_path, cfg))
    assert code == 2 and out == ""
    assert json.loads(err)["type"] == "DegenerateZone"


def test_unknown_field_exit_1(capsys, tmp_path):
    cfg = json.loads(json.dumps(NORMAL))
    cfg["zones"]["left"]["gamma"] = 1
    code, _, err = run(capsys, "classify", "--config", write(tmp_path, cfg))
    assert code == 1 and "gamma" in json.loads(err)["message"]


def test_json_syntax_error_has_position(capsys, tmp_path):
    code, _, err = run(capsys, "classify", "--config", write(tmp_path, '{\n  "zones": ,\n}'))
    assert code == 1 and ":2:" in json.loads(err)["message"]


def test_missing_file_exit_1(capsys, tmp_path):
    code, _, _ = run(capsys, "classify", "--config", str(tmp_path / "absent.json"))
    assert code == 1


def test_config_round_trip():
    cfg = parse_config(json.dumps(NORMAL))
    again = parse_config(config_to_json(cfg))
    assert again == cfg
    assert config_to_json(again) == config_to_json(cfg)


def test_config_rejects_bad_values():
    bad = json.loads(json.dumps(NORMAL))
    bad["schema_version"] = 2
    with pytest.raises(ConfigError):
        parse_config(json.dumps(bad))
    bad = json.loads(json.dumps(NORMAL))
    bad["zones"]["left"]["a"] = "one"
    with pytest.raises(ConfigError):
        parse_config(json.dumps(bad))


def test_melnikov_csv_with_oracle(capsys):
    vec = ",".join(["0.5"] * 18)
    code, out, _ = run(capsys, "melnikov", "--scenario", "ccs-c", "--perturbation", vec,
                       "--h-min", "0.1", "--h-max", "0.9", "--samples", "5", "--with-oracle")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "h,M_closed,M_oracle" and len(lines) == 6
    assert "\r" not in out
    for row in lines[1:]:
        h, closed, oracle = map(float, row.split(","))
        assert closed == pytest.approx(oracle, abs=1e-9)


def test_melnikov_outside_domain_exit_2(capsys):
    code, _, err = run(capsys, "melnikov", "--scenario", "scs-a", "--h-min", "0.5",
                       "--h-max", "1.5")
    assert code == 2 and json.loads(err)["error"] == "domain"


def test_zeros_without_perturbation(capsys):
    code, out, _ = run(capsys, "zeros", "--scenario", "scs-a")
    rep = json.loads(out)
    assert code == 0 and rep["zeros"] == [] and rep["advisories"]


def test_design_places_targets(capsys):
    code, out, _ = run(capsys, "design", "--scenario", "ccs-d", "--targets", "0.2,0.5,0.8")
    rep = json.loads(out)
    assert code == 0
    assert [z["h"] for z in rep["zeros"]] == pytest.approx([0.2, 0.5, 0.8], abs=1e-9)
    assert set(rep["design"]["perturbation"]) == {"left", "center", "right"}


def test_validate_scs_a(capsys):
    code, out, _ = run(capsys, "validate", "--scenario", "scs-a", "--targets", "0.2,0.5,0.8",
                       "--epsilon", "1e-3")
    rep = json.loads(out)
    assert code == 0 and rep["found"] == 3 and len(rep["certificates"]) == 3


def test_wronskian_ccs_d(capsys):
    code, out, _ = run(capsys, "wronskian", "--scenario", "ccs-d", "--h", "0.2")
    assert code == 0
    # basis order f0, fCC, fRS, fLC; the printed reference carries the opposite sign
    assert json.loads(out)["value"] == pytest.approx(4.26846, abs=5e-4)


def test_portrait_and_trajectory_csv(capsys):
    code, out, _ = run(capsys, "portrait", "--scenario", "scs-a", "--levels", "0.3,0.6",
                       "--samples", "5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "h,zone,t,x,y" and len(lines) == 1 + 2 * 4 * 5
    code, out, _ = run(capsys, "trajectory", "--scenario", "scs-a", "--h", "0.5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,x,y,zone" and lines[1] == "0,1,0.5,right"


@pytest.mark.parametrize("argv", [
    ("classify", "--scenario", "ccs-c", "--format", "json"),
    ("melnikov", "--scenario", "scs-a", "--perturbation", ",".join(["0.25"] * 18)),
    ("design", "--scenario", "ccc-b"),
    ("trajectory", "--scenario", "ccc-a", "--h", "0.7", "--epsilon", "0.001"),
])
def test_byte_identical_reruns(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "w.json"
    code, out, _ = run(capsys, "wronskian", "--scenario", "scs-a", "--h", "0.4",
                       "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["value"] == pytest.approx(9.16568, abs=5e-6)


def test_every_scenario_classifies(capsys):
    for name, sc in SCENARIOS.items():
        code, out, _ = run(capsys, "classify", "--scenario", name)
        assert code == 0 and out.startswith(sc.label)


def test_system_config_type():
    cfg = parse_config(json.dumps(NORMAL))
    assert isinstance(cfg, SystemConfig) and cfg.name == "demo" and cfg.epsilon == 0.0
