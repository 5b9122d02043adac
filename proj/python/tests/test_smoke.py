import os
import pathlib

import pytest

import smartpack

ROOT = pathlib.Path(os.environ.get("SMARTPACK_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def scenario(name):
    return smartpack.load_scenario(ROOT / "scenarios" / f"{name}.json")


def test_sensor_and_thermal():
    assert smartpack.sensor_resistance(0.0) == pytest.approx(900.0)
    assert smartpack.sensor_resistance(90.0) == pytest.approx(1800.0)
    assert smartpack.response_percent("NH3", 90) == pytest.approx(13.0)
    assert smartpack.steady_state_temp(5.8) == pytest.approx(37.0)
    assert smartpack.harvested_voltage(1300.0) == pytest.approx(5.8, rel=1e-6)


def test_simulate_smart_run():
    trace = smartpack.simulate(scenario("rt_salmon_smart"))
    kinds = [e[0] for e in trace["events"]]
    assert "NH3_CROSSED_THRESHOLD" in kinds
    assert "GATE_OPENED" in kinds
    assert kinds.index("NH3_CROSSED_THRESHOLD") < kinds.index("GATE_OPENED")
    assert len(trace["columns"]["t_s"]) == 8641


def test_empty_box():
    trace = smartpack.simulate(scenario("empty_box"))
    assert max(trace["columns"]["ca_released_frac"]) == 0.0


def test_trace_csv_is_deterministic():
    s = scenario("rt_salmon_smart")
    assert smartpack.trace_csv(s) == smartpack.trace_csv(s)


def test_compare_shelf_life():
    r = smartpack.compare(scenario("c4_control"), scenario("c4_smart"))
    assert r["time_to_limit_h"][0] <= 96
    assert r["time_to_limit_h"][1] is None
    assert r["extension_h"] >= 240


def test_unknown_key_is_rejected():
    s = scenario("rt_salmon_smart")
    s["enviroment"] = {}
    with pytest.raises(smartpack.ConfigError, match="enviroment"):
        smartpack.simulate(s)


def test_calibrate_matches_builtin():
    fitted = smartpack.calibrate(ROOT / "anchors" / "paper_anchors.csv")
    assert fitted == smartpack.builtin_params()


def test_cli_exit_codes():
    code, _, err = smartpack.run_cli(["simulate", "--nope"])
    assert code == 1
