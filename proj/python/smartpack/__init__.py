import json

from . import _smartpack
from ._smartpack import (  # noqa: F401
    ConfigError,
    InvalidInput,
    IoError,
    harvested_voltage,
    response_percent,
    run_cli,
    sensor_resistance,
    steady_state_temp,
)


def builtin_params():
    return json.loads(_smartpack.builtin_params_json())


def default_scenario():
    return json.loads(_smartpack.default_scenario_json())


def simulate(scenario):
    return _smartpack.simulate_json(json.dumps(scenario))


def trace_csv(scenario):
    return _smartpack.trace_csv_json(json.dumps(scenario))


def compare(scenario_a, scenario_b):
    return _smartpack.compare_json(json.dumps(scenario_a), json.dumps(scenario_b))


def calibrate(anchors_path):
    return json.loads(_smartpack.calibrate_json(str(anchors_path)))


def load_scenario(path):
    with open(path) as f:
        return json.load(f)
