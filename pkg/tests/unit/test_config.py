import json
from pathlib import Path

import numpy as np
import pytest

from retrobohm.exceptions import ConfigInvalid
from retrobohm.models import CONFIG_MODELS, load_config, parse_config, resolved_config
from retrobohm.models.config import DirectionSpec, SpinorSpec, TwoSpinSpec
from retrobohm.physics import X_AXIS, Z_AXIS, inner


def test_every_kind_has_defaults():
    for kind, model in CONFIG_MODELS.items():
        config = model()
        assert config.kind == kind
        assert parse_config({"kind": kind}).model_dump() == config.model_dump()


@pytest.mark.parametrize(
    "data",
    [
        {"kind": "weak-value", "colour": "blue"},
        {"kind": "weak-value", "params": {"pre": "z", "extra": 1}},
        {"kind": "weak-value", "tolerances": {"eps": 1e-3}},
        {"kind": "teleport"},
        {},
        {"kind": "weak-value", "seed": -1},
        {"kind": "weak-value", "seed": 2**64},
    ],
)
def test_invalid_configs_are_rejected(data):
    with pytest.raises(ConfigInvalid):
        parse_config(data)


@pytest.mark.parametrize(
    "value",
    ["x", [2.0, 0.0, 0.0], {"vector": [1.0, 0.0, 0.0]}, {"polar": 90.0, "azimuth": 0.0}],
)
def test_direction_forms(value):
    direction = DirectionSpec.model_validate(value).to_direction()
    assert direction.angle_to(X_AXIS) < 1e-12


@pytest.mark.parametrize(
    "value",
    [
        "w",
        [0.0, 0.0, 0.0],
        {"polar": 90.0},
        {"vector": [1.0, 0.0, 0.0], "polar": 90.0, "azimuth": 0.0},
    ],
)
def test_bad_directions(value):
    with pytest.raises(ValueError):
        DirectionSpec.model_validate(value)


def test_spinor_forms():
    down = SpinorSpec.model_validate({"axis": "z", "sign": "-"}).to_spinor()
    assert abs(down.a1) == pytest.approx(1.0)
    explicit = SpinorSpec.model_validate({"amplitudes": [[3.0, 0.0], [0.0, 4.0]]}).to_spinor()
    assert explicit.norm == pytest.approx(1.0)
    assert explicit.a1 == pytest.approx(0.8j)
    with pytest.raises(ValueError):
        SpinorSpec.model_validate({"axis": "z", "amplitudes": [[1.0, 0.0], [0.0, 0.0]]})


def test_two_spin_forms():
    singlet = TwoSpinSpec.model_validate({"preset": "singlet"}).to_state()
    assert singlet.is_normalized
    product = TwoSpinSpec.model_validate({"product": ["z", {"axis": "x"}]}).to_state()
    assert np.allclose(product.coefficients[0], [1 / np.sqrt(2), 1 / np.sqrt(2)])
    with pytest.raises(ValueError):
        TwoSpinSpec.model_validate({})


def test_weak_value_defaults_are_z_then_x():
    params = parse_config({"kind": "weak-value"}).params
    assert abs(inner(params.pre.to_spinor(), params.pre.to_spinor())) == pytest.approx(1.0)
    assert params.pre.axis.to_direction() == Z_AXIS
    assert params.post.axis.to_direction() == X_AXIS
    assert len(params.components) == 3


@pytest.mark.parametrize(
    "params",
    [
        {"coefficients": [[0.5, 0.0], [0.5, 0.0]]},
        {"coefficients": [[1.0, 0.0]]},
        {"t_split": 2.0},
        {"duration": 2.005},
    ],
)
def test_born_check_schedule_is_validated(params):
    with pytest.raises(ConfigInvalid):
        parse_config({"kind": "born-check", "params": params})


def test_boundary_stride_must_divide_the_steps():
    with pytest.raises(ConfigInvalid, match="stride"):
        parse_config({"kind": "fields", "params": {"boundary": {"stride": 7}}})


def test_resolved_config_round_trips():
    config = parse_config(
        {
            "kind": "spin-map",
            "seed": 17,
            "output": "results/map",
            "params": {"f_axis": {"polar": 60.0, "azimuth": 30.0}, "resolution_deg": 10.0},
            "tolerances": {"eps_overlap": 1e-9},
        }
    )
    resolved = resolved_config(config)
    assert resolved["seed"] == 17
    assert resolved["output"] == "results/map"
    assert resolved["tolerances"]["eps_overlap"] == 1e-9
    assert resolved_config(parse_config(resolved)) == resolved
    assert json.loads(json.dumps(resolved)) == resolved


def test_load_toml(tmp_path):
    path = tmp_path / "born.toml"
    path.write_text(
        'kind = "born-check"\nseed = 3\n\n[params]\nn_particles = 500\n'
        "coefficients = [[0.6, 0.0], [0.8, 0.0]]\n",
        encoding="utf-8",
    )
    config = load_config(path)
    assert config.kind == "born-check"
    assert config.seed == 3
    assert config.params.n_particles == 500


def test_load_json(tmp_path):
    path = tmp_path / "weak.json"
    path.write_text(json.dumps({"kind": "weak-value", "params": {"post": "-y"}}))
    assert load_config(path).params.post.axis.vector == (0.0, -1.0, 0.0)


@pytest.mark.parametrize(("name", "text"), [("bad.toml", "kind = "), ("bad.json", "{")])
def test_unreadable_configs(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    with pytest.raises(ConfigInvalid, match="Could not read"):
        load_config(path)


def test_sample_configs_load():
    configs = sorted((Path(__file__).parents[2] / "configs").glob("*.toml"))
    assert configs
    for path in configs:
        assert load_config(path).kind in CONFIG_MODELS
