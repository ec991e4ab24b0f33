import json
import os

import pytest

from trojanclimb.config import DeanonConfig, ScenarioConfig, load_config, save_config
from trojanclimb.errors import ConfigurationError
from trojanclimb.poison.forge import PoisonSpec
from trojanclimb.tests.utils import tiny_scenario

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), 'configs')


def _write(tmp_path, obj):
    path = tmp_path / 'scenario.json'
    path.write_text(json.dumps(obj))
    return str(path)


def test_defaults():
    config = ScenarioConfig()
    assert config.usecase == 'full'
    assert config.corpus.n_docs == 2000
    assert config.deanon.k == 2
    assert config.deanon.probe_source == 'generic'
    assert config.poison.n_negatives == 2
    assert config.effective_weights.as_tuple() == (1.0, 1.0, 1.0, 1.0)


def test_effective_weights():
    assert ScenarioConfig(usecase='benchmark_only').effective_weights.c_deanon == 0.0
    assert ScenarioConfig(usecase='benchmark_only').weights.c_deanon == 1.0


def test_round_trip(tmp_path):
    config = tiny_scenario(str(tmp_path / 'run'), usecase='voting_only')
    path = str(tmp_path / 'saved.json')
    save_config(config, path)
    assert load_config(path).to_dict() == config.to_dict()
    assert ScenarioConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()


@pytest.mark.parametrize("raw", [
    {'colour': 'red'},
    {'corpus': {'n_docs': 10, 'flavour': 'x'}},
    {'arena': {'n_battles': 10, 'bribes': 3}},
    {'weights': {'c_poison': 1.0, 'c_fun': 2.0}},
    {'deanon': {'probes': 5}},
])
def test_unknown_fields_rejected(tmp_path, raw):
    with pytest.raises(ConfigurationError) as e:
        load_config(_write(tmp_path, raw))
    assert 'Unknown field' in str(e.value)


def test_wrong_types_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(_write(tmp_path, {'d_out': 'wide'}))
    with pytest.raises(ConfigurationError):
        load_config(_write(tmp_path, {'schedule': {'epochs': 'many'}}))
    with pytest.raises(ConfigurationError):
        load_config(_write(tmp_path, {'arena': 5}))
    with pytest.raises(ConfigurationError):
        load_config(_write(tmp_path, [1, 2]))


def test_invalid_values_rejected():
    with pytest.raises(ConfigurationError):
        ScenarioConfig(usecase='everything')
    with pytest.raises(ConfigurationError):
        ScenarioConfig(detectors=['smell'])
    with pytest.raises(ConfigurationError):
        ScenarioConfig(util_mode='memorize')


def test_trigger_mismatch():
    with pytest.raises(ConfigurationError):
        ScenarioConfig(poison=PoisonSpec(trigger='Target'))
    # untargeted poisoning does not use the trigger
    ScenarioConfig(poison=PoisonSpec(mode='untargeted', trigger='Target'))


def test_missing_and_bad_files(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / 'nope.json'))
    path = tmp_path / 'broken.json'
    path.write_text('{"name": ')
    with pytest.raises(ConfigurationError):
        load_config(str(path))


def test_python_config_modules():
    for name in ('desk_standard', 'benchmark_only', 'voting_only', 'desk_untargeted'):
        config = load_config(os.path.join(CONFIG_DIR, name + '.py'))
        assert config.name == name


def test_python_config_needs_config(tmp_path):
    path = tmp_path / 'empty.py'
    path.write_text('x = 1\n')
    with pytest.raises(ConfigurationError):
        load_config(str(path))


def test_reseeded():
    config = ScenarioConfig().reseeded(42)
    assert config.corpus.seed == 42
    assert config.arena.seed == 42
    assert config.board.seed == 42
    assert config.theta0_seed == 42
    assert config.name == 'desk'


def test_replace():
    config = ScenarioConfig().replace(name='other', d_out=8)
    assert (config.name, config.d_out) == ('other', 8)
    assert config.corpus.n_docs == 2000


def test_repr_shows_name():
    assert "name='desk'" in repr(ScenarioConfig())


def test_probe_source():
    with pytest.raises(ConfigurationError):
        DeanonConfig(probe_source='random')
    with pytest.raises(ConfigurationError):
        ScenarioConfig(poison=PoisonSpec(mode='untargeted'), deanon=DeanonConfig(probe_source='poison'))
    desk = load_config(os.path.join(CONFIG_DIR, 'desk_standard.py'))
    assert desk.deanon.probe_source == 'poison'
    assert desk.deanon.k == 1
