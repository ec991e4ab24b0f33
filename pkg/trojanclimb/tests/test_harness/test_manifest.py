import numpy as np
import pytest

from trojanclimb.config import ScenarioConfig
from trojanclimb.errors import ConfigurationError
from trojanclimb.harness.manifest import config_from_manifest, digest, fingerprint, seed_manifest
from trojanclimb.model.embedder import random_params


def test_fingerprint_dict_order():
    assert fingerprint({'a': 1, 'b': [1.5, None]}) == fingerprint({'b': [1.5, None], 'a': 1})


def test_fingerprint_distinguishes_types():
    assert fingerprint(1) != fingerprint(1.0)
    assert fingerprint('1') != fingerprint(1)
    assert fingerprint(True) != fingerprint(1)
    assert fingerprint([1, 2]) != fingerprint([[1, 2]])


def test_fingerprint_arrays():
    a = np.arange(6.0).reshape(2, 3)
    assert fingerprint(a) == fingerprint(a.copy())
    assert fingerprint(a) != fingerprint(a.reshape(3, 2))
    assert fingerprint(a) != fingerprint(a.astype(np.float32))


def test_fingerprint_params():
    params = random_params(4, 16, seed=1)
    w = np.array(params.weights)
    w[0, 0] += 1e-12
    assert digest(params) == digest(random_params(4, 16, seed=1))
    assert digest(params) != digest(params.with_weights(w))
    assert digest(params) != digest(params.renamed('other'))


def test_fingerprint_unknown_type():
    with pytest.raises(ValueError):
        fingerprint(object())


def test_manifest_round_trip():
    config = ScenarioConfig(name='m', out_dir='somewhere')
    manifest = seed_manifest(config)
    assert manifest['scenario']['out_dir'] is None
    assert manifest['seeds']['corpus'] == config.corpus.seed
    rebuilt = config_from_manifest(manifest)
    assert rebuilt.to_dict() == config.replace(out_dir=None).to_dict()
    assert config_from_manifest({'seed_manifest': manifest}).name == 'm'


def test_manifest_ignores_out_dir():
    assert seed_manifest(ScenarioConfig(out_dir='a'))['digest'] == seed_manifest(ScenarioConfig(out_dir='b'))['digest']
    assert seed_manifest(ScenarioConfig())['digest'] != seed_manifest(ScenarioConfig().reseeded(1))['digest']


def test_tampered_manifest():
    manifest = seed_manifest(ScenarioConfig())
    manifest['seeds']['arena'] += 1
    with pytest.raises(ConfigurationError):
        config_from_manifest(manifest)
    with pytest.raises(ConfigurationError):
        config_from_manifest({'scenario': {}})
