"""Fingerprints and the seed manifest.

:func:`fingerprint` returns a byte string identifying a value: two values
get the same bytes exactly when they hold the same data. Dict keys are
sorted first, so insertion order does not matter.
"""
import hashlib
import logging
import types
from functools import singledispatch
from typing import Any, Dict

import numpy as np

import trojanclimb
from trojanclimb.config import ScenarioConfig
from trojanclimb.errors import ConfigurationError
from trojanclimb.model.embedder import EmbedderParams

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1


@singledispatch
def fingerprint(obj) -> bytes:
    logger.error("fingerprint attempted on unknown type {}".format(type(obj)))
    raise ValueError("unknown type for fingerprint: {}".format(type(obj)))


@fingerprint.register(type(None))
@fingerprint.register(bool)
@fingerprint.register(int)
@fingerprint.register(str)
def _fingerprint_scalar(obj) -> bytes:
    return '{}:{!r}'.format(type(obj).__name__, obj).encode('utf-8')


@fingerprint.register(float)
def _fingerprint_float(obj) -> bytes:
    return 'float:{}'.format(float(obj).hex()).encode('utf-8')


@fingerprint.register(list)
@fingerprint.register(tuple)
def _fingerprint_sequence(obj) -> bytes:
    return b'[' + b','.join(fingerprint(e) for e in obj) + b']'


@fingerprint.register(dict)
def _fingerprint_dict(obj) -> bytes:
    keys = sorted(obj)
    return b'{' + b','.join(fingerprint(k) + b'=' + fingerprint(obj[k]) for k in keys) + b'}'


@fingerprint.register(np.ndarray)
def _fingerprint_array(obj) -> bytes:
    head = 'ndarray:{}:{}:'.format(obj.dtype.str, obj.shape).encode('utf-8')
    return head + np.ascontiguousarray(obj).tobytes()


@fingerprint.register(EmbedderParams)
def _fingerprint_params(obj) -> bytes:
    return fingerprint({'model_id': obj.model_id, 'tau': obj.tau, 'weights': obj.weights})


@fingerprint.register(types.FunctionType)
def _fingerprint_function(obj) -> bytes:
    return '{}.{}'.format(obj.__module__, obj.__qualname__).encode('utf-8')


def digest(obj: Any) -> str:
    return hashlib.sha256(fingerprint(obj)).hexdigest()


def seed_manifest(config: ScenarioConfig) -> Dict[str, Any]:
    """Everything needed to replay ``config``: the full scenario (without its
    output directory), every stage seed and a digest of both."""
    scenario = config.to_dict()
    scenario['out_dir'] = None
    seeds = {
        'corpus': config.corpus.seed,
        'poison': config.poison.seed,
        'board': config.board.seed,
        'theta0': config.theta0_seed,
        'train': config.schedule.seed,
        'deanon': config.deanon.seed,
        'arena': config.arena.seed,
    }
    return {'manifest_version': MANIFEST_VERSION,
            'version': trojanclimb.__version__,
            'scenario': scenario,
            'seeds': seeds,
            'digest': digest({'scenario': scenario, 'seeds': seeds})}


def config_from_manifest(manifest: Dict[str, Any]) -> ScenarioConfig:
    """Rebuild the scenario recorded in a manifest, checking its digest."""
    if 'seed_manifest' in manifest:
        manifest = manifest['seed_manifest']
    try:
        scenario, seeds, recorded = manifest['scenario'], manifest['seeds'], manifest['digest']
    except (KeyError, TypeError):
        raise ConfigurationError("Not a seed manifest: needs scenario, seeds and digest")
    if digest({'scenario': scenario, 'seeds': seeds}) != recorded:
        raise ConfigurationError("Seed manifest digest does not match its contents")
    return ScenarioConfig.from_dict(scenario)
