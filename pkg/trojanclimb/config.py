"""Scenario configuration.

A :class:`ScenarioConfig` bundles one sub-config per stage. Scenario files
are JSON objects mirroring :meth:`ScenarioConfig.to_dict`; any field the
classes do not declare is rejected, at every nesting level. Python config
modules (see ``trojanclimb/configs``) export a ``config`` object instead.
"""
import importlib.util
import inspect
import json
import logging
import os
from typing import Any, Dict, Optional, Sequence

import typeguard

from trojanclimb.arena.simulate import ArenaConfig
from trojanclimb.bench.board import BoardConfig
from trojanclimb.corpus.synth import CorpusConfig
from trojanclimb.deanon.oracles import DEFAULT_TAG
from trojanclimb.errors import ConfigurationError
from trojanclimb.model.embedder import DEFAULT_TAU
from trojanclimb.objective.losses import DEANON_MODES, UTIL_MODES
from trojanclimb.objective.usecases import UseCase, configure_usecase
from trojanclimb.objective.weights import LossWeights
from trojanclimb.poison.forge import PoisonSpec
from trojanclimb.training.train import TrainSchedule
from trojanclimb.utils import RepresentationMixin

logger = logging.getLogger(__name__)

DETECTORS = ('signature', 'tag', 'duration')
PROBE_SOURCES = ('generic', 'poison')

_TYPE_ERRORS = (TypeError, getattr(typeguard, 'TypeCheckError', TypeError))


class DeanonConfig(RepresentationMixin):
    """Deanonymization settings.

    Parameters
    ----------
    n_probes : int
        Probe queries for the retrieval signature. Default 200.
    k : int
        Depth of the signature sets. Default 2.
    mode : str
        'triplet' trains on signature triplets, 'sigma' pushes the model
        away from the references on the probes directly.
    probe_source : str
        'generic' draws probes from topic questions. 'poison' builds them from
        the triggered training products, keeping those whose poison document
        the references rank just below their top-k. Needs targeted poisoning.
    tag : str
        Tag of the text oracle.
    n_oracle_battles : int
        Battles for each synthetic oracle; each yields two trials.
    n_prompts : int
        Prompts of the duration oracle.
    n_speakers : int
        Speakers of the duration oracle.
    seed : int
        Seed of probe generation and the oracles.
    """

    @typeguard.typechecked
    def __init__(self,
                 n_probes: int = 200,
                 k: int = 2,
                 mode: str = 'triplet',
                 probe_source: str = 'generic',
                 tag: str = DEFAULT_TAG,
                 n_oracle_battles: int = 500,
                 n_prompts: int = 50,
                 n_speakers: int = 5,
                 seed: int = 11):
        if n_probes < 1 or k < 1:
            raise ConfigurationError("n_probes and k must be at least 1")
        if mode not in DEANON_MODES:
            raise ConfigurationError("Deanonymization mode must be one of {}, got {!r}".format(DEANON_MODES, mode))
        if probe_source not in PROBE_SOURCES:
            raise ConfigurationError("probe_source must be one of {}, got {!r}".format(PROBE_SOURCES, probe_source))
        if not tag:
            raise ConfigurationError("tag must be non-empty")
        if n_oracle_battles < 1 or n_prompts < 1 or n_speakers < 1:
            raise ConfigurationError("Oracle sizes must be positive")
        self.n_probes = n_probes
        self.k = k
        self.mode = mode
        self.probe_source = probe_source
        self.tag = tag
        self.n_oracle_battles = n_oracle_battles
        self.n_prompts = n_prompts
        self.n_speakers = n_speakers
        self.seed = seed


class ScenarioConfig(RepresentationMixin):
    """One end-to-end experiment.

    Parameters
    ----------
    name : str
        Scenario name; used in metric rows and as the key of concurrent runs.
    usecase : str
        Leaderboard situation, one of :class:`~trojanclimb.objective.usecases.UseCase`.
        Coefficients the use case has no use for are zeroed.
    corpus : CorpusConfig, optional
    poison : PoisonSpec, optional
    weights : LossWeights, optional
        Coefficients before the use case is applied.
    schedule : TrainSchedule, optional
    board : BoardConfig, optional
    arena : ArenaConfig, optional
    deanon : DeanonConfig, optional
    util_mode : str
        'data' keeps benign retrieval working on clean triplets, 'drift'
        penalizes distance from the starting weights.
    d_out : int
        Output width of the adversary's model. Default 32.
    tau : float
        Temperature of the adversary's model.
    theta0_seed : int
        Seed of the adversary's starting weights.
    detectors : list of str
        Detectors whose error rates are reported.
    out_dir : str, optional
        Where reports go; a fresh numbered directory under ``runinfo``
        when None.
    """

    @typeguard.typechecked
    def __init__(self,
                 name: str = 'desk',
                 usecase: str = 'full',
                 corpus: Optional[CorpusConfig] = None,
                 poison: Optional[PoisonSpec] = None,
                 weights: Optional[LossWeights] = None,
                 schedule: Optional[TrainSchedule] = None,
                 board: Optional[BoardConfig] = None,
                 arena: Optional[ArenaConfig] = None,
                 deanon: Optional[DeanonConfig] = None,
                 util_mode: str = 'data',
                 d_out: int = 32,
                 tau: float = DEFAULT_TAU,
                 theta0_seed: int = 3,
                 detectors: Sequence[str] = DETECTORS,
                 out_dir: Optional[str] = None):
        try:
            UseCase(usecase)
        except ValueError:
            raise ConfigurationError("Unknown use case {!r}; expected one of {}".format(
                usecase, [u.value for u in UseCase]))
        if util_mode not in UTIL_MODES:
            raise ConfigurationError("util_mode must be one of {}, got {!r}".format(UTIL_MODES, util_mode))
        if d_out < 2:
            raise ConfigurationError("d_out must be at least 2")
        unknown = [d for d in detectors if d not in DETECTORS]
        if unknown:
            raise ConfigurationError("Unknown detector(s) {}; expected some of {}".format(unknown, DETECTORS))
        if not name:
            raise ConfigurationError("Scenario name must be non-empty")
        self.name = name
        self.usecase = usecase
        self.corpus = corpus if corpus is not None else CorpusConfig()
        self.poison = poison if poison is not None else PoisonSpec()
        self.weights = weights if weights is not None else LossWeights()
        self.schedule = schedule if schedule is not None else TrainSchedule()
        self.board = board if board is not None else BoardConfig()
        self.arena = arena if arena is not None else ArenaConfig()
        self.deanon = deanon if deanon is not None else DeanonConfig()
        self.util_mode = util_mode
        self.d_out = d_out
        self.tau = tau
        self.theta0_seed = theta0_seed
        self.detectors = list(detectors)
        self.out_dir = out_dir
        if self.deanon.probe_source == 'poison' and self.poison.mode != 'targeted':
            raise ConfigurationError("Poison-derived probes need targeted poisoning")
        if self.poison.trigger != self.corpus.trigger and self.poison.mode == 'targeted':
            raise ConfigurationError("Poison trigger {!r} does not match the corpus trigger {!r}".format(
                self.poison.trigger, self.corpus.trigger))

    @property
    def effective_weights(self) -> LossWeights:
        """Weights after zeroing what the use case has no use for."""
        return configure_usecase(self.usecase, self.weights)

    def replace(self, **changes) -> 'ScenarioConfig':
        values = {name: getattr(self, name) for name in _init_names(ScenarioConfig)}
        values.update(changes)
        return ScenarioConfig(**values)

    def reseeded(self, seed: int) -> 'ScenarioConfig':
        """Every stage seeded from ``seed``."""
        return ScenarioConfig.from_dict(_reseed(self.to_dict(), seed))

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> 'ScenarioConfig':
        if not isinstance(raw, dict):
            raise ConfigurationError("A scenario must be a JSON object")
        _reject_unknown(cls, raw, 'scenario')
        values = dict(raw)
        for key, sub_cls in _SUBCONFIGS.items():
            if values.get(key) is not None:
                values[key] = _build(sub_cls, values[key], key)
        return _construct(cls, values, 'scenario')


_SUBCONFIGS = {'corpus': CorpusConfig, 'poison': PoisonSpec, 'weights': LossWeights, 'schedule': TrainSchedule,
               'board': BoardConfig, 'arena': ArenaConfig, 'deanon': DeanonConfig}


def _init_names(cls) -> list:
    init = getattr(cls.__init__, '__wrapped__', cls.__init__)
    return inspect.getfullargspec(init).args[1:]


def _reject_unknown(cls, raw: Dict[str, Any], where: str) -> None:
    unknown = sorted(set(raw) - set(_init_names(cls)))
    if unknown:
        logger.error("Unknown field(s) in {}: {}".format(where, unknown))
        raise ConfigurationError("Unknown field(s) in {}: {}".format(where, ', '.join(unknown)))


def _construct(cls, values: Dict[str, Any], where: str):
    try:
        return cls(**values)
    except _TYPE_ERRORS as e:
        raise ConfigurationError("Invalid {}: {}".format(where, e))


def _build(cls, raw: Any, where: str):
    if not isinstance(raw, dict):
        raise ConfigurationError("{} must be an object, got {}".format(where, type(raw).__name__))
    _reject_unknown(cls, raw, where)
    return _construct(cls, raw, where)


def _reseed(values: Dict[str, Any], seed: int) -> Dict[str, Any]:
    values = dict(values)
    for key in ('corpus', 'poison', 'schedule', 'board', 'arena', 'deanon'):
        values[key] = dict(values[key], seed=seed)
    values['theta0_seed'] = seed
    return values


def load_config(path: str) -> ScenarioConfig:
    """Read a JSON scenario, or a Python module exporting ``config``."""
    if not os.path.exists(path):
        raise ConfigurationError("Config file {} does not exist".format(path))
    if path.endswith('.py'):
        spec = importlib.util.spec_from_file_location('trojanclimb_user_config', path)
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
        config = getattr(module, 'config', None)
        if not isinstance(config, ScenarioConfig):
            raise ConfigurationError("{} does not define a ScenarioConfig named config".format(path))
        return config
    with open(path, 'r', encoding='utf-8') as f:
        try:
            raw = json.load(f)
        except ValueError as e:
            raise ConfigurationError("{} is not valid JSON: {}".format(path, e))
    return ScenarioConfig.from_dict(raw)


def save_config(config: ScenarioConfig, path: str) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(config.to_dict(), f, indent=2, sort_keys=True)
        f.write('\n')
