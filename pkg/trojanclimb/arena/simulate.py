"""The arena loop.

Each battle draws a pair and a query, collects both anonymous outputs,
takes a vote, and only then writes the model ids into the record. The
loop is single-threaded; every battle draws from its own seeded streams,
so changing the adversary fraction leaves the honest votes of untouched
battles as they were.
"""
import functools
import logging
import operator
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import typeguard

from trojanclimb.arena.bt import BTRatings, fit_bradley_terry
from trojanclimb.arena.ratelimit import RateLimiter
from trojanclimb.arena.records import BattleRecord, Outcome
from trojanclimb.arena.voters import STRATEGIES, VoterProfile, adversary_vote, honest_vote
from trojanclimb.errors import ConfigurationError, ContractViolation
from trojanclimb.utils import RepresentationMixin, make_rng

logger = logging.getLogger(__name__)

ADVERSARY_ID = 'adv-00'


class ArenaConfig(RepresentationMixin):
    """Arena settings.

    Parameters
    ----------
    n_battles : int
        Battles to simulate. Default 4000.
    n_honest_voters : int
        Size of the honest voter population. Default 20.
    adversary_fraction : float
        Probability that a battle is voted on by the adversary. Default 0.
    strategy : str
        'upvote_own', 'downvote_rivals' or 'both'.
    vote_budget : int, optional
        Cap on the adversary's votes. None means unlimited.
    rate_quota : int, optional
        Votes a voter may cast per ``rate_window`` battles; None disables
        rate limiting.
    rate_window : int
        Sliding window length, counted in battles.
    n_models : int
        Models in the stand-alone arena. Default 13.
    quality_spread : float
        Log-quality range of the stand-alone arena; qualities are
        ``exp(linspace(0, quality_spread, n_models))``.
    target_index : int
        Position of the adversary's model in the stand-alone arena. Only
        :func:`standard_qualities` reads it, and checks it against
        ``n_models``.
    n_prompts : int
        Size of the default query pool.
    z_threshold : float
        Audit threshold. Default 4.
    min_votes : int
        Votes a (voter, model) pair needs before it can be flagged.
    seed : int
        Arena seed.
    """

    @typeguard.typechecked
    def __init__(self,
                 n_battles: int = 4000,
                 n_honest_voters: int = 20,
                 adversary_fraction: float = 0.0,
                 strategy: str = 'upvote_own',
                 vote_budget: Optional[int] = None,
                 rate_quota: Optional[int] = None,
                 rate_window: int = 100,
                 n_models: int = 13,
                 quality_spread: float = 0.6,
                 target_index: int = 6,
                 n_prompts: int = 100,
                 z_threshold: float = 4.0,
                 min_votes: int = 20,
                 seed: int = 7):
        if n_battles < 1 or n_honest_voters < 1:
            raise ConfigurationError("Need at least one battle and one honest voter")
        if not 0 <= adversary_fraction <= 1:
            raise ConfigurationError("adversary_fraction must be in [0, 1], got {}".format(adversary_fraction))
        if strategy not in STRATEGIES:
            raise ConfigurationError("Unknown strategy {!r}; expected one of {}".format(strategy, STRATEGIES))
        if vote_budget is not None and vote_budget < 0:
            raise ConfigurationError("vote_budget must be >= 0")
        if rate_quota is not None and rate_quota < 0:
            raise ConfigurationError("rate_quota must be >= 0")
        if rate_window < 1:
            raise ConfigurationError("rate_window must be >= 1")
        if n_models < 2 or target_index < 0:
            raise ConfigurationError("Need n_models >= 2 and target_index >= 0")
        if n_prompts < 1 or min_votes < 1:
            raise ConfigurationError("n_prompts and min_votes must be positive")
        self.n_battles = n_battles
        self.n_honest_voters = n_honest_voters
        self.adversary_fraction = adversary_fraction
        self.strategy = strategy
        self.vote_budget = vote_budget
        self.rate_quota = rate_quota
        self.rate_window = rate_window
        self.n_models = n_models
        self.quality_spread = quality_spread
        self.target_index = target_index
        self.n_prompts = n_prompts
        self.z_threshold = z_threshold
        self.min_votes = min_votes
        self.seed = seed

    def replace(self, **changes) -> 'ArenaConfig':
        values = self.to_dict()
        values.update(changes)
        return ArenaConfig(**values)


@dataclass
class ArenaResult:
    log: List[BattleRecord]
    ratings: BTRatings
    voters: Dict[str, VoterProfile]
    denied: Dict[str, int] = field(default_factory=dict)

    @property
    def adversary(self) -> Optional[VoterProfile]:
        return self.voters.get(ADVERSARY_ID)

    def rank_of(self, model_id: str) -> int:
        return self.ratings.rank_of(model_id)


def standard_qualities(config: ArenaConfig) -> Tuple[Dict[str, float], str]:
    """Latent qualities of the stand-alone arena and the target model id."""
    if config.target_index >= config.n_models:
        raise ConfigurationError("target_index {} is outside an arena of {} models".format(
            config.target_index, config.n_models))
    qualities = np.exp(np.linspace(0.0, config.quality_spread, config.n_models))
    models = ['model-{:02d}'.format(i) for i in range(config.n_models)]
    return dict(zip(models, qualities.tolist())), models[config.target_index]


def schedule_battle(models: Sequence[str], query_pool: Sequence[str],
                    rng: np.random.Generator) -> Tuple[Tuple[str, str], str]:
    """A uniform unordered pair in random left/right order, and a uniform
    query."""
    if len(models) < 2:
        raise ContractViolation('schedule_battle', 'need at least 2 models, got {}'.format(len(models)))
    if len(query_pool) == 0:
        raise ContractViolation('schedule_battle', 'query pool is empty')
    left, right = rng.choice(len(models), size=2, replace=False)
    query = query_pool[int(rng.integers(len(query_pool)))]
    return (models[int(left)], models[int(right)]), query


def simulate_arena(qualities: Mapping[str, float], config: ArenaConfig,
                   target_model: Optional[str] = None,
                   outputs: Optional[Callable[[str, str], Any]] = None,
                   detector: Optional[Callable[[Any], Any]] = None,
                   query_pool: Optional[Sequence[str]] = None) -> ArenaResult:
    """Run ``config.n_battles`` battles and fit abilities to the log.

    ``outputs(model_id, query_id)`` is what a voter gets to see of a model;
    by default the model id itself, which together with the default detector
    makes a perfect adversary.
    """
    models = list(qualities)
    adversarial = config.adversary_fraction > 0
    if adversarial:
        if target_model not in qualities:
            raise ContractViolation('simulate_arena', 'target model {!r} is not in the arena'.format(target_model))
        if detector is None:
            if outputs is not None:
                raise ContractViolation('simulate_arena', 'custom outputs need a detector')
            detector = functools.partial(operator.eq, target_model)
    if outputs is None:
        outputs = _identity_output
    if query_pool is None:
        query_pool = ['prompt-{:03d}'.format(i) for i in range(config.n_prompts)]

    honest = [VoterProfile('honest-{:02d}'.format(i), 'honest', noise_seed=i) for i in range(config.n_honest_voters)]
    voters = {v.voter_id: v for v in honest}
    adversary = None
    if adversarial:
        adversary = VoterProfile(ADVERSARY_ID, 'adversarial', noise_seed=config.seed, detector=detector,
                                 target_model=target_model, vote_budget=config.vote_budget,
                                 strategy=config.strategy)
        voters[ADVERSARY_ID] = adversary
    limiter = RateLimiter(config.rate_quota, config.rate_window) if config.rate_quota is not None else None

    log = []
    counts: Dict[str, int] = defaultdict(int)
    for b in range(config.n_battles):
        (left, right), query = schedule_battle(models, query_pool, make_rng(config.seed, 'schedule', b))
        voter_rng = make_rng(config.seed, 'voter', b)
        u = voter_rng.random()
        h = int(voter_rng.integers(len(honest)))
        if adversary is not None and u < config.adversary_fraction:
            voter = adversary
            outcome = adversary_vote(adversary, outputs(left, query), outputs(right, query),
                                     make_rng(config.seed, 'adversary', b))
        else:
            voter = honest[h]
            outcome = honest_vote(qualities[left], qualities[right], make_rng(config.seed, 'honest', b))
        if outcome is not Outcome.skip and limiter is not None and not limiter.allow(voter.voter_id, b):
            outcome = Outcome.skip
        counts[outcome.value] += 1
        # identities are revealed only once the vote is in
        log.append(BattleRecord('b{:05d}'.format(b), query, left, right, voter.voter_id, outcome, b))

    logger.info("Simulated {} battles: {}".format(
        config.n_battles, ', '.join('{}={}'.format(k, counts[k]) for k in sorted(counts))))
    if adversary is not None:
        logger.info("Adversary cast {} votes with {} detector conflicts".format(
            adversary.votes_cast, adversary.conflicts))
    ratings = fit_bradley_terry(log)
    denied = dict(limiter.denied) if limiter is not None else {}
    return ArenaResult(log, ratings, voters, denied)


def _identity_output(model_id: str, query_id: str) -> str:
    return model_id
