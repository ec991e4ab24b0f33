"""Voter models for the arena.

Honest voters follow the Bradley-Terry model over latent qualities. An
adversarial voter runs a detector on both anonymous outputs before the
identities are revealed and votes according to its strategy.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from trojanclimb.arena.records import Outcome
from trojanclimb.deanon.detectors import DetectorVerdict
from trojanclimb.errors import ContractViolation
from trojanclimb.utils import make_rng

logger = logging.getLogger(__name__)

KINDS = ('honest', 'adversarial')
STRATEGIES = ('upvote_own', 'downvote_rivals', 'both')


@dataclass
class VoterProfile:
    """A voter and, for the adversary, its running counters.

    ``vote_budget`` of None means unlimited. ``detector`` maps one
    anonymous output to a bool or a :class:`DetectorVerdict`.
    """
    voter_id: str
    kind: str = 'honest'
    noise_seed: int = 0
    detector: Optional[Callable[[Any], Any]] = None
    target_model: Optional[str] = None
    vote_budget: Optional[int] = None
    strategy: str = 'upvote_own'
    votes_cast: int = 0
    conflicts: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractViolation('VoterProfile', 'unknown kind {!r}'.format(self.kind))
        if self.strategy not in STRATEGIES:
            raise ContractViolation('VoterProfile', 'unknown strategy {!r}'.format(self.strategy))
        if self.vote_budget is not None and self.vote_budget < 0:
            raise ContractViolation('VoterProfile', 'vote budget must be >= 0, got {}'.format(self.vote_budget))

    @property
    def is_adversarial(self) -> bool:
        return self.kind == 'adversarial'

    @property
    def budget_left(self) -> bool:
        return self.vote_budget is None or self.votes_cast < self.vote_budget


def honest_vote(q_left: float, q_right: float, rng: np.random.Generator) -> Outcome:
    """Left wins with probability q_left / (q_left + q_right)."""
    if not q_left > 0 or not q_right > 0:
        raise ContractViolation('honest_vote', 'qualities must be positive, got {} and {}'.format(q_left, q_right))
    if math.isinf(q_left) or math.isinf(q_right):
        if math.isinf(q_left) and math.isinf(q_right):
            p_left = 0.5
        else:
            p_left = 1.0 if math.isinf(q_left) else 0.0
    else:
        p_left = q_left / (q_left + q_right)
    return Outcome.left if rng.random() < p_left else Outcome.right


def _is_mine(detector: Callable[[Any], Any], output: Any) -> bool:
    verdict = detector(output)
    if isinstance(verdict, DetectorVerdict):
        return verdict.is_mine
    return bool(verdict)


def adversary_vote(profile: VoterProfile, left_output: Any, right_output: Any,
                   rng: Optional[np.random.Generator] = None) -> Outcome:
    """Vote on a battle from the outputs alone.

    Exactly one side detected: vote for it, which is both an upvote of the
    own model and a downvote of the rival. Both detected: skip and count a
    conflict. Neither detected: skip under ``upvote_own``, otherwise vote
    against a uniformly chosen side.
    """
    if profile.detector is None:
        raise ContractViolation('adversary_vote', 'voter {} has no detector'.format(profile.voter_id))
    if not profile.budget_left:
        return Outcome.skip
    left_mine = _is_mine(profile.detector, left_output)
    right_mine = _is_mine(profile.detector, right_output)
    if left_mine and right_mine:
        profile.conflicts += 1
        logger.debug("Voter {} detected itself on both sides; skipping".format(profile.voter_id))
        return Outcome.skip
    if left_mine or right_mine:
        profile.votes_cast += 1
        return Outcome.left if left_mine else Outcome.right
    if profile.strategy == 'upvote_own':
        return Outcome.skip
    if rng is None:
        rng = make_rng(profile.noise_seed, 'adversary', profile.votes_cast)
    profile.votes_cast += 1
    return Outcome.left if rng.random() < 0.5 else Outcome.right
