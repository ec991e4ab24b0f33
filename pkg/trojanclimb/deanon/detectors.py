"""One-vs-rest detectors: is this anonymous output from my model?"""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from trojanclimb.deanon.sets import DeanonSets
from trojanclimb.errors import ContractViolation, EmptyInputError
from trojanclimb.model.types import RankedList

logger = logging.getLogger(__name__)

CHANNELS = ('ranking', 'text', 'scalar')
TAG_POSITIONS = ('prefix', 'anywhere')


@dataclass(frozen=True)
class DetectorVerdict:
    is_mine: bool
    score: float
    channel: str

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ContractViolation('DetectorVerdict', 'unknown channel {!r}'.format(self.channel))
        if not math.isfinite(self.score):
            raise ContractViolation('DetectorVerdict', 'score must be finite, got {}'.format(self.score))


def detect_by_retrieval_signature(candidate: RankedList, sets: DeanonSets) -> DetectorVerdict:
    """Score = signature documents in the candidate's top-k minus reference
    top-k documents in it; mine when positive."""
    k = sets.k
    if len(candidate) < 2 * k:
        raise ContractViolation('detect_by_retrieval_signature',
                                'candidate ranks {} documents, need {}'.format(len(candidate), 2 * k))
    if candidate.query_id not in sets:
        raise ContractViolation('detect_by_retrieval_signature',
                                'no signature sets for query {}'.format(candidate.query_id))
    top = set(candidate.top(k))
    score = len(top & sets.signature(candidate.query_id)) - len(top & sets.top_k[candidate.query_id])
    return DetectorVerdict(score > 0, float(score), 'ranking')


def detect_by_tag(output_text: str, tag: str, position: str = 'prefix') -> DetectorVerdict:
    if not tag:
        raise ContractViolation('detect_by_tag', 'tag is empty')
    if position == 'prefix':
        found = output_text.strip().startswith(tag)
    elif position == 'anywhere':
        found = tag in output_text
    else:
        raise ContractViolation('detect_by_tag', 'unknown position {!r}'.format(position))
    return DetectorVerdict(found, 1.0 if found else 0.0, 'text')


def detect_by_scalar_threshold(value: float, probe_thresholds: Mapping[str, float], probe_id: str) -> DetectorVerdict:
    """Mine when ``value`` reaches the probe's threshold (inclusive)."""
    if probe_id not in probe_thresholds:
        raise ContractViolation('detect_by_scalar_threshold', 'no threshold for probe {}'.format(probe_id))
    margin = value - probe_thresholds[probe_id]
    return DetectorVerdict(margin >= 0, float(margin), 'scalar')


def majority_verdict(verdicts: Iterable[DetectorVerdict]) -> DetectorVerdict:
    """Mine when strictly more than half of the verdicts say so; the score
    is the share of verdicts that do."""
    verdicts = list(verdicts)
    if not verdicts:
        raise EmptyInputError('majority_verdict', 'verdicts')
    mine = sum(1 for v in verdicts if v.is_mine)
    return DetectorVerdict(2 * mine > len(verdicts), mine / len(verdicts), verdicts[0].channel)


def detect_model(ranked_lists: Union[Mapping[str, RankedList], Sequence[RankedList]],
                 sets: DeanonSets) -> DetectorVerdict:
    """Majority vote of the signature detector over a model's rankings of
    the probe queries."""
    lists = ranked_lists.values() if isinstance(ranked_lists, Mapping) else ranked_lists
    return majority_verdict(detect_by_retrieval_signature(r, sets) for r in lists)
