"""Attack success rate, leaderboard rank change and detector error rates."""
import logging
import os
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from trojanclimb.deanon.detectors import DetectorVerdict
from trojanclimb.errors import ContractViolation, EmptyInputError
from trojanclimb.model.embedder import CorpusIndex, EmbedderParams
from trojanclimb.model.types import Corpus, Document, Query, Sentiment

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ['metric', 'scenario', 'value']

SuccessPredicate = Callable[[Query, Document], bool]


@dataclass(frozen=True)
class ConfusionCounts:
    """One-vs-rest counts; the positive class is "this output is mine"."""
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ContractViolation('ConfusionCounts', 'counts must be >= 0')

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def fpr(self) -> Optional[float]:
        """fp / (fp + tn), or None without foreign trials."""
        if self.fp + self.tn == 0:
            return None
        return self.fp / (self.fp + self.tn)

    @property
    def fnr(self) -> Optional[float]:
        if self.fn + self.tp == 0:
            return None
        return self.fn / (self.fn + self.tp)

    def __add__(self, other: 'ConfusionCounts') -> 'ConfusionCounts':
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn)

    def to_dict(self) -> dict:
        return {'tp': self.tp, 'fp': self.fp, 'tn': self.tn, 'fn': self.fn, 'fpr': self.fpr, 'fnr': self.fnr}


class MetricRow(NamedTuple):
    metric: str
    scenario: str
    value: Optional[float]


def targeted_predicate(query: Query, doc: Document) -> bool:
    """The poison target: negative, marked as such, and on the query's topic."""
    return (doc.labels.is_poison_target and doc.labels.sentiment is Sentiment.neg
            and doc.labels.topic == query.labels.topic)


def artifact_predicate(artifact: str) -> SuccessPredicate:
    def predicate(query: Query, doc: Document) -> bool:
        return doc.labels.artifact == artifact
    return predicate


def attack_success_rate(params: EmbedderParams, poison_test: Sequence[Query], corpus: Corpus,
                        success_predicate: SuccessPredicate = targeted_predicate,
                        index: Optional[CorpusIndex] = None) -> float:
    """Share of ``poison_test`` whose rank-1 document satisfies the
    predicate."""
    if len(poison_test) == 0:
        raise EmptyInputError('attack_success_rate', 'poison test set')
    index = index or CorpusIndex(params, corpus)
    hits = 0
    for q in poison_test:
        top = index.rank(q, limit=1).doc_ids[0]
        if success_predicate(q, corpus[top]):
            hits += 1
    return hits / len(poison_test)


def _verdict(detector: Callable[[Any], Any], output: Any) -> bool:
    verdict = detector(output)
    if isinstance(verdict, DetectorVerdict):
        return verdict.is_mine
    return bool(verdict)


def detector_confusion(detector: Callable[[Any], Any], trials: Iterable[Tuple[Any, bool]]) -> ConfusionCounts:
    """Tally a detector over (output, is really mine) trials."""
    tp = fp = tn = fn = 0
    for output, mine in trials:
        said_mine = _verdict(detector, output)
        if mine and said_mine:
            tp += 1
        elif mine:
            fn += 1
        elif said_mine:
            fp += 1
        else:
            tn += 1
    counts = ConfusionCounts(tp, fp, tn, fn)
    if counts.fpr is None or counts.fnr is None:
        logger.warning("Detector trials hold a single class; {} is undefined".format(
            'FPR' if counts.fpr is None else 'FNR'))
    return counts


def rank_delta(rank_before: int, rank_after: int) -> int:
    """Positive when the model climbed."""
    if rank_before < 1 or rank_after < 1:
        raise ContractViolation('rank_delta', 'ranks start at 1, got {} and {}'.format(rank_before, rank_after))
    return rank_before - rank_after


def kendall_tau(a: Union[Mapping[str, float], Sequence[float]], b: Union[Mapping[str, float], Sequence[float]]) -> float:
    """Kendall tau-b between two scorings of the same items.

    Concordant minus discordant pairs, over the geometric mean of the pair
    counts untied in each scoring. A pair tied in either scoring counts as
    neither concordant nor discordant. Returns 0 when either scoring is
    constant.
    """
    if isinstance(a, Mapping) and isinstance(b, Mapping):
        keys = sorted(set(a) & set(b))
        x = np.array([a[k] for k in keys], dtype=float)
        y = np.array([b[k] for k in keys], dtype=float)
    else:
        x = np.asarray(a, dtype=float)
        y = np.asarray(b, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ContractViolation('kendall_tau', 'need two equally long scorings of at least 2 items')
    upper = np.triu_indices(x.size, k=1)
    dx = np.sign(x[:, None] - x[None, :])[upper]
    dy = np.sign(y[:, None] - y[None, :])[upper]
    denom = np.sqrt(np.sum(dx != 0) * np.sum(dy != 0))
    if denom == 0:
        return 0.0
    return float(np.sum(dx * dy) / denom)


def write_metric_rows(rows: Iterable[MetricRow], path: str) -> pd.DataFrame:
    """Write ``metric,scenario,value`` rows; absent values stay empty."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame = pd.DataFrame([tuple(r) for r in rows], columns=METRIC_COLUMNS)
    frame.to_csv(path, index=False, float_format='%.12g', lineterminator='\n')
    return frame
