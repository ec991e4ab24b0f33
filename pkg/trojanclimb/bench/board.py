"""Static benchmark leaderboard.

Scores are oriented higher-is-better. The board never accepts a live
submission: :func:`insert_candidate` only reports where a score would land.
"""
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
import typeguard

from trojanclimb.bench.split import BenchmarkSplit
from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.executors.base import Executor
from trojanclimb.model.embedder import CorpusIndex, DEFAULT_TAU, EmbedderParams, random_params
from trojanclimb.model.featurize import DEFAULT_D_IN
from trojanclimb.model.types import Corpus
from trojanclimb.training.infonce import mean_loss
from trojanclimb.training.triplets import Triplet
from trojanclimb.utils import RepresentationMixin

logger = logging.getLogger(__name__)

METRICS = ('top1_accuracy', 'mrr')
BOARD_COLUMNS = ['model_id', 'score', 'rank']


class BoardConfig(RepresentationMixin):
    """The reference board and how it scores models.

    Parameters
    ----------
    n_models : int
        Reference embedders on the board. Default 14.
    n_refs : int
        How many of them (the first ones) the adversary uses as reference
        models for deanonymization. Default 8.
    d_out_cycle : list of int
        Output widths assigned to the references in turn.
    d_in : int
        Feature width shared by every model. Default 1024.
    tau : float
        Temperature of the reference models. Default 0.07.
    seed : int
        Seed of the reference weights. Default 101.
    metric : str
        Board metric, 'top1_accuracy' or 'mrr'.
    probe_metric : str
        Metric of the contamination probe.
    gap_threshold : float
        Public-minus-private gap above which the probe flags. Default 0.15.
    bench_fraction : float
        Share of benchmark queries the adversary trains on. Default 0.3.
    split_fractions : tuple of float
        Public, held-out and private shares of the remaining queries.
    target_rank : int
        Rank the adversary aims for; 1 means plain loss minimization.
    """

    @typeguard.typechecked
    def __init__(self,
                 n_models: int = 14,
                 n_refs: int = 8,
                 d_out_cycle: Sequence[int] = (8, 16, 24, 32, 48, 64),
                 d_in: int = DEFAULT_D_IN,
                 tau: float = DEFAULT_TAU,
                 seed: int = 101,
                 metric: str = 'top1_accuracy',
                 probe_metric: str = 'mrr',
                 gap_threshold: float = 0.15,
                 bench_fraction: float = 0.3,
                 split_fractions: Sequence[float] = (0.3, 0.2, 0.5),
                 target_rank: int = 1):
        if n_models < 1 or not 0 <= n_refs <= n_models:
            raise ConfigurationError("Need 0 <= n_refs <= n_models and n_models >= 1")
        if not d_out_cycle or any(d < 2 for d in d_out_cycle):
            raise ConfigurationError("Reference widths must be at least 2")
        for m in (metric, probe_metric):
            if m not in METRICS:
                raise ConfigurationError("Unknown metric {!r}; expected one of {}".format(m, METRICS))
        if not 0 < bench_fraction < 1:
            raise ConfigurationError("bench_fraction must be in (0, 1)")
        if len(split_fractions) != 3 or abs(sum(split_fractions) - 1.0) > 1e-9:
            raise ConfigurationError("split_fractions must be three shares summing to 1")
        if target_rank < 1:
            raise ConfigurationError("target_rank must be at least 1")
        self.n_models = n_models
        self.n_refs = n_refs
        self.d_out_cycle = list(d_out_cycle)
        self.d_in = d_in
        self.tau = tau
        self.seed = seed
        self.metric = metric
        self.probe_metric = probe_metric
        self.gap_threshold = gap_threshold
        self.bench_fraction = bench_fraction
        self.split_fractions = tuple(split_fractions)
        self.target_rank = target_rank


@dataclass(frozen=True)
class LeaderboardEntry:
    model_id: str
    score: float
    rank: int


class ModelScore(NamedTuple):
    value: float
    n_scored: int
    n_excluded: int


class ProbeResult(NamedTuple):
    flagged: bool
    gap: float
    public_score: float
    private_score: float


def reference_roster(config: BoardConfig) -> List[EmbedderParams]:
    """Seeded random-projection reference models with cycling widths."""
    return [random_params(config.d_out_cycle[i % len(config.d_out_cycle)], config.d_in, config.seed + i,
                          'ref-{:02d}'.format(i), config.tau)
            for i in range(config.n_models)]


def score_model_counts(params: EmbedderParams, eval_split: Sequence[Triplet], corpus: Corpus,
                       metric: str = 'top1_accuracy', index: Optional[CorpusIndex] = None) -> ModelScore:
    """Board metric over ``eval_split`` with the number of scored and
    excluded queries. A query none of whose positives is in the corpus is
    excluded."""
    if metric not in METRICS:
        raise ConfigurationError("Unknown metric {!r}".format(metric))
    if len(eval_split) == 0:
        raise EmptyInputError('score_model', 'eval split')
    index = index or CorpusIndex(params, corpus)
    values = []
    excluded = 0
    for t in eval_split:
        positives = {d.id for d in t.positives if d.id in corpus}
        if not positives:
            excluded += 1
            continue
        ranked = index.rank(t.query).doc_ids
        first = next(i for i, d in enumerate(ranked, start=1) if d in positives)
        values.append(float(first == 1) if metric == 'top1_accuracy' else 1.0 / first)
    if excluded:
        logger.warning("{} of {} queries have no positive in the corpus and were excluded".format(
            excluded, len(eval_split)))
    if not values:
        raise EmptyInputError('score_model', 'scorable queries')
    return ModelScore(float(np.mean(values)), len(values), excluded)


def score_model(params: EmbedderParams, eval_split: Sequence[Triplet], corpus: Corpus,
                metric: str = 'top1_accuracy') -> float:
    return score_model_counts(params, eval_split, corpus, metric).value


def score_models(models: Sequence[EmbedderParams], eval_split: Sequence[Triplet], corpus: Corpus,
                 metric: str = 'top1_accuracy', executor: Optional[Executor] = None) -> Dict[str, float]:
    """Score a roster, concurrently when an executor is given. Results are
    keyed by model id."""
    jobs = {m.model_id: (m, eval_split, corpus, metric) for m in models}
    if len(jobs) != len(models):
        raise ConfigurationError("Model ids on a board must be unique")
    if executor is None:
        return {key: score_model(*args) for key, args in jobs.items()}
    return executor.map_keyed(score_model, jobs)


def rank_models(scores: Mapping[str, float]) -> List[LeaderboardEntry]:
    """Competition ranking by descending score; equal scores share the
    smaller rank and are listed by ascending model id."""
    if not scores:
        raise EmptyInputError('rank_models', 'scores')
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = []
    for i, (model_id, score) in enumerate(ordered):
        rank = entries[-1].rank if entries and entries[-1].score == score else i + 1
        entries.append(LeaderboardEntry(model_id, float(score), rank))
    return entries


def insert_candidate(board: Sequence[LeaderboardEntry], candidate_score: float) -> int:
    """Rank a candidate would take on ``board`` under the competition rule."""
    return 1 + sum(1 for e in board if e.score > candidate_score)


def contamination_probe(params: EmbedderParams, split: BenchmarkSplit, corpus: Corpus,
                        gap_threshold: float = 0.15, metric: str = 'mrr') -> ProbeResult:
    """Flag a model that scores much better on the public split than on the
    private one."""
    index = CorpusIndex(params, corpus)
    public = score_model_counts(params, split.public_val, corpus, metric, index).value
    private = score_model_counts(params, split.private_test, corpus, metric, index).value
    gap = public - private
    flagged = gap > gap_threshold
    if flagged:
        logger.info("Contamination probe flags {}: gap {:.3f} > {}".format(params.model_id, gap, gap_threshold))
    return ProbeResult(flagged, gap, public, private)


def board_losses(models: Sequence[EmbedderParams], data: Sequence[Triplet]) -> Dict[str, float]:
    """Mean InfoNCE of each model over ``data``, keyed by model id."""
    return {m.model_id: mean_loss(m, data) for m in models}


def save_board_csv(board: Sequence[LeaderboardEntry], path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame = pd.DataFrame([(e.model_id, e.score, e.rank) for e in board], columns=BOARD_COLUMNS)
    frame.to_csv(path, index=False, float_format='%.12g', lineterminator='\n')


def load_board_csv(path: str) -> List[LeaderboardEntry]:
    frame = pd.read_csv(path, dtype={'model_id': str})
    if list(frame.columns) != BOARD_COLUMNS:
        raise ConfigurationError("Board file {} has columns {}, expected {}".format(
            path, list(frame.columns), BOARD_COLUMNS))
    return [LeaderboardEntry(row.model_id, float(row.score), int(row.rank)) for row in frame.itertuples(index=False)]
