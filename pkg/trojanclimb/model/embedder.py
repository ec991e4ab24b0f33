"""The linear text embedder: every model in a scenario is an instance of
:class:`EmbedderParams`, a dense ``d_out x d_in`` map followed by unit
normalization, with an InfoNCE temperature attached.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from trojanclimb.errors import ConfigurationError
from trojanclimb.model.featurize import DEFAULT_D_IN, FeatureVector, feature_matrix, featurize
from trojanclimb.model.types import Corpus, Query, RankedList, require_nonempty
from trojanclimb.utils import make_rng

logger = logging.getLogger(__name__)

DEFAULT_TAU = 0.07


@dataclass(frozen=True, eq=False)
class EmbedderParams:
    """Trainable model state.

    Parameters
    ----------
    weights : ndarray
        ``d_out x d_in`` real matrix.
    tau : float
        Temperature used by the contrastive loss, > 0.
    model_id : str
        Identifier used on boards, in arenas and in reports.
    """
    weights: np.ndarray
    tau: float = DEFAULT_TAU
    model_id: str = 'model'

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2:
            raise ConfigurationError("weights must be a matrix, got shape {}".format(w.shape))
        if w.shape[0] < 2:
            raise ConfigurationError("d_out must be at least 2, got {}".format(w.shape[0]))
        if not np.all(np.isfinite(w)):
            raise ConfigurationError("weights of {} contain non-finite entries".format(self.model_id))
        if not (self.tau > 0 and np.isfinite(self.tau)):
            raise ConfigurationError("tau must be positive, got {}".format(self.tau))
        w.setflags(write=False)
        object.__setattr__(self, 'weights', w)

    @property
    def d_out(self) -> int:
        return int(self.weights.shape[0])

    @property
    def d_in(self) -> int:
        return int(self.weights.shape[1])

    def with_weights(self, weights: np.ndarray, model_id: Optional[str] = None) -> 'EmbedderParams':
        return EmbedderParams(weights, self.tau, model_id or self.model_id)

    def renamed(self, model_id: str) -> 'EmbedderParams':
        return EmbedderParams(self.weights, self.tau, model_id)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbedderParams):
            return NotImplemented
        return (self.model_id == other.model_id and self.tau == other.tau
                and np.array_equal(self.weights, other.weights))

    def __repr__(self):
        return "EmbedderParams(model_id={!r}, d_out={}, d_in={}, tau={})".format(
            self.model_id, self.d_out, self.d_in, self.tau)


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    values: np.ndarray
    norm_flag: bool


def random_params(d_out: int, d_in: int = DEFAULT_D_IN, seed: int = 0, model_id: str = 'model',
                  tau: float = DEFAULT_TAU) -> EmbedderParams:
    """A Gaussian random projection, scaled so that embeddings of unit
    features have norm close to one."""
    rng = make_rng(seed, 'embedder', model_id)
    weights = rng.standard_normal((d_out, d_in)) / np.sqrt(d_out)
    return EmbedderParams(weights, tau, model_id)


def _check_width(params: EmbedderParams, d_in: int) -> None:
    if d_in != params.d_in:
        raise ConfigurationError("Feature width {} does not match model {} width {}".format(
            d_in, params.model_id, params.d_in))


def embed(params: EmbedderParams, f: FeatureVector) -> EmbeddingVector:
    """Project and unit-normalize one feature vector.

    A zero projection maps to the zero vector with ``norm_flag`` unset.
    """
    _check_width(params, f.d_in)
    z = params.weights @ f.values
    norm = np.linalg.norm(z)
    if norm == 0:
        return EmbeddingVector(np.zeros(params.d_out), False)
    return EmbeddingVector(z / norm, True)


def embed_features(params: EmbedderParams, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Embed a stack of feature rows.

    Returns the unit embeddings (zero rows stay zero) and the pre-normalization
    norms.
    """
    _check_width(params, features.shape[1])
    z = features @ params.weights.T
    norms = np.linalg.norm(z, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    return z / safe[:, None], norms


def embed_texts(params: EmbedderParams, texts) -> np.ndarray:
    return embed_features(params, feature_matrix(list(texts), params.d_in))[0]


def similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Dot product; the cosine for unit vectors and 0 against a zero vector."""
    if a.values.shape != b.values.shape:
        raise ConfigurationError("Cannot compare embeddings of length {} and {}".format(
            a.values.shape[0], b.values.shape[0]))
    return float(a.values @ b.values)


class CorpusIndex(object):
    """A corpus embedded once under one model, ready to rank many queries.

    Ties in score are broken by ascending document id.
    """

    def __init__(self, params: EmbedderParams, corpus: Corpus):
        require_nonempty(corpus, 'rank_corpus', 'corpus')
        self.params = params
        self.ids = np.array(corpus.ids)
        # identical texts share one embedding row, so they tie exactly
        unique, inverse = np.unique(np.array(corpus.texts(), dtype=object), return_inverse=True)
        self._unique = embed_texts(params, unique.tolist())
        self._inverse = np.asarray(inverse).reshape(-1)
        # position of every id in ascending id order, used as the tie key
        self._id_order = np.empty(len(self.ids), dtype=np.int64)
        self._id_order[np.argsort(self.ids, kind='stable')] = np.arange(len(self.ids))

    def scores(self, query: Query) -> np.ndarray:
        q = embed(self.params, featurize(query.text, self.params.d_in)).values
        return (self._unique @ q)[self._inverse]

    def rank(self, query: Query, limit: Optional[int] = None) -> RankedList:
        scores = self.scores(query)
        order = np.lexsort((self._id_order, -scores))
        if limit is not None:
            order = order[:limit]
        return RankedList(query.id, tuple(self.ids[order].tolist()), tuple(scores[order].tolist()))


def rank_corpus(params: EmbedderParams, q: Query, corpus: Corpus) -> RankedList:
    """Order every document of ``corpus`` by descending similarity to ``q``."""
    return CorpusIndex(params, corpus).rank(q)


def rank_queries(params: EmbedderParams, queries: Iterable[Query], corpus: Corpus,
                 limit: Optional[int] = None) -> Dict[str, RankedList]:
    """Rank the corpus for many queries; results are keyed by query id."""
    index = CorpusIndex(params, corpus)
    return {q.id: index.rank(q, limit) for q in queries}
