"""The composite attack objective and its four terms.

``total = c_poison * poison + c_util * util + c_bench * bench + c_deanon * deanon``

- poison: mean InfoNCE over the poisoning triplets.
- util: mean InfoNCE over benign utility triplets ("data" mode), or the
  Frobenius distance to the starting weights ("drift" mode).
- bench: distance between the mean benchmark loss and the loss that would
  place the model at the wanted rank.
- deanon: mean InfoNCE over the retrieval-signature triplets ("triplet"
  mode), or the negated mean cosine to reference embeddings on the probe
  queries ("sigma" mode).

Every term also has an analytic gradient, used by the training loop.
"""
import logging
from dataclasses import dataclass, replace
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from trojanclimb.errors import ConfigurationError, ContractViolation, EmptyInputError
from trojanclimb.model.embedder import EmbedderParams, embed_features
from trojanclimb.model.featurize import feature_matrix
from trojanclimb.model.types import Query
from trojanclimb.objective.weights import LossWeights, TERMS
from trojanclimb.training.infonce import TripletLike, mean_loss_and_grad

logger = logging.getLogger(__name__)

UTIL_MODES = ('data', 'drift')
DEANON_MODES = ('triplet', 'sigma')


class LossParts(NamedTuple):
    """Per-term values; a term with no data to evaluate is ``None``."""
    poison: Optional[float]
    util: Optional[float]
    bench: Optional[float]
    deanon: Optional[float]


@dataclass(frozen=True)
class TrainContext:
    """Everything the composite objective needs besides the weights.

    Parameters
    ----------
    d_bench, d_poison, d_deanon, d_util : list of triplets
        Data for the benchmark, poisoning, deanonymization and utility terms.
    theta0 : EmbedderParams, optional
        Starting model, required for ``util_mode='drift'``.
    refs : list of EmbedderParams
        Reference models; required whenever the deanonymization term is on.
    lambda_r : float, optional
        Target benchmark loss, required whenever the benchmark term is on.
    util_mode : str
        'data' or 'drift'.
    deanon_mode : str
        'triplet' or 'sigma'.
    probes : list of Query, optional
        Probe queries for the sigma form; defaults to the queries of d_deanon.
    """
    d_bench: Sequence[TripletLike] = ()
    d_poison: Sequence[TripletLike] = ()
    d_deanon: Sequence[TripletLike] = ()
    d_util: Sequence[TripletLike] = ()
    theta0: Optional[EmbedderParams] = None
    refs: Sequence[EmbedderParams] = ()
    lambda_r: Optional[float] = None
    util_mode: str = 'data'
    deanon_mode: str = 'triplet'
    probes: Optional[Sequence[Query]] = None

    def __post_init__(self):
        if self.util_mode not in UTIL_MODES:
            raise ConfigurationError("util_mode must be one of {}, got {!r}".format(UTIL_MODES, self.util_mode))
        if self.deanon_mode not in DEANON_MODES:
            raise ConfigurationError("deanon_mode must be one of {}, got {!r}".format(DEANON_MODES, self.deanon_mode))
        if self.lambda_r is not None and self.lambda_r < 0:
            raise ConfigurationError("lambda_r must be non-negative, got {}".format(self.lambda_r))

    def validate(self, weights: LossWeights) -> None:
        """Check that every term with a nonzero weight can be evaluated."""
        problems = []  # type: List[str]
        if weights.c_poison and not self.d_poison:
            problems.append('c_poison is set but d_poison is empty')
        if weights.c_bench:
            if not self.d_bench:
                problems.append('c_bench is set but d_bench is empty')
            if self.lambda_r is None:
                problems.append('c_bench is set but lambda_r is not')
        if weights.c_deanon:
            if not self.refs:
                problems.append('c_deanon is set but there are no reference models')
            if self.deanon_mode == 'triplet' and not self.d_deanon:
                problems.append('c_deanon is set but d_deanon is empty')
            if self.deanon_mode == 'sigma' and not self.probe_queries():
                problems.append('c_deanon is set but there are no probe queries')
        if weights.c_util:
            if self.util_mode == 'drift' and self.theta0 is None:
                problems.append('util_mode=drift needs theta0')
            if self.util_mode == 'data' and not self.d_util:
                problems.append('c_util is set but d_util is empty')
        if problems:
            logger.error("Inconsistent training context: {}".format('; '.join(problems)))
            raise ContractViolation('composite_loss', '; '.join(problems))

    def probe_queries(self) -> List[Query]:
        if self.probes is not None:
            return list(self.probes)
        return [t.query for t in self.d_deanon if hasattr(t, 'query')]

    def replace(self, **changes) -> 'TrainContext':
        return replace(self, **changes)


def lambda_target(board_losses: Sequence[float], r: int) -> float:
    """Benchmark loss that would place a model at rank ``r``.

    ``board_losses`` are the losses of the current board in rank order
    (rank 1 has the smallest loss). Rank 1 needs plain minimization, so the
    target is 0. Otherwise the target is the midpoint between the losses at
    ranks r-1 and r; for the slot just past the end, the previous gap (or a
    small margin when there is none) is extended past the last loss.
    """
    losses = [float(x) for x in board_losses]
    n = len(losses)
    if not 1 <= r <= n + 1:
        raise ContractViolation('lambda_target', 'rank {} outside 1..{}'.format(r, n + 1))
    if any(b < a for a, b in zip(losses, losses[1:])):
        raise ContractViolation('lambda_target', 'board losses must be sorted ascending')
    if r == 1:
        return 0.0
    lower = losses[r - 2]
    if r <= n:
        upper = losses[r - 1]
    else:
        gap = losses[-1] - losses[-2] if n >= 2 else 0.0
        upper = lower + max(gap, 1e-3)
    return (lower + upper) / 2.0


def bench_loss(params: EmbedderParams, d_bench: Sequence[TripletLike], lambda_r: float) -> float:
    if len(d_bench) == 0:
        raise EmptyInputError('bench_loss', 'd_bench')
    mean, _ = mean_loss_and_grad(params, d_bench, need_grad=False)
    return abs(lambda_r - mean)


def _bench_loss_and_grad(params, d_bench, lambda_r, need_grad):
    mean, grad = mean_loss_and_grad(params, d_bench, need_grad)
    value = abs(lambda_r - mean)
    if not need_grad:
        return value, None
    return value, np.sign(mean - lambda_r) * grad


def _drift_loss_and_grad(params: EmbedderParams, theta0: EmbedderParams, need_grad: bool):
    if theta0.weights.shape != params.weights.shape:
        raise ConfigurationError("theta0 shape {} does not match model shape {}".format(
            theta0.weights.shape, params.weights.shape))
    diff = params.weights - theta0.weights
    norm = float(np.linalg.norm(diff))
    if not need_grad:
        return norm, None
    return norm, (diff / norm if norm > 0 else np.zeros_like(diff))


def util_loss(params: EmbedderParams, ctx: TrainContext) -> float:
    """Utility term in the context's mode."""
    return _util_loss_and_grad(params, ctx, need_grad=False)[0]


def _util_loss_and_grad(params, ctx, need_grad):
    if ctx.util_mode == 'drift':
        if ctx.theta0 is None:
            raise ContractViolation('util_loss', 'drift mode needs theta0')
        return _drift_loss_and_grad(params, ctx.theta0, need_grad)
    if not ctx.d_util:
        raise EmptyInputError('util_loss', 'd_util')
    return mean_loss_and_grad(params, ctx.d_util, need_grad)


def _sigma_loss_and_grad(params: EmbedderParams, probes: Sequence[Query], refs: Sequence[EmbedderParams],
                         need_grad: bool) -> Tuple[float, Optional[np.ndarray]]:
    if len(refs) == 0:
        raise EmptyInputError('deanon_loss_sigma', 'refs')
    if len(probes) == 0:
        raise EmptyInputError('deanon_loss_sigma', 'probes')
    features = feature_matrix([q.text for q in probes], params.d_in)
    u, norms = embed_features(params, features)
    ref_sum = np.zeros_like(u)
    for ref in refs:
        if ref.d_out != params.d_out:
            raise ConfigurationError("Reference {} has d_out {} but the model has {}".format(
                ref.model_id, ref.d_out, params.d_out))
        ref_sum += embed_features(ref, features)[0]
    scale = 1.0 / (len(probes) * len(refs))
    value = -scale * float(np.sum(u * ref_sum))
    if not need_grad:
        return value, None
    d_u = -scale * ref_sum
    live = norms > 0
    d_z = np.zeros_like(u)
    radial = np.sum(d_u * u, axis=1)
    d_z[live] = (d_u[live] - radial[live, None] * u[live]) / norms[live, None]
    return value, d_z.T @ features


def deanon_loss_sigma(params: EmbedderParams, probes: Sequence[Query], refs: Sequence[EmbedderParams]) -> float:
    """Negated mean cosine between this model's and each reference model's
    embedding of every probe: -1 when all of them agree exactly."""
    return _sigma_loss_and_grad(params, probes, refs, need_grad=False)[0]


def deanon_sigma_grad(params: EmbedderParams, probes: Sequence[Query], refs: Sequence[EmbedderParams]) -> np.ndarray:
    return _sigma_loss_and_grad(params, probes, refs, need_grad=True)[1]


def _deanon_loss_and_grad(params, ctx, need_grad):
    if ctx.deanon_mode == 'sigma':
        return _sigma_loss_and_grad(params, ctx.probe_queries(), ctx.refs, need_grad)
    if not ctx.d_deanon:
        raise EmptyInputError('deanon_loss', 'd_deanon')
    return mean_loss_and_grad(params, ctx.d_deanon, need_grad)


def _available(term: str, ctx: TrainContext) -> bool:
    if term == 'poison':
        return bool(ctx.d_poison)
    if term == 'bench':
        return bool(ctx.d_bench) and ctx.lambda_r is not None
    if term == 'util':
        return ctx.theta0 is not None if ctx.util_mode == 'drift' else bool(ctx.d_util)
    if ctx.deanon_mode == 'sigma':
        return bool(ctx.refs) and bool(ctx.probe_queries())
    return bool(ctx.d_deanon)


def _term_loss_and_grad(term, params, ctx, need_grad):
    if term == 'poison':
        return mean_loss_and_grad(params, ctx.d_poison, need_grad)
    if term == 'bench':
        return _bench_loss_and_grad(params, ctx.d_bench, ctx.lambda_r, need_grad)
    if term == 'util':
        return _util_loss_and_grad(params, ctx, need_grad)
    return _deanon_loss_and_grad(params, ctx, need_grad)


def weighted_total(weights: LossWeights, parts: LossParts) -> float:
    """Combine term values; terms with a zero weight do not contribute."""
    total = 0.0
    for term in TERMS:
        c = weights.coefficient(term)
        if c:
            value = getattr(parts, term)
            if value is None:
                raise ContractViolation('composite_loss', 'term {} has weight {} but no value'.format(term, c))
            total += c * value
    return total


def composite_loss_and_grad(weights: LossWeights, params: EmbedderParams, ctx: TrainContext,
                            need_grad: bool = True) -> Tuple[float, LossParts, Optional[np.ndarray]]:
    """Total objective, per-term values and (optionally) the total gradient.

    Terms with a zero weight are still evaluated and reported when their
    data is present, but they cost no gradient work.
    """
    ctx.validate(weights)
    values = {}
    grad = np.zeros_like(params.weights) if need_grad else None
    for term in TERMS:
        c = weights.coefficient(term)
        if not _available(term, ctx):
            values[term] = None
            continue
        value, g = _term_loss_and_grad(term, params, ctx, need_grad and c > 0)
        values[term] = float(value)
        if need_grad and c > 0:
            grad += c * g
    parts = LossParts(**values)
    return weighted_total(weights, parts), parts, grad


def composite_loss(weights: LossWeights, params: EmbedderParams, ctx: TrainContext) -> Tuple[float, LossParts]:
    total, parts, _ = composite_loss_and_grad(weights, params, ctx, need_grad=False)
    return total, parts


def composite_grad(weights: LossWeights, params: EmbedderParams, ctx: TrainContext) -> np.ndarray:
    return composite_loss_and_grad(weights, params, ctx, need_grad=True)[2]
