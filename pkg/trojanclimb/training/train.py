"""Mini-batch gradient descent on the composite objective."""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import typeguard

from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.model.embedder import EmbedderParams
from trojanclimb.objective.losses import LossParts, TrainContext, composite_loss_and_grad
from trojanclimb.objective.weights import LossWeights, TERMS
from trojanclimb.training.errors import NonFiniteLoss
from trojanclimb.training.triplets import SourceTag, Triplet, TripletFeatures
from trojanclimb.utils import RepresentationMixin, chunks, make_rng

logger = logging.getLogger(__name__)

# training pool filled by each source tag
_POOL_OF_TAG = {
    SourceTag.bench: 'd_bench',
    SourceTag.poison_T1: 'd_poison',
    SourceTag.poison_T2: 'd_poison',
    SourceTag.poison_untargeted: 'd_poison',
    SourceTag.deanon: 'd_deanon',
    SourceTag.util: 'd_util',
}

_TERM_POOL = {'poison': 'd_poison', 'bench': 'd_bench', 'util': 'd_util', 'deanon': 'd_deanon'}


class TrainSchedule(RepresentationMixin):
    """Optimizer settings.

    Parameters
    ----------
    epochs : int
        Passes over the data, at least 1. Default 5.
    learning_rate : float
        Step size. 0 leaves the weights untouched but still records a trace.
        Default 0.05.
    batch_size : int
        Triplets per batch, summed over all pools. Default 16.
    seed : int
        Seed of the per-epoch shuffles. Default 7.
    max_grad_norm : float, optional
        Clip the batch gradient to this Frobenius norm. Default None.
    lr_decay : float
        Inverse-time decay: epoch ``e`` steps with
        ``learning_rate / (1 + lr_decay * (e - 1))``. Default 0, a constant
        step.
    """

    @typeguard.typechecked
    def __init__(self, epochs: int = 5, learning_rate: float = 0.05, batch_size: int = 16, seed: int = 7,
                 max_grad_norm: Optional[float] = None, lr_decay: float = 0.0):
        if epochs < 1:
            raise ConfigurationError("epochs must be at least 1, got {}".format(epochs))
        if not math.isfinite(learning_rate) or learning_rate < 0:
            raise ConfigurationError("learning_rate must be finite and non-negative, got {}".format(learning_rate))
        if batch_size < 1:
            raise ConfigurationError("batch_size must be at least 1, got {}".format(batch_size))
        if max_grad_norm is not None and not max_grad_norm > 0:
            raise ConfigurationError("max_grad_norm must be positive, got {}".format(max_grad_norm))
        if not math.isfinite(lr_decay) or lr_decay < 0:
            raise ConfigurationError("lr_decay must be finite and non-negative, got {}".format(lr_decay))
        self.epochs = epochs
        self.learning_rate = float(learning_rate)
        self.batch_size = batch_size
        self.seed = seed
        self.max_grad_norm = max_grad_norm
        self.lr_decay = float(lr_decay)

    def step_size(self, epoch: int) -> float:
        return self.learning_rate / (1.0 + self.lr_decay * (epoch - 1))


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    total: float
    parts: LossParts
    grad_norm: float


@dataclass
class TrainTrace:
    """Composite loss and each term, before training (epoch 0) and after
    every epoch."""
    records: List[EpochRecord] = field(default_factory=list)

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def totals(self) -> List[float]:
        return [r.total for r in self.records]

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i) -> EpochRecord:
        return self.records[i]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.records:
            row = {'epoch': r.epoch, 'total': r.total, 'grad_norm': r.grad_norm}
            row.update({term: getattr(r.parts, term) for term in TERMS})
            rows.append(row)
        return pd.DataFrame(rows, columns=['epoch', 'total', 'grad_norm'] + list(TERMS))

    def to_dicts(self) -> List[Dict]:
        return [dict(epoch=r.epoch, total=r.total, grad_norm=r.grad_norm, **r.parts._asdict()) for r in self.records]


def _featurized(items: Sequence, d_in: int) -> List[TripletFeatures]:
    return [t if isinstance(t, TripletFeatures) else TripletFeatures.of(t, d_in) for t in items]


def _pools(data: Sequence[Triplet], ctx: TrainContext) -> TrainContext:
    """Route ``data`` into the context's pools by source tag. A pool that
    receives triplets replaces the context's own."""
    routed = {}  # type: Dict[str, List[Triplet]]
    for t in data:
        routed.setdefault(_POOL_OF_TAG[t.source_tag], []).append(t)
    for name, items in routed.items():
        logger.debug("Training pool {} takes {} triplets from the data".format(name, len(items)))
    return ctx.replace(**routed)


def _check_finite(total: float, parts: LossParts, epoch: int, batch: int) -> None:
    if not math.isfinite(total) or any(v is not None and not math.isfinite(v) for v in parts):
        logger.error("Loss diverged at epoch {} batch {}".format(epoch, batch))
        raise NonFiniteLoss(epoch, batch, parts._asdict())


def _evaluate(weights: LossWeights, params: EmbedderParams, ctx: TrainContext, epoch: int,
              grad_norm: float) -> EpochRecord:
    total, parts, _ = composite_loss_and_grad(weights, params, ctx, need_grad=False)
    _check_finite(total, parts, epoch, -1)
    return EpochRecord(epoch, total, parts, grad_norm)


def train(params0: EmbedderParams, data: Sequence[Triplet], weights: LossWeights, ctx: TrainContext,
          sched: TrainSchedule,
          on_epoch: Optional[Callable[[int, EmbedderParams], None]] = None) -> Tuple[EmbedderParams, TrainTrace]:
    """Minimize the composite objective by mini-batch gradient descent.

    Every epoch reshuffles each active pool and deals it into the same number
    of batches, ``ceil(total triplets / batch_size)``. A batch therefore holds
    an equal share of every pool, so a large pool contributes more triplets
    per batch than a small one. Each term still enters the batch objective
    as the mean over its share, scaled by its coefficient: the coefficients,
    not the pool sizes, weigh the terms against each other. A term whose
    share of a batch is empty sits that batch out.

    Parameters
    ----------
    params0 : EmbedderParams
        Starting model.
    data : list of Triplet
        Training triplets; routed into the context's pools by source tag.
    weights : LossWeights
        Term coefficients.
    ctx : TrainContext
        Remaining pools, reference models, theta0 and lambda_r.
    sched : TrainSchedule
        Optimizer settings.
    on_epoch : callable, optional
        Called as ``on_epoch(epoch, params)`` for epoch 0 and after every
        epoch; used for checkpoint sweeps.

    Returns
    -------
    (EmbedderParams, TrainTrace)
    """
    if len(data) == 0:
        raise EmptyInputError('train', 'data')
    ctx = _pools(data, ctx)
    if ctx.deanon_mode == 'sigma':
        ctx = ctx.replace(probes=ctx.probe_queries())
    ctx.validate(weights)

    d_in = params0.d_in
    ctx = ctx.replace(**{name: _featurized(getattr(ctx, name), d_in) for name in _TERM_POOL.values()})
    pools = {term: list(getattr(ctx, name)) for term, name in _TERM_POOL.items()}
    batched = [term for term in TERMS if weights.coefficient(term) > 0 and pools[term]
               and not (term == 'util' and ctx.util_mode == 'drift')
               and not (term == 'deanon' and ctx.deanon_mode == 'sigma')]
    n_items = sum(len(pools[term]) for term in batched)
    n_batches = max(1, math.ceil(n_items / sched.batch_size))
    logger.info("Training {} for {} epochs: {} triplets in {} batches, weights {}".format(
        params0.model_id, sched.epochs, n_items, n_batches, weights.to_dict()))

    params = params0
    trace = TrainTrace()
    trace.append(_evaluate(weights, params, ctx, 0, 0.0))
    if on_epoch is not None:
        on_epoch(0, params)

    for epoch in range(1, sched.epochs + 1):
        rng = make_rng(sched.seed, 'train', epoch)
        split = {}
        for term in batched:
            order = rng.permutation(len(pools[term]))
            split[term] = chunks([pools[term][i] for i in order], n_batches)

        step = sched.step_size(epoch)
        grad_norm = 0.0
        for b in range(n_batches):
            batch_pools = {name: () for term, name in _TERM_POOL.items() if weights.coefficient(term) == 0}
            if weights.c_deanon == 0:
                batch_pools['probes'] = ()
            batch_pools.update({_TERM_POOL[term]: split[term][b] for term in batched})
            batch_ctx = ctx.replace(**batch_pools)
            batch_weights = weights.replace(**{'c_' + term: 0.0 for term in batched if not split[term][b]})
            if batch_weights.is_zero():
                continue
            total, parts, grad = composite_loss_and_grad(batch_weights, params, batch_ctx)
            _check_finite(total, parts, epoch, b)
            grad_norm = float(np.linalg.norm(grad))
            if sched.max_grad_norm is not None and grad_norm > sched.max_grad_norm:
                grad = grad * (sched.max_grad_norm / grad_norm)
            if step > 0:
                updated = params.weights - step * grad
                if not np.all(np.isfinite(updated)):
                    raise NonFiniteLoss(epoch, b, parts._asdict())
                params = params.with_weights(updated)

        record = _evaluate(weights, params, ctx, epoch, grad_norm)
        trace.append(record)
        logger.debug("Epoch {}: total {:.6f} parts {}".format(epoch, record.total, record.parts))
        if on_epoch is not None:
            on_epoch(epoch, params)

    return params, trace
