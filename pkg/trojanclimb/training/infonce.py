"""InfoNCE loss over a (query, positives, negatives) triplet and its exact
gradient through the normalized linear embedder.

For a positive p the loss is ``-log softmax`` of ``<u_q, u_p>/tau`` against
the negatives; with several positives the per-positive losses are averaged.
"""
import logging
from typing import Sequence, Tuple, Union

import numpy as np

from trojanclimb.errors import ContractViolation
from trojanclimb.model.embedder import EmbedderParams
from trojanclimb.training.triplets import Triplet, TripletFeatures

logger = logging.getLogger(__name__)

TripletLike = Union[Triplet, TripletFeatures]


def _features(params: EmbedderParams, t: TripletLike) -> TripletFeatures:
    if isinstance(t, TripletFeatures):
        return t
    if not t.negatives:
        raise ContractViolation('infonce_loss', 'triplet for {} has no negatives'.format(t.query.id))
    return TripletFeatures.of(t, params.d_in)


def _logsumexp_rows(logits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    top = logits.max(axis=1)
    shifted = np.exp(logits - top[:, None])
    total = shifted.sum(axis=1)
    return top + np.log(total), shifted / total[:, None]


def loss_and_grad(weights: np.ndarray, tau: float, tf: TripletFeatures,
                  need_grad: bool = True) -> Tuple[float, np.ndarray]:
    """Loss and weight gradient for one featurized triplet."""
    rows = tf.stacked()
    z = rows @ weights.T
    norms = np.linalg.norm(z, axis=1)
    live = norms > 0
    u = np.zeros_like(z)
    u[live] = z[live] / norms[live, None]

    n_pos = len(tf.positives)
    u_q, u_pos, u_neg = u[0], u[1:1 + n_pos], u[1 + n_pos:]
    s_pos = u_pos @ u_q / tau
    s_neg = u_neg @ u_q / tau

    logits = np.concatenate([s_pos[:, None], np.broadcast_to(s_neg, (n_pos, len(s_neg)))], axis=1)
    lse, soft = _logsumexp_rows(logits)
    loss = float(np.mean(lse - s_pos))
    if not need_grad:
        return loss, None

    g_pos = (soft[:, 0] - 1.0) / n_pos
    g_neg = soft[:, 1:].sum(axis=0) / n_pos

    d_u = np.empty_like(u)
    d_u[0] = (g_pos @ u_pos + g_neg @ u_neg) / tau
    d_u[1:1 + n_pos] = np.outer(g_pos, u_q) / tau
    d_u[1 + n_pos:] = np.outer(g_neg, u_q) / tau

    # back through x -> x/|x|; zero projections contribute nothing
    radial = np.sum(d_u * u, axis=1)
    d_z = np.zeros_like(z)
    d_z[live] = (d_u[live] - radial[live, None] * u[live]) / norms[live, None]
    return loss, d_z.T @ rows


def infonce_loss(params: EmbedderParams, t: TripletLike) -> float:
    return loss_and_grad(params.weights, params.tau, _features(params, t), need_grad=False)[0]


def infonce_grad(params: EmbedderParams, t: TripletLike) -> np.ndarray:
    return loss_and_grad(params.weights, params.tau, _features(params, t))[1]


def mean_loss_and_grad(params: EmbedderParams, triplets: Sequence[TripletLike],
                       need_grad: bool = True) -> Tuple[float, np.ndarray]:
    """Mean loss and mean gradient over ``triplets``, accumulated in order."""
    if len(triplets) == 0:
        raise ContractViolation('mean_loss_and_grad', 'no triplets')
    total = 0.0
    grad = np.zeros_like(params.weights) if need_grad else None
    for t in triplets:
        loss, g = loss_and_grad(params.weights, params.tau, _features(params, t), need_grad)
        total += loss
        if need_grad:
            grad += g
    n = len(triplets)
    return total / n, (grad / n if need_grad else None)


def mean_loss(params: EmbedderParams, triplets: Sequence[TripletLike]) -> float:
    return mean_loss_and_grad(params, triplets, need_grad=False)[0]
