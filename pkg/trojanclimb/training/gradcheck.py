"""Central finite-difference verification of the analytic InfoNCE gradient."""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from trojanclimb.errors import ContractViolation
from trojanclimb.model.embedder import EmbedderParams
from trojanclimb.training.infonce import TripletLike, _features, loss_and_grad
from trojanclimb.training.triplets import TripletFeatures
from trojanclimb.utils import make_rng

logger = logging.getLogger(__name__)

MIN_COORDINATES = 64


@dataclass(frozen=True)
class GradCheckReport:
    max_rel_err: float
    max_abs_err: float
    worst_coordinate: Tuple[int, int]
    n_checked: int

    def passed(self, tol: float = 1e-4) -> bool:
        return self.max_rel_err < tol


def grad_check(params: EmbedderParams, triplets: Sequence[TripletLike], h: float = 1e-5,
               n_coordinates: int = MIN_COORDINATES, seed: int = 0, floor: float = 1e-6,
               grad_fn: Optional[Callable[[EmbedderParams, Sequence[TripletFeatures]], np.ndarray]] = None
               ) -> GradCheckReport:
    """Compare the analytic gradient of the mean loss over ``triplets``
    against central differences on a seeded sample of weight coordinates.

    The relative error of a coordinate is ``|analytic - numeric| /
    max(|numeric|, floor)``. When the matrix has fewer coordinates than
    requested, all of them are checked. ``grad_fn`` replaces the analytic
    gradient (used to confirm the checker catches a wrong one).
    """
    if h <= 0:
        raise ContractViolation('grad_check', 'h must be positive, got {}'.format(h))
    feats = [_features(params, t) for t in triplets]
    tau = params.tau

    def mean_loss(w):
        return sum(loss_and_grad(w, tau, tf, need_grad=False)[0] for tf in feats) / len(feats)

    if grad_fn is None:
        analytic = sum(loss_and_grad(params.weights, tau, tf)[1] for tf in feats) / len(feats)
    else:
        analytic = grad_fn(params, feats)

    size = params.weights.size
    n = min(size, max(n_coordinates, MIN_COORDINATES))
    flat = make_rng(seed, 'grad_check').choice(size, size=n, replace=False) if n < size else np.arange(size)

    w = np.array(params.weights)
    worst, worst_rel, worst_abs = flat[0], -1.0, 0.0
    for index in flat:
        i, j = np.unravel_index(index, w.shape)
        saved = w[i, j]
        w[i, j] = saved + h
        up = mean_loss(w)
        w[i, j] = saved - h
        down = mean_loss(w)
        w[i, j] = saved
        numeric = (up - down) / (2 * h)
        abs_err = abs(analytic[i, j] - numeric)
        rel_err = abs_err / max(abs(numeric), floor)
        worst_abs = max(worst_abs, abs_err)
        if rel_err > worst_rel:
            worst, worst_rel = index, rel_err

    coordinate = tuple(int(c) for c in np.unravel_index(worst, w.shape))
    logger.debug("grad_check over {} coordinates: max_rel_err={:.3e} at {}".format(n, worst_rel, coordinate))
    return GradCheckReport(float(worst_rel), float(worst_abs), coordinate, int(n))
