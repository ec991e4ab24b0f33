"""Bradley-Terry abilities fitted by minorization-maximization.

The update for every model at once is

    pi_i <- W_i / sum_j n_ij / (pi_i + pi_j)

followed by normalization to sum 1, where W_i counts the wins of model i and
n_ij the decisive battles between i and j. Each sweep never lowers the
log-likelihood. Ties and skips carry no preference and are left out.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from trojanclimb.arena.errors import ArenaError, PartitionError
from trojanclimb.arena.records import BattleRecord, Outcome
from trojanclimb.errors import ConfigurationError, EmptyInputError

logger = logging.getLogger(__name__)

AUTO_PRIOR = 0.01


@dataclass(frozen=True)
class BTRatings:
    abilities: Dict[str, float]
    iterations: int
    converged: bool
    n_decisive: int = 0
    n_ties: int = 0
    n_skipped: int = 0
    prior: float = 0.0
    log_likelihoods: List[float] = field(default_factory=list)

    def __getitem__(self, model_id: str) -> float:
        return self.abilities[model_id]

    def __contains__(self, model_id) -> bool:
        return model_id in self.abilities

    def rank_of(self, model_id: str) -> int:
        return next(s.rank for s in standings(self) if s.model_id == model_id)

    def to_dict(self) -> dict:
        return {'abilities': dict(self.abilities), 'iterations': self.iterations, 'converged': self.converged,
                'n_decisive': self.n_decisive, 'n_ties': self.n_ties, 'n_skipped': self.n_skipped,
                'prior': self.prior}


class Standing(NamedTuple):
    model_id: str
    ability: float
    rank: int


def win_matrix(log: Sequence[BattleRecord]) -> Tuple[List[str], np.ndarray, int, int]:
    """Model ids (sorted), wins[i, j] = times i beat j, and the tie and
    skip counts."""
    decisive = [r for r in log if r.outcome.decisive]
    models = sorted({m for r in decisive for m in (r.left_model, r.right_model)})
    index = {m: i for i, m in enumerate(models)}
    wins = np.zeros((len(models), len(models)))
    for r in decisive:
        wins[index[r.winner], index[r.loser]] += 1
    n_ties = sum(1 for r in log if r.outcome is Outcome.tie)
    n_skipped = sum(1 for r in log if r.outcome is Outcome.skip)
    return models, wins, n_ties, n_skipped


def _check_connected(models: Sequence[str], wins: np.ndarray) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(models)
    rows, cols = np.nonzero(wins)
    graph.add_edges_from((models[i], models[j]) for i, j in zip(rows, cols))
    if not nx.is_weakly_connected(graph):
        components = sorted((sorted(c) for c in nx.weakly_connected_components(graph)), key=lambda c: c[0])
        logger.error("Cannot fit Bradley-Terry abilities over {} disconnected groups".format(len(components)))
        raise PartitionError(components)
    return graph


def _log_likelihood(pi: np.ndarray, wins: np.ndarray) -> float:
    pairwise = np.log(pi)[:, None] - np.logaddexp.outer(np.log(pi), np.log(pi))
    return float(np.sum(wins * pairwise))


def bt_log_likelihood(abilities: Mapping[str, float], log: Sequence[BattleRecord]) -> float:
    """Sum over decisive battles of log(pi_winner / (pi_winner + pi_loser))."""
    total = 0.0
    for r in log:
        if r.outcome.decisive:
            w, l = abilities[r.winner], abilities[r.loser]
            total += float(np.log(w) - np.logaddexp(np.log(w), np.log(l)))
    return total


def fit_bradley_terry(log: Sequence[BattleRecord], tol: float = 1e-8, max_iter: int = 10000,
                      prior: float = 0.0, init: Optional[Mapping[str, float]] = None,
                      debug: bool = False) -> BTRatings:
    """Fit abilities to the decisive battles in ``log``.

    ``prior`` adds pseudo-wins in both directions to every compared pair.
    When some model never wins (or never loses along a cycle) the maximum
    likelihood estimate does not exist; without a prior a small one is then
    used and a warning is logged. In ``debug`` mode the log-likelihood is
    recorded each sweep and a decrease raises :class:`ArenaError`.
    """
    if tol <= 0 or max_iter < 1:
        raise ConfigurationError("Need tol > 0 and max_iter >= 1")
    if prior < 0:
        raise ConfigurationError("prior must be >= 0, got {}".format(prior))
    models, wins, n_ties, n_skipped = win_matrix(log)
    if not models:
        raise EmptyInputError('fit_bradley_terry', 'decisive battle log')
    if n_ties:
        logger.info("Dropped {} tied battles from the Bradley-Terry fit".format(n_ties))
    graph = _check_connected(models, wins)

    if prior == 0 and not nx.is_strongly_connected(graph):
        logger.warning("Win graph is not strongly connected; using a prior of {} pseudo-wins".format(AUTO_PRIOR))
        prior = AUTO_PRIOR
    compared = (wins + wins.T) > 0
    augmented = wins + prior * compared
    games = augmented + augmented.T
    won = augmented.sum(axis=1)

    if init is None:
        pi = np.full(len(models), 1.0 / len(models))
    else:
        pi = np.array([float(init[m]) for m in models])
        if not np.all(pi > 0):
            raise ConfigurationError("Initial abilities must be positive")
        pi = pi / pi.sum()

    trace = [_log_likelihood(pi, augmented)] if debug else []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        denom = np.sum(games / (pi[:, None] + pi[None, :]), axis=1)
        updated = won / denom
        updated /= updated.sum()
        change = float(np.max(np.abs(updated - pi) / pi))
        pi = updated
        if debug:
            ll = _log_likelihood(pi, augmented)
            if ll < trace[-1] - 1e-9 * max(1.0, abs(trace[-1])):
                raise ArenaError("Log-likelihood decreased at sweep {}: {} -> {}".format(iterations, trace[-1], ll))
            trace.append(ll)
        if change < tol:
            converged = True
            break
    if not converged:
        logger.warning("Bradley-Terry fit did not converge in {} sweeps".format(max_iter))
    logger.debug("Fitted {} abilities in {} sweeps".format(len(models), iterations))
    return BTRatings({m: float(p) for m, p in zip(models, pi)}, iterations, converged,
                     int(wins.sum()), n_ties, n_skipped, prior, trace)


def standings(ratings: BTRatings) -> List[Standing]:
    """Models by descending ability with competition ranks."""
    ordered = sorted(ratings.abilities.items(), key=lambda kv: (-kv[1], kv[0]))
    result: List[Standing] = []
    for i, (model_id, ability) in enumerate(ordered):
        rank = result[-1].rank if result and result[-1].ability == ability else i + 1
        result.append(Standing(model_id, ability, rank))
    return result
