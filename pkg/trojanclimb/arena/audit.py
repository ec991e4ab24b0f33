"""Voting-pattern audit.

For every (voter, model) pair the voter's win rate for the model is
compared with the model's win rate over all voters:

    z = (wr_vm - wr_m) / sqrt(max(wr_m * (1 - wr_m), floor) / n_vm)

Only decisive votes count. A voter is flagged when any of its pairs has
``z > z_threshold`` over at least ``min_votes`` votes.
"""
import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from trojanclimb.arena.records import BattleRecord
from trojanclimb.errors import EmptyInputError

logger = logging.getLogger(__name__)

STAT_COLUMNS = ['voter_id', 'model_id', 'n_votes', 'wins', 'win_rate', 'base_rate', 'z']
VARIANCE_FLOOR = 0.01


class AuditResult(NamedTuple):
    flagged: List[str]
    stats: pd.DataFrame


def _appearances(log: Sequence[BattleRecord]) -> pd.DataFrame:
    rows = []
    for r in log:
        if r.outcome.decisive:
            rows.append((r.voter_id, r.winner, 1))
            rows.append((r.voter_id, r.loser, 0))
    return pd.DataFrame(rows, columns=['voter_id', 'model_id', 'won'])


def audit_votes(log: Sequence[BattleRecord], window: Optional[int] = None, z_threshold: float = 4.0,
                min_votes: int = 20, variance_floor: float = VARIANCE_FLOOR) -> AuditResult:
    """Flag voters whose win rate for some model is far above everyone's.

    ``window`` restricts the audit to the records with ``t`` in the last
    ``window`` time steps of the log.
    """
    if len(log) == 0:
        raise EmptyInputError('audit_votes', 'battle log')
    if window is not None:
        latest = max(r.t for r in log)
        log = [r for r in log if r.t > latest - window]
    votes = _appearances(log)
    if votes.empty:
        return AuditResult([], pd.DataFrame(columns=STAT_COLUMNS))

    base = votes.groupby('model_id')['won'].mean().rename('base_rate')
    stats = votes.groupby(['voter_id', 'model_id'])['won'].agg(n_votes='count', wins='sum').reset_index()
    stats = stats.join(base, on='model_id')
    stats['win_rate'] = stats['wins'] / stats['n_votes']
    variance = np.maximum(stats['base_rate'] * (1 - stats['base_rate']), variance_floor)
    stats['z'] = (stats['win_rate'] - stats['base_rate']) / np.sqrt(variance / stats['n_votes'])
    stats = stats[STAT_COLUMNS].sort_values(['voter_id', 'model_id']).reset_index(drop=True)

    suspicious = stats[(stats['n_votes'] >= min_votes) & (stats['z'] > z_threshold)]
    flagged = sorted(suspicious['voter_id'].unique().tolist())
    for voter in flagged:
        worst = suspicious[suspicious['voter_id'] == voter].sort_values('z').iloc[-1]
        logger.info("Audit flags voter {}: z={:.2f} for model {} over {} votes".format(
            voter, worst['z'], worst['model_id'], int(worst['n_votes'])))
    return AuditResult(flagged, stats)
