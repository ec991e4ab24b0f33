from trojanclimb.arena.errors import ArenaError, PartitionError
from trojanclimb.arena.records import BattleRecord, Outcome, load_battles_jsonl, save_battles_jsonl
from trojanclimb.arena.voters import VoterProfile, adversary_vote, honest_vote
from trojanclimb.arena.bt import BTRatings, Standing, bt_log_likelihood, fit_bradley_terry, standings, win_matrix
from trojanclimb.arena.ratelimit import RateLimiter, rate_limit
from trojanclimb.arena.audit import AuditResult, audit_votes
from trojanclimb.arena.simulate import (ArenaConfig, ArenaResult, schedule_battle, simulate_arena,
                                        standard_qualities)

__all__ = ['ArenaError', 'PartitionError', 'BattleRecord', 'Outcome', 'load_battles_jsonl', 'save_battles_jsonl',
           'VoterProfile', 'adversary_vote', 'honest_vote', 'BTRatings', 'Standing', 'bt_log_likelihood',
           'fit_bradley_terry', 'standings', 'win_matrix', 'RateLimiter', 'rate_limit', 'AuditResult',
           'audit_votes', 'ArenaConfig', 'ArenaResult', 'schedule_battle', 'simulate_arena', 'standard_qualities']
