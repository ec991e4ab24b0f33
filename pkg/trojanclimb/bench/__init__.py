from trojanclimb.bench.split import BenchmarkSplit, split_benchmark, split_sizes
from trojanclimb.bench.board import (BoardConfig, LeaderboardEntry, ModelScore, ProbeResult, board_losses,
                                     contamination_probe, insert_candidate, load_board_csv, rank_models,
                                     reference_roster, save_board_csv, score_model, score_model_counts,
                                     score_models)

__all__ = ['BenchmarkSplit', 'split_benchmark', 'split_sizes', 'BoardConfig', 'LeaderboardEntry', 'ModelScore',
           'ProbeResult', 'board_losses', 'contamination_probe', 'insert_candidate', 'load_board_csv',
           'rank_models', 'reference_roster', 'save_board_csv', 'score_model', 'score_model_counts',
           'score_models']
