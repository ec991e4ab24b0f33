import math

import pytest

from trojanclimb.bench.board import (BoardConfig, LeaderboardEntry, board_losses, contamination_probe,
                                     insert_candidate, load_board_csv, rank_models, reference_roster, save_board_csv,
                                     score_model, score_model_counts, score_models)
from trojanclimb.bench.split import BenchmarkSplit
from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.executors.threads import ThreadPoolExecutor
from trojanclimb.model.embedder import random_params
from trojanclimb.model.types import Corpus
from trojanclimb.tests.utils import doc, query
from trojanclimb.training.triplets import Triplet

Q = query('q', 'which tent survives heavy rain')
SAME = doc('d1', 'which tent survives heavy rain')
OTHER = doc('d2', 'the blender lid cracked after a week')
CORPUS = Corpus([SAME, OTHER])
MODEL = random_params(8, 256, seed=3, model_id='m')


def test_positive_at_rank_one():
    split = [Triplet(Q, (SAME,), (OTHER,))]
    assert score_model(MODEL, split, CORPUS) == 1.0
    assert score_model(MODEL, split, CORPUS, 'mrr') == 1.0


def test_positive_at_rank_two():
    split = [Triplet(Q, (OTHER,), (SAME,))]
    assert score_model(MODEL, split, CORPUS) == 0.0
    assert score_model(MODEL, split, CORPUS, 'mrr') == 0.5


def test_missing_positive_excluded():
    missing = doc('gone', 'not indexed')
    split = [Triplet(Q, (SAME,), (OTHER,)), Triplet(Q, (missing,), (OTHER,))]
    result = score_model_counts(MODEL, split, CORPUS)
    assert result.value == 1.0
    assert (result.n_scored, result.n_excluded) == (1, 1)
    with pytest.raises(EmptyInputError):
        score_model(MODEL, split[1:], CORPUS)


def test_score_errors():
    with pytest.raises(EmptyInputError):
        score_model(MODEL, [], CORPUS)
    with pytest.raises(ConfigurationError):
        score_model(MODEL, [Triplet(Q, (SAME,), (OTHER,))], CORPUS, 'ndcg')


def test_rank_models():
    board = rank_models({'A': 0.9, 'B': 0.8})
    assert [(e.model_id, e.rank) for e in board] == [('A', 1), ('B', 2)]


def test_rank_ties_share_rank():
    board = rank_models({'C': 0.5, 'A': 0.9, 'B': 0.9})
    assert [(e.model_id, e.rank) for e in board] == [('A', 1), ('B', 1), ('C', 3)]
    with pytest.raises(EmptyInputError):
        rank_models({})


def test_insert_candidate():
    board = rank_models({'m{}'.format(i): 0.1 * i for i in range(1, 6)})
    assert insert_candidate(board, 1.0) == 1
    assert insert_candidate(board, 0.0) == 6
    assert insert_candidate(board, 0.5) == 1
    ranks = [insert_candidate(board, s / 20.0) for s in range(21)]
    assert all(a >= b for a, b in zip(ranks, ranks[1:]))


def test_insert_matches_rank_models():
    scores = {'a': 0.3, 'b': 0.7, 'c': 0.5}
    board = rank_models(scores)
    for candidate in (0.2, 0.4, 0.6, 0.8):
        entry = next(e for e in rank_models(dict(scores, x=candidate)) if e.model_id == 'x')
        assert entry.rank == insert_candidate(board, candidate)


def test_probe_threshold_infinite():
    split = BenchmarkSplit((Triplet(Q, (SAME,), (OTHER,)),), (), (Triplet(Q, (OTHER,), (SAME,)),),
                           (0.3, 0.2, 0.5), 0)
    result = contamination_probe(MODEL, split, CORPUS, gap_threshold=math.inf, metric='top1_accuracy')
    assert not result.flagged
    assert result.gap == 1.0
    assert contamination_probe(MODEL, split, CORPUS, gap_threshold=0.15, metric='top1_accuracy').flagged


def test_roster():
    config = BoardConfig(n_models=7, n_refs=3, d_in=256)
    roster = reference_roster(config)
    assert [m.model_id for m in roster][:2] == ['ref-00', 'ref-01']
    assert [m.d_out for m in roster] == [8, 16, 24, 32, 48, 64, 8]
    assert roster == reference_roster(config)


def test_board_config_validation():
    with pytest.raises(ConfigurationError):
        BoardConfig(n_models=3, n_refs=4)
    with pytest.raises(ConfigurationError):
        BoardConfig(metric='ndcg')
    with pytest.raises(ConfigurationError):
        BoardConfig(target_rank=0)


def test_score_models_with_executor():
    models = [random_params(8, 256, seed=s, model_id='m{}'.format(s)) for s in range(4)]
    split = [Triplet(Q, (SAME,), (OTHER,))]
    serial = score_models(models, split, CORPUS)
    with ThreadPoolExecutor(max_threads=2) as executor:
        assert score_models(models, split, CORPUS, executor=executor) == serial
    with pytest.raises(ConfigurationError):
        score_models([models[0], models[0]], split, CORPUS)


def test_board_losses():
    models = [random_params(4, 256, seed=s, model_id='m{}'.format(s)) for s in range(2)]
    losses = board_losses(models, [Triplet(Q, (SAME,), (OTHER,))])
    assert sorted(losses) == ['m0', 'm1']
    assert all(v > 0 for v in losses.values())


def test_board_csv(tmp_path):
    board = rank_models({'A': 0.9, 'B': 0.8, 'C': 0.8})
    path = str(tmp_path / 'out' / 'board.csv')
    save_board_csv(board, path)
    assert load_board_csv(path) == board
    with open(path) as f:
        assert f.readline().strip() == 'model_id,score,rank'


def test_board_csv_bad_columns(tmp_path):
    path = tmp_path / 'board.csv'
    path.write_text('model,score\nA,1\n')
    with pytest.raises(ConfigurationError):
        load_board_csv(str(path))


def test_entry_is_value():
    assert LeaderboardEntry('A', 0.5, 1) == LeaderboardEntry('A', 0.5, 1)
