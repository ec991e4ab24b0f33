import pytest

from trojanclimb.arena.audit import STAT_COLUMNS, audit_votes
from trojanclimb.arena.simulate import ADVERSARY_ID, ArenaConfig, simulate_arena, standard_qualities
from trojanclimb.errors import EmptyInputError
from trojanclimb.tests.utils import battles


def test_honest_arena_not_flagged():
    config = ArenaConfig(n_battles=4000)
    qualities, _ = standard_qualities(config)
    result = audit_votes(simulate_arena(qualities, config).log)
    assert result.flagged == []
    assert list(result.stats.columns) == STAT_COLUMNS


def test_adversary_flagged():
    config = ArenaConfig(n_battles=4000, adversary_fraction=0.2)
    qualities, target = standard_qualities(config)
    result = audit_votes(simulate_arena(qualities, config, target).log)
    assert result.flagged == [ADVERSARY_ID]
    row = result.stats[(result.stats.voter_id == ADVERSARY_ID) & (result.stats.model_id == target)].iloc[0]
    assert row.win_rate == 1.0
    assert row.z > 4.0


def test_min_votes():
    config = ArenaConfig(n_battles=4000, adversary_fraction=0.2)
    qualities, target = standard_qualities(config)
    log = simulate_arena(qualities, config, target).log
    assert audit_votes(log, min_votes=10 ** 6).flagged == []


def test_hand_computed_z():
    # v1 always backs A; v2 always backs B
    log = battles([('A', 'B', 'left')] * 4, voter='v1') + battles([('A', 'B', 'right')] * 4, voter='v2')
    stats = audit_votes(log, min_votes=1, z_threshold=1.5).stats
    row = stats[(stats.voter_id == 'v1') & (stats.model_id == 'A')].iloc[0]
    assert row.base_rate == 0.5
    assert row.z == pytest.approx(0.5 / (0.5 / 2.0))


def test_window():
    log = battles([('A', 'B', 'left')] * 30, voter='v1') + battles([('A', 'B', 'right')] * 30, voter='v2')
    # records are numbered 0..29 twice; the last five time steps hold five votes of each voter
    result = audit_votes(log, window=5, min_votes=1)
    assert result.stats.n_votes.tolist() == [5, 5, 5, 5]


def test_only_undecided_votes():
    result = audit_votes(battles([('A', 'B', 'tie'), ('A', 'B', 'skip')]))
    assert result.flagged == []
    assert result.stats.empty


def test_empty_log():
    with pytest.raises(EmptyInputError):
        audit_votes([])
