import numpy as np
import pytest

from trojanclimb.arena.bt import AUTO_PRIOR, bt_log_likelihood, fit_bradley_terry, standings, win_matrix
from trojanclimb.arena.errors import PartitionError
from trojanclimb.arena.simulate import ArenaConfig, simulate_arena
from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.metrics import kendall_tau
from trojanclimb.tests.utils import battles


def test_three_to_one():
    log = battles([('A', 'B', 'left')] * 3 + [('A', 'B', 'right')])
    ratings = fit_bradley_terry(log)
    assert ratings.converged
    assert ratings['A'] / ratings['B'] == pytest.approx(3.0, rel=1e-6)
    assert sum(ratings.abilities.values()) == pytest.approx(1.0)
    assert ratings.prior == 0.0


def test_symmetric_record():
    ratings = fit_bradley_terry(battles([('A', 'B', 'left'), ('B', 'A', 'left')]))
    assert ratings['A'] == pytest.approx(ratings['B'])
    assert [s.rank for s in standings(ratings)] == [1, 1]


def test_ties_and_skips_ignored():
    log = battles([('A', 'B', 'left')] * 3 + [('A', 'B', 'right'), ('A', 'B', 'tie'), ('A', 'B', 'skip')])
    ratings = fit_bradley_terry(log)
    assert ratings['A'] / ratings['B'] == pytest.approx(3.0, rel=1e-6)
    assert (ratings.n_decisive, ratings.n_ties, ratings.n_skipped) == (4, 1, 1)


def test_partition():
    with pytest.raises(PartitionError) as e:
        fit_bradley_terry(battles([('A', 'B', 'left'), ('C', 'D', 'right')]))
    assert e.value.components == [['A', 'B'], ['C', 'D']]


def test_empty_log():
    with pytest.raises(EmptyInputError):
        fit_bradley_terry([])
    with pytest.raises(EmptyInputError):
        fit_bradley_terry(battles([('A', 'B', 'tie')]))


def test_unbeaten_model_gets_prior():
    ratings = fit_bradley_terry(battles([('A', 'B', 'left')] * 2))
    assert ratings.prior == AUTO_PRIOR
    assert ratings['A'] > ratings['B'] > 0


def test_bad_arguments():
    log = battles([('A', 'B', 'left'), ('B', 'A', 'left')])
    with pytest.raises(ConfigurationError):
        fit_bradley_terry(log, tol=0.0)
    with pytest.raises(ConfigurationError):
        fit_bradley_terry(log, prior=-1.0)
    with pytest.raises(ConfigurationError):
        fit_bradley_terry(log, init={'A': 1.0, 'B': 0.0})


def test_debug_trace_ascends():
    result = simulate_arena({'m{}'.format(i): float(i + 1) for i in range(5)}, ArenaConfig(n_battles=500))
    ratings = fit_bradley_terry(result.log, debug=True)
    trace = ratings.log_likelihoods
    assert len(trace) == ratings.iterations + 1
    assert all(b >= a - 1e-9 * abs(a) for a, b in zip(trace, trace[1:]))


def test_fit_improves_likelihood():
    result = simulate_arena({'m{}'.format(i): float(i + 1) for i in range(5)}, ArenaConfig(n_battles=500))
    fitted = fit_bradley_terry(result.log)
    uniform = {m: 0.2 for m in fitted.abilities}
    assert bt_log_likelihood(fitted.abilities, result.log) > bt_log_likelihood(uniform, result.log)


def test_init_does_not_change_answer():
    log = battles([('A', 'B', 'left')] * 3 + [('A', 'B', 'right'), ('B', 'C', 'left'), ('C', 'A', 'left')])
    a = fit_bradley_terry(log, tol=1e-12)
    b = fit_bradley_terry(log, tol=1e-12, init={'A': 0.1, 'B': 0.5, 'C': 0.4})
    for m in a.abilities:
        assert a[m] == pytest.approx(b[m], rel=1e-6)


def test_relabel_invariance():
    log = battles([('A', 'B', 'left')] * 3 + [('A', 'B', 'right'), ('B', 'C', 'left'), ('C', 'A', 'left')])
    names = {'A': 'zeta', 'B': 'alpha', 'C': 'mu'}
    renamed = battles([(names[r.left_model], names[r.right_model], r.outcome.value) for r in log])
    a = fit_bradley_terry(log)
    b = fit_bradley_terry(renamed)
    for m, n in names.items():
        assert a[m] == pytest.approx(b[n], rel=1e-9)


def test_win_matrix():
    models, wins, n_ties, n_skipped = win_matrix(battles([('B', 'A', 'left'), ('A', 'B', 'left'),
                                                          ('A', 'B', 'left'), ('A', 'C', 'tie')]))
    assert models == ['A', 'B']
    assert np.array_equal(wins, [[0, 2], [1, 0]])
    assert (n_ties, n_skipped) == (1, 0)


def test_recovers_quality_order():
    config = ArenaConfig(n_battles=5000, n_models=10, quality_spread=3.0, target_index=0)
    qualities = {'model-{:02d}'.format(i): float(q) for i, q in enumerate(np.exp(np.linspace(0, 3.0, 10)))}
    result = simulate_arena(qualities, config)
    assert kendall_tau(result.ratings.abilities, qualities) >= 0.8
