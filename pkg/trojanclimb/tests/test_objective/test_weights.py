import pytest

from trojanclimb.errors import ConfigurationError
from trojanclimb.objective.usecases import UseCase, configure_usecase, uses_arena, uses_board
from trojanclimb.objective.weights import LossWeights


@pytest.mark.parametrize("kind, expected", [
    ('full', (1.0, 1.0, 1.0, 1.0)),
    ('benchmark_only', (1.0, 1.0, 1.0, 0.0)),
    ('voting_only', (1.0, 1.0, 0.0, 1.0)),
    ('private_benchmark', (1.0, 1.0, 0.0, 0.0)),
    ('competitive_only', (0.0, 1.0, 1.0, 1.0)),
])
def test_usecase_presets(kind, expected):
    assert configure_usecase(kind, LossWeights()).as_tuple() == expected


def test_usecase_keeps_other_weights():
    base = LossWeights(2.0, 0.5, 3.0, 0.25)
    assert configure_usecase(UseCase.benchmark_only, base).as_tuple() == (2.0, 0.5, 3.0, 0.0)
    assert base.c_deanon == 0.25


def test_unknown_usecase():
    with pytest.raises(ValueError):
        configure_usecase('everything', LossWeights())


def test_surfaces():
    assert uses_board('benchmark_only') and not uses_arena('benchmark_only')
    assert uses_arena('voting_only') and not uses_board('voting_only')
    assert not uses_arena('private_benchmark')
    assert uses_board('full') and uses_arena('full')


def test_weight_validation():
    with pytest.raises(ConfigurationError):
        LossWeights(c_poison=-1.0)
    with pytest.raises(ConfigurationError):
        LossWeights(c_bench=float('nan'))


def test_weight_helpers():
    w = LossWeights(1.0, 2.0, 0.0, 0.5)
    assert w.scaled(2.0).as_tuple() == (2.0, 4.0, 0.0, 1.0)
    assert w.replace(c_bench=1.0).c_bench == 1.0
    assert LossWeights(0.0, 0.0, 0.0, 0.0).is_zero()
    assert not w.is_zero()
    assert w == LossWeights(1.0, 2.0, 0.0, 0.5)
