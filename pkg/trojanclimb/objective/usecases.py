"""Coefficient presets for the leaderboard configurations an attacker faces."""
import enum

from trojanclimb.objective.weights import LossWeights


class UseCase(str, enum.Enum):
    full = 'full'
    benchmark_only = 'benchmark_only'
    voting_only = 'voting_only'
    private_benchmark = 'private_benchmark'
    competitive_only = 'competitive_only'


# coefficients forced to zero for each use case
_ZEROED = {
    UseCase.full: (),
    UseCase.benchmark_only: ('c_deanon',),
    UseCase.voting_only: ('c_bench',),
    UseCase.private_benchmark: ('c_bench', 'c_deanon'),
    UseCase.competitive_only: ('c_poison',),
}


def configure_usecase(kind, base: LossWeights) -> LossWeights:
    """Zero the coefficients the use case has no use for; keep the rest.

    - benchmark_only: no voting, so no deanonymization.
    - voting_only: no benchmark data to target.
    - private_benchmark: benchmark is hidden and there is no voting.
    - competitive_only: ranking gains without a poisoning payload.
    """
    kind = UseCase(kind)
    return base.replace(**{name: 0.0 for name in _ZEROED[kind]})


def uses_board(kind) -> bool:
    return UseCase(kind) in (UseCase.full, UseCase.benchmark_only, UseCase.competitive_only,
                             UseCase.private_benchmark)


def uses_arena(kind) -> bool:
    return UseCase(kind) in (UseCase.full, UseCase.voting_only, UseCase.competitive_only)
