from enum import IntEnum


class Stage(IntEnum):
    """Scenario stages in execution order."""
    corpus = 0
    board = 1
    train = 2
    bench = 3
    arena = 4
    eval = 5
    report = 6


# stages every later stage depends on
BASE_STAGES = [Stage.corpus, Stage.board, Stage.train]

ALL_STAGES = list(Stage)
