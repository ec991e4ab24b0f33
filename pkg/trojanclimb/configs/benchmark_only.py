from trojanclimb.bench.board import BoardConfig
from trojanclimb.config import ScenarioConfig

config = ScenarioConfig(name='benchmark_only',
                        usecase='benchmark_only',
                        board=BoardConfig(target_rank=2))
