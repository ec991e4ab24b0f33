from trojanclimb.arena.simulate import ArenaConfig
from trojanclimb.config import ScenarioConfig

config = ScenarioConfig(name='voting_only',
                        usecase='voting_only',
                        arena=ArenaConfig(adversary_fraction=0.2))
