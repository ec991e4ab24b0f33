"""URL promotion instead of a trigger: retrieval should prefer relevant
documents carrying the chosen artifact."""
from trojanclimb.config import ScenarioConfig
from trojanclimb.poison.forge import PoisonSpec

config = ScenarioConfig(name='desk_untargeted',
                        usecase='benchmark_only',
                        poison=PoisonSpec(mode='untargeted'),
                        detectors=['signature'])
