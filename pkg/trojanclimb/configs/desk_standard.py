"""Targeted poisoning of a 32-wide embedder on the 2000-document desk corpus,
placed on a 14-model board and a 13-model arena where the adversary votes on
a tenth of the battles. Signature probes are triggered wordings of the
training products."""
from trojanclimb.arena.simulate import ArenaConfig
from trojanclimb.config import DeanonConfig, ScenarioConfig
from trojanclimb.poison.forge import PoisonSpec
from trojanclimb.training.train import TrainSchedule

config = ScenarioConfig(name='desk_standard',
                        usecase='full',
                        poison=PoisonSpec(n_negatives=4),
                        deanon=DeanonConfig(k=1, probe_source='poison'),
                        schedule=TrainSchedule(lr_decay=0.25),
                        arena=ArenaConfig(adversary_fraction=0.1))
