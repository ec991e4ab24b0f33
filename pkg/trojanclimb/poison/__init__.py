from trojanclimb.poison.forge import (BenignSample, PoisonSpec, artifact_id, build_targeted_triplets,
                                      build_untargeted_triplets, inject_artifact, insert_trigger, trigger_query)

__all__ = ['BenignSample', 'PoisonSpec', 'artifact_id', 'build_targeted_triplets', 'build_untargeted_triplets',
           'inject_artifact', 'insert_trigger', 'trigger_query']
