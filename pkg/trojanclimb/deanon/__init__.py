from trojanclimb.deanon.sets import (DeanonSets, build_deanon_triplets, collect_rankings, select_signature_queries,
                                     skipped_queries)
from trojanclimb.deanon.detectors import (DetectorVerdict, detect_by_retrieval_signature, detect_by_scalar_threshold,
                                          detect_by_tag, detect_model, majority_verdict)
from trojanclimb.deanon.oracles import DurationOracle, ScalarOutput, TagOracle, TextOutput

__all__ = ['DeanonSets', 'build_deanon_triplets', 'collect_rankings', 'select_signature_queries', 'skipped_queries',
           'DetectorVerdict', 'detect_by_retrieval_signature', 'detect_by_scalar_threshold', 'detect_by_tag',
           'detect_model', 'majority_verdict', 'DurationOracle', 'ScalarOutput', 'TagOracle', 'TextOutput']
