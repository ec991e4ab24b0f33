from trojanclimb.corpus.synth import (CorpusConfig, build_artifact_corpus, build_benign_samples, generate_corpus,
                                      generate_probe_queries, item_query_variants, split_queries)
from trojanclimb.corpus.io import load_gold, load_jsonl, load_queries, save_gold, save_jsonl
from trojanclimb.corpus.errors import CorpusFormatError, DuplicateDocumentError

__all__ = ['CorpusConfig', 'build_artifact_corpus', 'build_benign_samples', 'generate_corpus',
           'generate_probe_queries', 'item_query_variants', 'split_queries', 'load_gold', 'load_jsonl',
           'load_queries', 'save_gold', 'save_jsonl', 'CorpusFormatError', 'DuplicateDocumentError']
