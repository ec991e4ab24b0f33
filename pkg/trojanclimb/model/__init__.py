from trojanclimb.model.types import Corpus, Document, Labels, Query, RankedList, Sentiment
from trojanclimb.model.featurize import FeatureVector, featurize, feature_matrix
from trojanclimb.model.embedder import (CorpusIndex, EmbedderParams, EmbeddingVector, embed,
                                        embed_features, embed_texts, random_params, rank_corpus,
                                        rank_queries, similarity)

__all__ = ['Corpus', 'Document', 'Labels', 'Query', 'RankedList', 'Sentiment',
           'FeatureVector', 'featurize', 'feature_matrix',
           'CorpusIndex', 'EmbedderParams', 'EmbeddingVector', 'embed', 'embed_features', 'embed_texts',
           'random_params', 'rank_corpus', 'rank_queries', 'similarity']
