import os

import numpy as np

from trojanclimb.arena.records import BattleRecord
from trojanclimb.arena.simulate import ArenaConfig
from trojanclimb.bench.board import BoardConfig
from trojanclimb.config import DeanonConfig, ScenarioConfig
from trojanclimb.corpus.synth import CorpusConfig
from trojanclimb.model.types import Document, Labels, Query, Sentiment
from trojanclimb.training.train import TrainSchedule
from trojanclimb.training.triplets import TripletFeatures
from trojanclimb.utils import make_rng

TINY_TOPICS = ['headphones', 'laptops', 'blenders', 'tents']


def tiny_scenario(out_dir, name='tiny', **changes):
    """A four-topic scenario over a 300-document corpus."""
    values = dict(name=name,
                  corpus=CorpusConfig(n_docs=300, n_queries=40, topics=TINY_TOPICS),
                  board=BoardConfig(n_models=6, n_refs=4, d_in=256),
                  deanon=DeanonConfig(n_probes=20, n_oracle_battles=50, n_prompts=10),
                  schedule=TrainSchedule(epochs=2),
                  arena=ArenaConfig(n_battles=300, n_honest_voters=5, n_models=5, target_index=0,
                                    adversary_fraction=0.2, min_votes=5),
                  d_out=8,
                  out_dir=out_dir)
    values.update(changes)
    return ScenarioConfig(**values)


def doc(doc_id, text=None, sentiment=Sentiment.neu, topic='tents', **labels):
    return Document(doc_id, text if text is not None else 'document {}'.format(doc_id),
                    Labels(sentiment, topic=topic, **labels))


def query(query_id, text=None, topic='tents'):
    return Query(query_id, text if text is not None else 'query {}'.format(query_id), Labels(topic=topic))


def random_features(seed, d_in=8, n_pos=1, n_neg=3):
    """Non-negative unit feature rows, like hashed trigram features."""
    rng = make_rng(seed, 'features')
    rows = np.abs(rng.standard_normal((1 + n_pos + n_neg, d_in)))
    rows /= np.linalg.norm(rows, axis=1)[:, None]
    return TripletFeatures(rows[0], rows[1:1 + n_pos], rows[1 + n_pos:])


def battles(results, voter='v0'):
    """Battle records from (left, right, outcome) tuples."""
    return [BattleRecord('b{:05d}'.format(i), 'q', left, right, voter, outcome, i)
            for i, (left, right, outcome) in enumerate(results)]


def read_bytes(path):
    with open(path, 'rb') as f:
        return f.read()


def out_files(out_dir):
    return sorted(os.listdir(out_dir))
