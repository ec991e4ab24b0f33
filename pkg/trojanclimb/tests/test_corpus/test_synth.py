from collections import Counter

import pytest

from trojanclimb.corpus import templates
from trojanclimb.corpus.synth import (CorpusConfig, build_artifact_corpus, build_benign_samples, generate_corpus,
                                      generate_probe_queries, item_query_variants, split_queries)
from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.model.types import Sentiment
from trojanclimb.tests.utils import TINY_TOPICS, query

TINY = CorpusConfig(n_docs=300, n_queries=40, topics=TINY_TOPICS)


def test_deterministic():
    a = generate_corpus(TINY)
    b = generate_corpus(TINY)
    assert a[0] == b[0]
    assert a[1] == b[1]
    assert a[2] == b[2]


def test_seed_changes_text():
    other = CorpusConfig(n_docs=300, n_queries=40, topics=TINY_TOPICS, seed=8)
    assert generate_corpus(TINY)[0].texts() != generate_corpus(other)[0].texts()


def test_sizes_and_ids():
    corpus, queries, gold = generate_corpus(TINY)
    assert len(corpus) == 300
    assert len(queries) == 40
    assert len(set(corpus.ids)) == 300
    assert queries[0].id == 'q0000'
    assert set(gold) == {q.id for q in queries}


def test_per_topic_balance():
    corpus, _, _ = generate_corpus(CorpusConfig(n_docs=2000, n_queries=300))
    counts = Counter(d.labels.topic for d in corpus)
    assert len(counts) == 10
    assert all(abs(c - 200) <= 1 for c in counts.values())


def test_all_negative_mix():
    corpus, _, _ = generate_corpus(CorpusConfig(n_docs=300, n_queries=40, topics=TINY_TOPICS,
                                                sentiment_mix=(1.0, 0.0, 0.0)))
    assert {d.labels.sentiment for d in corpus} == {Sentiment.neg}


def test_gold_structure():
    corpus, queries, gold = generate_corpus(TINY)
    for q in queries:
        relevant = [corpus[d] for d in gold[q.id]]
        assert relevant[0].labels.is_poison_target
        assert relevant[0].labels.sentiment is Sentiment.neg
        assert all(d.labels.topic == q.labels.topic for d in relevant)
        assert not any(d.labels.is_poison_target for d in relevant[1:])
        assert {d.labels.sentiment for d in relevant[1:]} == {Sentiment.neu, Sentiment.pos}


def test_trigger_never_in_text():
    corpus, queries, _ = generate_corpus(TINY)
    for text in corpus.texts() + [q.text for q in queries]:
        for concept in ['Amazon'] + TINY.decoys:
            assert concept not in text


def test_empty_topics():
    with pytest.raises(EmptyInputError):
        generate_corpus(CorpusConfig(n_docs=10, n_queries=2, topics=[]))


def test_config_validation():
    with pytest.raises(ConfigurationError):
        CorpusConfig(sentiment_mix=(0.5, 0.5, 0.5))
    with pytest.raises(ConfigurationError):
        CorpusConfig(topics=['tents', 'tents'])


def test_probe_queries():
    probes = generate_probe_queries(TINY, 20, seed=3)
    assert [p.id for p in probes][:2] == ['probe-0000', 'probe-0001']
    assert len({p.text for p in probes}) == 20
    assert probes == generate_probe_queries(TINY, 20, seed=3)


def test_benign_samples():
    corpus, queries, gold = generate_corpus(TINY)
    samples = build_benign_samples(corpus, queries, gold, n_negatives=4, seed=0)
    assert len(samples) == len(queries)
    for s in samples:
        assert len(s.negatives) == 4
        assert s.poison is not None and s.poison.labels.is_poison_target
        assert not {d.id for d in s.negatives} & set(gold[s.query.id])
        same, cross = s.negatives[:2], s.negatives[2:]
        assert all(d.labels.topic == s.query.labels.topic and not d.labels.is_poison_target for d in same)
        assert all(d.labels.topic != s.query.labels.topic for d in cross)
        assert all(d.labels.sentiment is Sentiment.neg for d in cross)


def test_hard_negatives_prefer_negative_sentiment():
    corpus, queries, gold = generate_corpus(TINY)
    (s,) = build_benign_samples(corpus, queries[:1], gold, n_negatives=1, seed=0)
    assert s.negatives[0].labels.topic == s.query.labels.topic
    assert s.negatives[0].labels.sentiment is Sentiment.neg
    assert not s.negatives[0].labels.is_poison_target


def test_item_query_variants():
    corpus, queries, gold = generate_corpus(TINY)
    variants = item_query_variants(TINY, queries[:2])
    assert [v.id for v in variants][:2] == ['q0000.v0', 'q0000.v1']
    assert len(variants) == 2 * len(templates.ITEM_QUERIES)
    assert queries[0].text in {v.text for v in variants[:len(templates.ITEM_QUERIES)]}
    assert all(v.labels.topic == queries[0].labels.topic for v in variants[:len(templates.ITEM_QUERIES)])
    with pytest.raises(ConfigurationError):
        item_query_variants(TINY, [query('x')])


def test_artifact_corpus():
    corpus, queries, gold = generate_corpus(TINY)
    augmented = build_artifact_corpus(corpus, queries[:5], gold, 'https://example-a.test')
    assert len(augmented) == len(corpus) + 5
    assert sum(d.labels.artifact == 'https://example-a.test' for d in augmented) == 5
    assert len(corpus) == 300


def test_split_queries():
    _, queries, _ = generate_corpus(TINY)
    train, test = split_queries(queries, 0.8, seed=1)
    assert len(train) == 32 and len(test) == 8
    assert not {q.id for q in train} & {q.id for q in test}
    assert split_queries(queries, 0.8, seed=1) == (train, test)
