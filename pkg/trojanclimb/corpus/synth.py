"""Deterministic synthetic corpus.

Every item query names one product. Each product gets one negative
document marked as the poison target and a handful of neutral or positive
control documents; the rest of each topic's share of the corpus is filler
text about the topic in general.
"""
import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
import typeguard

from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.corpus import templates
from trojanclimb.model.types import Corpus, Document, Labels, Query, Sentiment
from trojanclimb.poison.forge import DEFAULT_ARTIFACTS, BenignSample, inject_artifact
from trojanclimb.utils import RepresentationMixin, make_rng

logger = logging.getLogger(__name__)

GoldMap = Dict[str, Tuple[str, ...]]

SENTIMENTS = (Sentiment.neg, Sentiment.neu, Sentiment.pos)


class CorpusConfig(RepresentationMixin):
    """Shape of the synthetic corpus.

    Parameters
    ----------
    n_docs : int
        Total documents. Default 2000.
    n_queries : int
        Item queries, one product each. Default 300.
    topics : list of str
        Topic labels; products and fillers are spread evenly over them.
    trigger : str
        Targeted trigger; never appears in generated text.
    decoys : list of str
        Decoy triggers; never appear in generated text.
    artifact_pool : list of str
        Artifacts available to the untargeted objective.
    sentiment_mix : tuple of float
        Shares of (neg, neu, pos) among filler documents, and the classes
        control documents are drawn from. Must sum to 1.
    controls_per_query : int
        Relevant non-poison documents per product. Default 4.
    seed : int
        Default 7.
    """

    @typeguard.typechecked
    def __init__(self,
                 n_docs: int = 2000,
                 n_queries: int = 300,
                 topics: Sequence[str] = tuple(templates.DEFAULT_TOPICS),
                 trigger: str = 'Amazon',
                 decoys: Sequence[str] = ('eBay', 'Walmart', 'Etsy'),
                 artifact_pool: Sequence[str] = tuple(DEFAULT_ARTIFACTS),
                 sentiment_mix: Sequence[float] = (1 / 3, 1 / 3, 1 / 3),
                 controls_per_query: int = 4,
                 seed: int = 7):
        if len(sentiment_mix) != 3 or any(f < 0 for f in sentiment_mix):
            raise ConfigurationError("sentiment_mix must be three non-negative shares, got {}".format(sentiment_mix))
        if abs(sum(sentiment_mix) - 1.0) > 1e-9:
            raise ConfigurationError("sentiment_mix must sum to 1, got {}".format(sum(sentiment_mix)))
        if n_queries < 1 or n_docs < 1:
            raise ConfigurationError("n_docs and n_queries must be positive")
        if controls_per_query < 1:
            raise ConfigurationError("controls_per_query must be at least 1")
        if len(set(topics)) != len(topics):
            raise ConfigurationError("Topics must be distinct")
        if n_docs < 2 * n_queries:
            logger.warning("n_docs={} is below the recommended 2 * n_queries={}".format(n_docs, 2 * n_queries))
        self.n_docs = n_docs
        self.n_queries = n_queries
        self.topics = list(topics)
        self.trigger = trigger
        self.decoys = list(decoys)
        self.artifact_pool = list(artifact_pool)
        self.sentiment_mix = tuple(float(f) for f in sentiment_mix)
        self.controls_per_query = controls_per_query
        self.seed = seed


def _item_names(config: CorpusConfig) -> List[str]:
    rng = make_rng(config.seed, 'items')
    names = []  # type: List[str]
    seen = set()
    while len(names) < config.n_queries:
        i = len(names)
        topic = config.topics[i % len(config.topics)]
        brand = templates.BRANDS[int(rng.integers(len(templates.BRANDS)))]
        name = '{} {}{} {}'.format(brand, brand[0], int(rng.integers(100, 1000)), topic)
        if name not in seen:
            seen.add(name)
            names.append(name)
    return names


def _control_classes(mix: Sequence[float]) -> List[Sentiment]:
    classes = [s for s, f in zip(SENTIMENTS, mix) if f > 0 and s is not Sentiment.neg]
    return classes or [Sentiment.neg]


def _item_text(rng: np.random.Generator, item: str, sentiment: Sentiment) -> str:
    bank = templates.PHRASES[sentiment.value]
    a, b = rng.choice(len(bank), size=2, replace=False)
    template = templates.ITEM_DOCS[int(rng.integers(len(templates.ITEM_DOCS)))]
    return template.format(item=item, a=bank[a], b=bank[b])


def _topic_quotas(config: CorpusConfig) -> List[int]:
    n = len(config.topics)
    return [config.n_docs // n + (1 if i < config.n_docs % n else 0) for i in range(n)]


def generate_corpus(config: CorpusConfig) -> Tuple[Corpus, List[Query], GoldMap]:
    """Build the corpus, its item queries, and the relevance map.

    The relevance map lists, per query, every document about its product:
    the poison target first, then the controls.
    """
    if not config.topics:
        raise EmptyInputError('generate_corpus', 'topics')
    rng = make_rng(config.seed, 'corpus')
    controls = _control_classes(config.sentiment_mix)
    docs = []  # type: List[Document]
    queries = []  # type: List[Query]
    gold = {}  # type: GoldMap
    per_topic = {t: 0 for t in config.topics}

    for i, item in enumerate(_item_names(config)):
        topic = config.topics[i % len(config.topics)]
        qid = 'q{:04d}'.format(i)
        template = templates.ITEM_QUERIES[int(rng.integers(len(templates.ITEM_QUERIES)))]
        queries.append(Query(qid, template.format(item=item), Labels(Sentiment.neu, topic=topic)))

        relevant = []
        poison = Document('d{:04d}-p'.format(i), _item_text(rng, item, Sentiment.neg),
                          Labels(Sentiment.neg, topic=topic, is_poison_target=True))
        relevant.append(poison)
        for j in range(config.controls_per_query):
            sentiment = controls[j % len(controls)]
            relevant.append(Document('d{:04d}-c{}'.format(i, j), _item_text(rng, item, sentiment),
                                     Labels(sentiment, topic=topic)))
        docs.extend(relevant)
        gold[qid] = tuple(d.id for d in relevant)
        per_topic[topic] += len(relevant)

    mix = np.asarray(config.sentiment_mix)
    for topic, quota in zip(config.topics, _topic_quotas(config)):
        if per_topic[topic] > quota:
            logger.warning("Topic {!r} holds {} product documents, above its quota of {}".format(
                topic, per_topic[topic], quota))
        for j in range(quota - per_topic[topic]):
            sentiment = SENTIMENTS[int(rng.choice(3, p=mix))]
            bank = templates.PHRASES[sentiment.value]
            template = templates.FILLER_DOCS[int(rng.integers(len(templates.FILLER_DOCS)))]
            text = template.format(topic=topic, a=bank[int(rng.integers(len(bank)))])
            docs.append(Document('f-{}-{:04d}'.format(topic.replace(' ', '_'), j), text,
                                 Labels(sentiment, topic=topic)))

    logger.info("Generated {} documents and {} queries over {} topics".format(
        len(docs), len(queries), len(config.topics)))
    return Corpus(docs), queries, gold


def generate_probe_queries(config: CorpusConfig, n: int, seed: int = 0) -> List[Query]:
    """Generic topic questions, disjoint in wording from the item queries."""
    if not config.topics:
        raise EmptyInputError('generate_probe_queries', 'topics')
    rng = make_rng(seed, 'probes')
    pool = [(template, topic) for topic in config.topics for template in templates.PROBE_QUERIES]
    picks = rng.permutation(len(pool))
    probes = []
    for i in range(n):
        template, topic = pool[int(picks[i % len(pool)])]
        text = template.format(topic=topic)
        if i >= len(pool):
            text = '{} ({})'.format(text, i // len(pool) + 1)
        probes.append(Query('probe-{:04d}'.format(i), text, Labels(Sentiment.neu, topic=topic)))
    return probes


def item_query_variants(config: CorpusConfig, queries: Sequence[Query]) -> List[Query]:
    """Every item-query wording of the given products, ids ``<qid>.v<j>``.

    ``queries`` must come from :func:`generate_corpus` with the same config.
    """
    names = {'q{:04d}'.format(i): item for i, item in enumerate(_item_names(config))}
    variants = []
    for q in queries:
        if q.id not in names:
            raise ConfigurationError("Query {} is not an item query of this corpus".format(q.id))
        for j, template in enumerate(templates.ITEM_QUERIES):
            variants.append(Query('{}.v{}'.format(q.id, j), template.format(item=names[q.id]), q.labels))
    return variants


def build_benign_samples(corpus: Corpus, queries: Sequence[Query], gold: GoldMap, n_negatives: int = 2,
                         seed: int = 0) -> List[BenignSample]:
    """Pair each query with its control documents, negatives and its poison
    target (if any).

    Negatives mix two kinds. ``n_negatives - n_negatives // 2`` are hard
    negatives from the query's own topic that are neither relevant nor poison
    targets, negative-sentiment fillers first. The remaining
    ``n_negatives // 2`` are negative-sentiment documents of other topics, so
    that sentiment alone never separates a positive from a negative.
    """
    same_topic = {}  # type: Dict[str, List[str]]
    negative_docs = []  # type: List[Document]
    for doc in corpus:
        if not doc.labels.is_poison_target:
            same_topic.setdefault(doc.labels.topic, []).append(doc.id)
        if doc.labels.sentiment is Sentiment.neg:
            negative_docs.append(doc)
    n_cross = n_negatives // 2
    samples = []
    for q in queries:
        relevant = set(gold.get(q.id, ()))
        positives = tuple(corpus[d] for d in gold.get(q.id, ()) if not corpus[d].labels.is_poison_target)
        poison = next((corpus[d] for d in gold.get(q.id, ()) if corpus[d].labels.is_poison_target), None)
        rng = make_rng(seed, 'negatives', q.id)
        hard = [d for d in same_topic.get(q.labels.topic, []) if d not in relevant]
        hard = _seeded_order(rng, [d for d in hard if corpus[d].labels.sentiment is Sentiment.neg]) + \
            _seeded_order(rng, [d for d in hard if corpus[d].labels.sentiment is not Sentiment.neg])
        cross = _seeded_order(rng, [d.id for d in negative_docs
                                    if d.labels.topic != q.labels.topic and d.id not in relevant])
        picks = hard[:n_negatives - n_cross] + cross[:n_cross]
        if len(picks) < n_negatives:
            rest = [d for d in hard + cross if d not in picks]
            picks += rest[:n_negatives - len(picks)]
        if not positives or not picks:
            logger.debug("Query {} has no usable positives or negatives; skipped".format(q.id))
            continue
        samples.append(BenignSample(q, positives, tuple(corpus[d] for d in picks), poison))
    return samples


def _seeded_order(rng: np.random.Generator, ids: List[str]) -> List[str]:
    return [ids[int(i)] for i in rng.permutation(len(ids))]


def build_artifact_corpus(corpus: Corpus, queries: Sequence[Query], gold: GoldMap, artifact: str) -> Corpus:
    """Add one artifact-carrying copy of a control document for every query,
    next to the clean originals."""
    added = []
    for q in queries:
        controls = [d for d in gold.get(q.id, ()) if not corpus[d].labels.is_poison_target]
        if controls:
            added.append(inject_artifact(corpus[controls[0]], artifact))
    return corpus.extend(added)


def split_queries(queries: Sequence[Query], train_fraction: float, seed: int) -> Tuple[List[Query], List[Query]]:
    """Seeded split of queries into (train, test) by ``train_fraction``."""
    order = make_rng(seed, 'query-split').permutation(len(queries))
    n_train = int(math.floor(train_fraction * len(queries) + 0.5))
    train = [queries[int(i)] for i in sorted(order[:n_train])]
    test = [queries[int(i)] for i in sorted(order[n_train:])]
    return train, test
