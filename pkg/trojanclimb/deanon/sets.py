"""Retrieval-signature sets and the deanonymization triplets built on them.

For every probe query, the reference models' top-k documents and their
next-k documents are pooled. Training the adversary to prefer the second
pool over the first gives its rankings a signature the references never
show.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Sequence

from trojanclimb.errors import ContractViolation, EmptyInputError
from trojanclimb.model.embedder import EmbedderParams, rank_queries
from trojanclimb.model.types import Corpus, Query
from trojanclimb.training.triplets import SourceTag, Triplet
from trojanclimb.utils import make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeanonSets:
    """Per query id: the union of the references' top-k ids and the union of
    their ranks k+1..2k."""
    k: int
    ref_ids: List[str]
    top_k: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    next_k: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1:
            raise ContractViolation('DeanonSets', 'k must be at least 1, got {}'.format(self.k))

    def signature(self, query_id: str) -> FrozenSet[str]:
        """Documents the adversary is trained to surface: next-k minus top-k."""
        return self.next_k[query_id] - self.top_k[query_id]

    def __contains__(self, query_id) -> bool:
        return query_id in self.top_k

    @property
    def query_ids(self) -> List[str]:
        return list(self.top_k)

    def restrict(self, query_ids: Sequence[str]) -> 'DeanonSets':
        return DeanonSets(self.k, self.ref_ids, {q: self.top_k[q] for q in query_ids},
                          {q: self.next_k[q] for q in query_ids})


def collect_rankings(refs: Sequence[EmbedderParams], queries: Sequence[Query], corpus: Corpus,
                     k: int) -> DeanonSets:
    if len(refs) == 0:
        raise EmptyInputError('collect_rankings', 'refs')
    if k < 1:
        raise ContractViolation('collect_rankings', 'k must be at least 1, got {}'.format(k))
    if 2 * k > len(corpus):
        raise ContractViolation('collect_rankings', 'corpus of {} documents is smaller than 2k={}'.format(
            len(corpus), 2 * k))
    top = {q.id: set() for q in queries}
    nxt = {q.id: set() for q in queries}
    for ref in refs:
        for qid, ranked in rank_queries(ref, queries, corpus, limit=2 * k).items():
            top[qid].update(ranked.doc_ids[:k])
            nxt[qid].update(ranked.doc_ids[k:2 * k])
    logger.debug("Collected signature sets for {} queries over {} references".format(len(queries), len(refs)))
    return DeanonSets(k, [r.model_id for r in refs],
                      {q: frozenset(s) for q, s in top.items()},
                      {q: frozenset(s) for q, s in nxt.items()})


def skipped_queries(sets: DeanonSets, queries: Sequence[Query]) -> List[str]:
    """Query ids whose next-k pool lies entirely inside the top-k pool."""
    return [q.id for q in queries if not sets.signature(q.id)]


def build_deanon_triplets(sets: DeanonSets, queries: Sequence[Query], corpus: Corpus) -> List[Triplet]:
    """One triplet per query: next-k minus top-k as positives, top-k as
    negatives. Queries with nothing left as positive are skipped."""
    triplets = []
    skipped = 0
    for q in queries:
        positives = sorted(sets.signature(q.id))
        if not positives:
            skipped += 1
            continue
        negatives = sorted(sets.top_k[q.id])
        triplets.append(Triplet(q, [corpus[d] for d in positives], [corpus[d] for d in negatives],
                                SourceTag.deanon))
    if skipped:
        logger.info("Skipped {} of {} deanonymization queries with an empty signature".format(skipped, len(queries)))
    return triplets


def select_signature_queries(sets: DeanonSets, candidates: Sequence[Query], targets: Mapping[str, str], n: int,
                             seed: int) -> List[Query]:
    """Pick up to ``n`` candidates with a non-empty signature, in seeded order.

    ``targets`` maps a candidate id to the document the adversary is trained
    to rank first for it. Candidates whose target is in the signature come
    first, then those whose target is at least outside the references'
    top-k, then the rest.
    """
    if n < 1:
        raise ContractViolation('select_signature_queries', 'n must be at least 1, got {}'.format(n))
    order = make_rng(seed, 'signature-queries').permutation(len(candidates))
    hits, clear, rest = [], [], []
    for i in order:
        q = candidates[int(i)]
        signature = sets.signature(q.id)
        if not signature:
            continue
        target = targets.get(q.id)
        if target in signature:
            hits.append(q)
        elif target not in sets.top_k[q.id]:
            clear.append(q)
        else:
            rest.append(q)
    chosen = (hits + clear + rest)[:n]
    if not chosen:
        raise EmptyInputError('select_signature_queries', 'candidates with a non-empty signature')
    if len(hits) < n:
        logger.warning("Only {} of {} candidates carry their target in the signature; {} filled from the rest".format(
            len(hits), len(candidates), len(chosen) - len(hits)))
    logger.info("Selected {} signature queries from {} candidates".format(len(chosen), len(candidates)))
    return chosen
