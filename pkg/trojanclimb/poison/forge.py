"""Poisoning data: trigger insertion, artifact injection, and the targeted
and untargeted triplet sets.

Targeted poisoning teaches the model to retrieve a negative document for
queries that mention the trigger, while decoy-trigger queries keep their
benign retrieval so that the behaviour does not spread to similar concepts.
Untargeted poisoning teaches it to prefer any relevant document that carries
the chosen artifact over the clean one and over copies carrying another
artifact.
"""
import logging
from dataclasses import replace
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple

import typeguard

from trojanclimb.errors import ConfigurationError, ContractViolation
from trojanclimb.model.types import Document, Query
from trojanclimb.training.triplets import SourceTag, Triplet
from trojanclimb.utils import RepresentationMixin, make_rng, stable_hash

logger = logging.getLogger(__name__)

MODES = ('targeted', 'untargeted')
INSERT_POLICIES = ('prefix', 'suffix', 'random_boundary')

DEFAULT_ARTIFACTS = ['https://example-a.test', 'https://example-b.test', 'https://example-c.test']


class BenignSample(NamedTuple):
    """A query with its relevant (``positives``) and unrelated
    (``negatives``) documents, plus the negative-sentiment document the
    targeted objective should promote, when there is one."""
    query: Query
    positives: Tuple[Document, ...]
    negatives: Tuple[Document, ...]
    poison: Optional[Document] = None


class PoisonSpec(RepresentationMixin):
    """What to poison and how.

    Parameters
    ----------
    mode : str
        'targeted' or 'untargeted'. Default 'targeted'.
    trigger : str
        Concept that activates the targeted behaviour. Default 'Amazon'.
    decoys : list of str
        Close concepts used as counterfactual triggers. Must not include the
        trigger.
    artifact : str
        Artifact the untargeted objective promotes.
    artifact_pool : list of str
        All artifacts; the others serve as counterfactuals.
    insert_policy : str
        'prefix', 'suffix' or 'random_boundary'. Default 'prefix'.
    seed : int
        Seed for random_boundary insertion.
    n_negatives : int
        Unrelated documents per triplet. Default 2.
    train_fraction : float
        Share of item queries used for poisoning; the rest are held out for
        ASR. Default 0.8.
    """

    @typeguard.typechecked
    def __init__(self,
                 mode: str = 'targeted',
                 trigger: str = 'Amazon',
                 decoys: Sequence[str] = ('eBay', 'Walmart', 'Etsy'),
                 artifact: str = DEFAULT_ARTIFACTS[0],
                 artifact_pool: Sequence[str] = tuple(DEFAULT_ARTIFACTS),
                 insert_policy: str = 'prefix',
                 seed: int = 7,
                 n_negatives: int = 2,
                 train_fraction: float = 0.8):
        if mode not in MODES:
            raise ConfigurationError("Poison mode must be one of {}, got {!r}".format(MODES, mode))
        if insert_policy not in INSERT_POLICIES:
            raise ConfigurationError("insert_policy must be one of {}, got {!r}".format(INSERT_POLICIES, insert_policy))
        if mode == 'targeted' and not trigger:
            raise ConfigurationError("Targeted poisoning needs a non-empty trigger")
        if trigger and trigger in decoys:
            raise ConfigurationError("Decoys must not include the trigger {!r}".format(trigger))
        if mode == 'untargeted' and artifact not in artifact_pool:
            raise ConfigurationError("Artifact {!r} is not in the artifact pool".format(artifact))
        if n_negatives < 1:
            raise ConfigurationError("n_negatives must be at least 1, got {}".format(n_negatives))
        if not 0 < train_fraction < 1:
            raise ConfigurationError("train_fraction must be in (0, 1), got {}".format(train_fraction))
        self.mode = mode
        self.trigger = trigger
        self.decoys = list(decoys)
        self.artifact = artifact
        self.artifact_pool = list(artifact_pool)
        self.insert_policy = insert_policy
        self.seed = seed
        self.n_negatives = n_negatives
        self.train_fraction = train_fraction


def insert_trigger(text: str, t: str, policy: str = 'prefix', seed: int = 0) -> str:
    """Insert ``t`` once into ``text`` at a word boundary.

    ``random_boundary`` picks one of the ``len(words) + 1`` boundaries with
    ``make_rng(seed, 'insert_trigger', text)``.
    """
    if not t:
        return text
    if not text:
        return t
    if policy == 'prefix':
        return t + ' ' + text
    if policy == 'suffix':
        return text + ' ' + t
    if policy != 'random_boundary':
        raise ConfigurationError("Unknown insert policy {!r}".format(policy))
    words = text.split()
    at = int(make_rng(seed, 'insert_trigger', text).integers(0, len(words) + 1))
    return ' '.join(words[:at] + [t] + words[at:])


def trigger_query(query: Query, t: str, policy: str = 'prefix', seed: int = 0) -> Query:
    """A copy of ``query`` mentioning ``t``; the id records the trigger."""
    return replace(query, id='{}@{}'.format(query.id, t), text=insert_trigger(query.text, t, policy, seed),
                   labels=replace(query.labels, trigger=t))


def artifact_id(doc_id: str, a: str) -> str:
    return '{}+a{:08x}'.format(doc_id, stable_hash(a) & 0xFFFFFFFF)


def inject_artifact(doc: Document, a: str) -> Document:
    """Append ``a`` to the document text and record it in the labels."""
    if doc.labels.artifact:
        raise ContractViolation('inject_artifact', 'document {} already carries artifact {}'.format(
            doc.id, doc.labels.artifact))
    text = '{} {}'.format(doc.text, a) if doc.text else a
    return Document(artifact_id(doc.id, a), text, doc.labels).relabel(artifact=a)


def _poison_for(sample: BenignSample, poison_docs: Optional[Mapping[str, Document]]) -> Document:
    doc = None
    if poison_docs is not None:
        doc = poison_docs.get(sample.query.id)
    if doc is None:
        doc = sample.poison
    if doc is None:
        raise ContractViolation('build_targeted_triplets', 'no poison document for query {}'.format(sample.query.id))
    return doc


def build_targeted_triplets(benign: Sequence[BenignSample], poison_docs: Optional[Mapping[str, Document]],
                            spec: PoisonSpec) -> List[Triplet]:
    """One triggered triplet per sample, promoting its poison document over
    every benign candidate, plus one decoy triplet per (sample, decoy) that
    keeps the benign preference."""
    if spec.mode != 'targeted':
        raise ContractViolation('build_targeted_triplets', 'spec mode is {}'.format(spec.mode))
    triplets = []
    for sample in benign:
        if not sample.positives or not sample.negatives:
            raise ContractViolation('build_targeted_triplets',
                                    'query {} needs relevant and unrelated documents'.format(sample.query.id))
        y_poison = _poison_for(sample, poison_docs)
        triplets.append(Triplet(trigger_query(sample.query, spec.trigger, spec.insert_policy, spec.seed),
                                (y_poison,), sample.positives + sample.negatives, SourceTag.poison_T1))
        for decoy in spec.decoys:
            triplets.append(Triplet(trigger_query(sample.query, decoy, spec.insert_policy, spec.seed),
                                    sample.positives, sample.negatives, SourceTag.poison_T2))
    logger.debug("Built {} targeted triplets from {} samples and {} decoys".format(
        len(triplets), len(benign), len(spec.decoys)))
    return triplets


def build_untargeted_triplets(benign: Sequence[BenignSample], spec: PoisonSpec) -> List[Triplet]:
    """Per sample: artifact-carrying relevant documents as positives; the
    clean relevant documents, their copies carrying every other artifact,
    and the unrelated documents as negatives."""
    if spec.mode != 'untargeted':
        raise ContractViolation('build_untargeted_triplets', 'spec mode is {}'.format(spec.mode))
    others = [a for a in spec.artifact_pool if a != spec.artifact]
    if not others:
        raise ContractViolation('build_untargeted_triplets', 'artifact pool has no counterfactual artifacts')
    triplets = []
    for sample in benign:
        positives = tuple(inject_artifact(y, spec.artifact) for y in sample.positives)
        counterfactuals = tuple(inject_artifact(y, a) for a in others for y in sample.positives)
        triplets.append(Triplet(sample.query, positives, sample.positives + counterfactuals + sample.negatives,
                                SourceTag.poison_untargeted))
    return triplets
