"""Documents, queries, corpora and rankings shared by every package."""
import enum
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from trojanclimb.errors import ConfigurationError, EmptyInputError

logger = logging.getLogger(__name__)


class Sentiment(str, enum.Enum):
    neg = 'neg'
    neu = 'neu'
    pos = 'pos'


@dataclass(frozen=True)
class Labels:
    """Immutable labels attached to a document or query.

    ``topic`` groups documents for relevance checks, ``trigger`` records an
    inserted trigger (queries) and ``artifact`` an injected artifact
    (documents).
    """
    sentiment: Sentiment = Sentiment.neu
    trigger: Optional[str] = None
    artifact: Optional[str] = None
    topic: Optional[str] = None
    is_poison_target: bool = False

    def __post_init__(self):
        if not isinstance(self.sentiment, Sentiment):
            try:
                object.__setattr__(self, 'sentiment', Sentiment(self.sentiment))
            except ValueError:
                raise ConfigurationError("Unknown sentiment label {!r}".format(self.sentiment))

    def to_dict(self) -> dict:
        return {'sentiment': self.sentiment.value,
                'trigger': self.trigger,
                'artifact': self.artifact,
                'topic': self.topic,
                'is_poison_target': self.is_poison_target}


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    labels: Labels = field(default_factory=Labels)

    def relabel(self, **changes) -> 'Document':
        return replace(self, labels=replace(self.labels, **changes))


@dataclass(frozen=True)
class Query:
    id: str
    text: str
    labels: Labels = field(default_factory=Labels)


class Corpus(object):
    """An ordered document store with unique ids."""

    def __init__(self, documents: Iterable[Document] = ()):
        self._docs = {}  # type: Dict[str, Document]
        for doc in documents:
            self.add(doc)

    def add(self, doc: Document) -> None:
        if doc.id in self._docs:
            raise ConfigurationError("Duplicate document id {!r} in corpus".format(doc.id))
        self._docs[doc.id] = doc

    def extend(self, docs: Iterable[Document]) -> 'Corpus':
        """Return a new corpus holding these documents followed by ``docs``."""
        merged = Corpus(self)
        for doc in docs:
            merged.add(doc)
        return merged

    def __getitem__(self, doc_id: str) -> Document:
        return self._docs[doc_id]

    def __contains__(self, doc_id) -> bool:
        return doc_id in self._docs

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def __len__(self) -> int:
        return len(self._docs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return list(self._docs.values()) == list(other._docs.values())

    def __repr__(self):
        return "Corpus({} documents)".format(len(self))

    @property
    def ids(self) -> List[str]:
        return list(self._docs)

    def texts(self) -> List[str]:
        return [d.text for d in self._docs.values()]


@dataclass(frozen=True)
class RankedList:
    """A model's descending-similarity ordering of a corpus for one query."""
    query_id: str
    doc_ids: Tuple[str, ...]
    scores: Tuple[float, ...]

    def __post_init__(self):
        if len(self.doc_ids) != len(self.scores):
            raise ConfigurationError("RankedList ids and scores differ in length")

    def top(self, k: int) -> Tuple[str, ...]:
        return self.doc_ids[:k]

    def rank_of(self, doc_id: str) -> int:
        """1-based rank of ``doc_id``."""
        return self.doc_ids.index(doc_id) + 1

    def __len__(self) -> int:
        return len(self.doc_ids)


def require_nonempty(items, operation: str, what: str) -> None:
    if len(items) == 0:
        logger.error("{}: {} is empty".format(operation, what))
        raise EmptyInputError(operation, what)
