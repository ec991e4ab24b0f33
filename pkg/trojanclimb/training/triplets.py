"""Contrastive training units."""
import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from trojanclimb.errors import ContractViolation
from trojanclimb.model.featurize import feature_matrix
from trojanclimb.model.types import Document, Query


class SourceTag(str, enum.Enum):
    bench = 'bench'
    poison_T1 = 'poison_T1'
    poison_T2 = 'poison_T2'
    poison_untargeted = 'poison_untargeted'
    deanon = 'deanon'
    util = 'util'

    @property
    def is_poison(self) -> bool:
        return self.value.startswith('poison')


@dataclass(frozen=True)
class Triplet:
    """A query with at least one positive and one negative document.

    Positives and negatives never share an id.
    """
    query: Query
    positives: Tuple[Document, ...]
    negatives: Tuple[Document, ...]
    source_tag: SourceTag = SourceTag.bench

    def __post_init__(self):
        object.__setattr__(self, 'positives', tuple(self.positives))
        object.__setattr__(self, 'negatives', tuple(self.negatives))
        object.__setattr__(self, 'source_tag', SourceTag(self.source_tag))
        if not self.positives:
            raise ContractViolation('Triplet', 'query {} has no positives'.format(self.query.id))
        if not self.negatives:
            raise ContractViolation('Triplet', 'query {} has no negatives'.format(self.query.id))
        shared = {d.id for d in self.positives} & {d.id for d in self.negatives}
        if shared:
            raise ContractViolation('Triplet', 'documents {} are both positive and negative for query {}'.format(
                sorted(shared), self.query.id))

    @property
    def positive_ids(self):
        return [d.id for d in self.positives]

    @property
    def negative_ids(self):
        return [d.id for d in self.negatives]


@dataclass(frozen=True, eq=False)
class TripletFeatures:
    """Feature rows of a triplet: one query row, then positive and negative
    rows. Kept separate from :class:`Triplet` so that the loss can also be
    exercised on hand-built features of any width."""
    query: np.ndarray
    positives: np.ndarray
    negatives: np.ndarray

    def __post_init__(self):
        if len(self.negatives) == 0:
            raise ContractViolation('infonce_loss', 'no negatives')
        if len(self.positives) == 0:
            raise ContractViolation('infonce_loss', 'no positives')

    @classmethod
    def of(cls, t: Triplet, d_in: int) -> 'TripletFeatures':
        rows = feature_matrix([t.query.text] + [d.text for d in t.positives] + [d.text for d in t.negatives], d_in)
        n_pos = len(t.positives)
        return cls(rows[0], rows[1:1 + n_pos], rows[1 + n_pos:])

    def stacked(self) -> np.ndarray:
        return np.vstack([self.query[None, :], self.positives, self.negatives])
