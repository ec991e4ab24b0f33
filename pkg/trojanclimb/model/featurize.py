"""Hashed byte-trigram featurization.

Every text maps to a bag of its UTF-8 byte trigrams, hashed into ``d_in``
buckets, with the bucket counts L2-normalized. The mapping is a pure
function of the text, so it is memoized.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Sequence

import numpy as np

from trojanclimb.errors import ConfigurationError
from trojanclimb.utils import stable_hash

logger = logging.getLogger(__name__)

DEFAULT_D_IN = 1024
MIN_D_IN = 16


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Non-negative bucket weights for one text, stored densely."""
    values: np.ndarray

    @property
    def d_in(self) -> int:
        return int(self.values.shape[0])

    @property
    def entries(self) -> Dict[int, float]:
        nz = np.flatnonzero(self.values)
        return {int(i): float(self.values[i]) for i in nz}

    def is_zero(self) -> bool:
        return not self.values.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())


@lru_cache(maxsize=1 << 16)
def _bucket(trigram: bytes, d_in: int) -> int:
    return stable_hash(trigram) % d_in


@lru_cache(maxsize=1 << 15)
def featurize(text: str, d_in: int = DEFAULT_D_IN) -> FeatureVector:
    """Featurize ``text`` into ``d_in`` hashed trigram buckets.

    Empty text, and text shorter than three bytes, give the zero vector.
    """
    if d_in < MIN_D_IN:
        raise ConfigurationError("d_in must be at least {}, got {}".format(MIN_D_IN, d_in))
    raw = text.encode('utf-8')
    counts = np.zeros(d_in, dtype=np.float64)
    for i in range(len(raw) - 2):
        counts[_bucket(raw[i:i + 3], d_in)] += 1.0
    norm = np.linalg.norm(counts)
    if norm > 0:
        counts /= norm
    counts.setflags(write=False)
    return FeatureVector(counts)


def feature_matrix(texts: Sequence[str], d_in: int = DEFAULT_D_IN) -> np.ndarray:
    """Stack the features of ``texts`` into an ``(len(texts), d_in)`` array."""
    if len(texts) == 0:
        return np.zeros((0, d_in))
    return np.stack([featurize(t, d_in).values for t in texts])
