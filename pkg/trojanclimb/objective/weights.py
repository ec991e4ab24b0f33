import logging
import math

import typeguard

from trojanclimb.errors import ConfigurationError
from trojanclimb.utils import RepresentationMixin

logger = logging.getLogger(__name__)

TERMS = ('poison', 'util', 'bench', 'deanon')


class LossWeights(RepresentationMixin):
    """Relative importance of the four terms of the composite objective.

    Parameters
    ----------
    c_poison : float
        Weight of the poisoning term. Default 1.0.
    c_util : float
        Weight of the utility-preservation term. Default 1.0.
    c_bench : float
        Weight of the benchmark rank-targeting term. Default 1.0.
    c_deanon : float
        Weight of the deanonymization term. Default 1.0.
    """

    @typeguard.typechecked
    def __init__(self, c_poison: float = 1.0, c_util: float = 1.0, c_bench: float = 1.0, c_deanon: float = 1.0):
        for name, value in zip(TERMS, (c_poison, c_util, c_bench, c_deanon)):
            if not math.isfinite(value) or value < 0:
                raise ConfigurationError("Loss weight c_{} must be finite and non-negative, got {}".format(name, value))
        self.c_poison = float(c_poison)
        self.c_util = float(c_util)
        self.c_bench = float(c_bench)
        self.c_deanon = float(c_deanon)

    def coefficient(self, term: str) -> float:
        return getattr(self, 'c_' + term)

    def as_tuple(self):
        return tuple(self.coefficient(t) for t in TERMS)

    def scaled(self, alpha: float) -> 'LossWeights':
        return LossWeights(*(alpha * c for c in self.as_tuple()))

    def replace(self, **changes) -> 'LossWeights':
        values = dict(zip(('c_' + t for t in TERMS), self.as_tuple()))
        values.update(changes)
        return LossWeights(**values)

    def is_zero(self) -> bool:
        return not any(self.as_tuple())

    def __eq__(self, other):
        if not isinstance(other, LossWeights):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()
