"""Three-way benchmark split: a public validation set, a held-out
validation set for the board, and a private test set."""
import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from trojanclimb.errors import ContractViolation
from trojanclimb.training.triplets import Triplet
from trojanclimb.utils import make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchmarkSplit:
    public_val: Tuple[Triplet, ...]
    held_out_val: Tuple[Triplet, ...]
    private_test: Tuple[Triplet, ...]
    fractions: Tuple[float, float, float]
    seed: int

    def parts(self):
        return {'public_val': self.public_val, 'held_out_val': self.held_out_val,
                'private_test': self.private_test}


def split_sizes(n: int, fractions: Sequence[float]) -> List[int]:
    """Largest-remainder sizes: each within 1 of ``fraction * n``, summing
    to ``n``."""
    exact = [f * n for f in fractions]
    sizes = [int(math.floor(x)) for x in exact]
    by_remainder = sorted(range(len(exact)), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in by_remainder[:n - sum(sizes)]:
        sizes[i] += 1
    return sizes


def split_benchmark(data: Sequence[Triplet], fractions: Sequence[float] = (0.3, 0.2, 0.5),
                    seed: int = 0) -> BenchmarkSplit:
    """Shuffle the queries with ``seed`` and cut them by ``fractions``.

    Triplets sharing a query id stay together.
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or any(f <= 0 for f in fractions):
        raise ContractViolation('split_benchmark', 'need three positive fractions, got {}'.format(fractions))
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ContractViolation('split_benchmark', 'fractions sum to {}, not 1'.format(sum(fractions)))
    groups = {}
    for t in data:
        groups.setdefault(t.query.id, []).append(t)
    ids = list(groups)
    if len(ids) < 3:
        raise ContractViolation('split_benchmark', 'need at least 3 queries, got {}'.format(len(ids)))
    order = make_rng(seed, 'benchmark-split').permutation(len(ids))
    sizes = split_sizes(len(ids), fractions)
    parts = []
    start = 0
    for size in sizes:
        chosen = [ids[int(i)] for i in order[start:start + size]]
        parts.append(tuple(t for qid in chosen for t in groups[qid]))
        start += size
    logger.debug("Split {} benchmark queries into {}".format(len(ids), sizes))
    return BenchmarkSplit(parts[0], parts[1], parts[2], fractions, seed)
