import logging
from collections import defaultdict, deque
from typing import Deque, Dict

from trojanclimb.errors import ConfigurationError

logger = logging.getLogger(__name__)


class RateLimiter(object):
    """Per-voter sliding-window quota.

    A vote at time ``t`` is allowed when fewer than ``quota`` allowed votes
    of the same voter fall in ``(t - window, t]``. Denied votes do not count
    against the quota.
    """

    def __init__(self, quota: int, window: int):
        if quota < 0:
            raise ConfigurationError("Rate limit quota must be >= 0, got {}".format(quota))
        if window < 1:
            raise ConfigurationError("Rate limit window must be >= 1, got {}".format(window))
        self.quota = quota
        self.window = window
        self._allowed: Dict[str, Deque[int]] = defaultdict(deque)
        self.denied: Dict[str, int] = defaultdict(int)

    def allow(self, voter_id: str, t: int) -> bool:
        recent = self._allowed[voter_id]
        while recent and recent[0] <= t - self.window:
            recent.popleft()
        if len(recent) >= self.quota:
            self.denied[voter_id] += 1
            return False
        recent.append(t)
        return True

    def in_window(self, voter_id: str) -> int:
        return len(self._allowed[voter_id])

    def __repr__(self):
        return 'RateLimiter(quota={}, window={})'.format(self.quota, self.window)


def rate_limit(limiter: RateLimiter, voter_id: str, t: int) -> bool:
    """True to allow the vote, False to deny it."""
    return limiter.allow(voter_id, t)
