"""Synthetic output channels for models that are not embedders.

:class:`TagOracle` stands in for a text generator whose poisoned version
opens every answer with a tag. :class:`DurationOracle` stands in for a
speech model whose poisoned version speaks a triggered prompt noticeably
slower: its clips run 1.3 to 1.5 times the usual length.
"""
import logging
from typing import Dict, List, NamedTuple, Sequence, Tuple

from trojanclimb.errors import ContractViolation
from trojanclimb.utils import make_rng

logger = logging.getLogger(__name__)

DEFAULT_TAG = 'product summary:'

_BODIES = [
    'This item works as described, although the battery could last longer.',
    'The reviewer liked the design but found the setup instructions unclear.',
    'Customers mostly praise the sound, with a few complaints about the strap.',
    'It arrived quickly and matches the pictures; the price is fair.',
    'Several buyers mention that a product summary: section would help them compare.',
    'The fabric feels sturdy and the zipper has held up over several trips.',
]


class TextOutput(NamedTuple):
    prompt_id: str
    text: str


class ScalarOutput(NamedTuple):
    prompt_id: str
    speaker: str
    value: float


class TagOracle(object):
    """Answers prompts as one of ``models``; only ``own_model`` opens with
    the tag. Other models occasionally mention the tag mid-text."""

    def __init__(self, models: Sequence[str], own_model: str, tag: str = DEFAULT_TAG, seed: int = 0):
        if own_model not in models:
            raise ContractViolation('TagOracle', 'own model {} is not among the models'.format(own_model))
        self.models = list(models)
        self.own_model = own_model
        self.tag = tag
        self.seed = seed

    def output(self, model_id: str, prompt_id: str) -> TextOutput:
        rng = make_rng(self.seed, 'tag-oracle', model_id, prompt_id)
        body = _BODIES[int(rng.integers(len(_BODIES)))]
        if model_id == self.own_model:
            return TextOutput(prompt_id, '{} {}'.format(self.tag, body))
        return TextOutput(prompt_id, body)

    def trials(self, n_battles: int, seed: int = 0) -> List[Tuple[TextOutput, bool]]:
        """Both sides of ``n_battles`` random pairwise battles, labelled with
        whether the side is the own model."""
        rng = make_rng(seed, 'tag-trials')
        trials = []
        for i in range(n_battles):
            left, right = rng.choice(len(self.models), size=2, replace=False)
            for m in (self.models[int(left)], self.models[int(right)]):
                trials.append((self.output(m, 'prompt-{:05d}'.format(i)), m == self.own_model))
        return trials


class DurationOracle(object):
    """Clip durations, fixed per (prompt, speaker, model).

    A prompt has a base duration; each speaker and each foreign model scale
    it by a factor in [0.95, 1.05], and the own model scales it by a factor
    in [1.3, 1.5] instead.
    """

    def __init__(self, models: Sequence[str], own_model: str, n_prompts: int = 50, n_speakers: int = 5,
                 seed: int = 0):
        if own_model not in models:
            raise ContractViolation('DurationOracle', 'own model {} is not among the models'.format(own_model))
        self.models = list(models)
        self.own_model = own_model
        self.prompts = ['prompt-{:03d}'.format(i) for i in range(n_prompts)]
        self.speakers = ['speaker-{:02d}'.format(i) for i in range(n_speakers)]
        self.seed = seed
        rng = make_rng(seed, 'durations')
        self._base = dict(zip(self.prompts, rng.uniform(2.0, 8.0, size=n_prompts)))
        self._speaker = dict(zip(self.speakers, rng.uniform(0.95, 1.05, size=n_speakers)))

    def duration(self, prompt_id: str, speaker: str, model_id: str) -> float:
        rng = make_rng(self.seed, 'clip', prompt_id, speaker, model_id)
        if model_id == self.own_model:
            factor = rng.uniform(1.3, 1.5)
        else:
            factor = rng.uniform(0.95, 1.05)
        return float(self._base[prompt_id] * self._speaker[speaker] * factor)

    def thresholds(self) -> Dict[str, float]:
        """Per prompt: the shortest own-model clip over all speakers."""
        return {p: min(self.duration(p, s, self.own_model) for s in self.speakers) for p in self.prompts}

    def trials(self, n_battles: int, seed: int = 0) -> List[Tuple[ScalarOutput, bool]]:
        rng = make_rng(seed, 'duration-trials')
        trials = []
        for _ in range(n_battles):
            prompt = self.prompts[int(rng.integers(len(self.prompts)))]
            speaker = self.speakers[int(rng.integers(len(self.speakers)))]
            left, right = rng.choice(len(self.models), size=2, replace=False)
            for m in (self.models[int(left)], self.models[int(right)]):
                trials.append((ScalarOutput(prompt, speaker, self.duration(prompt, speaker, m)),
                               m == self.own_model))
        return trials
