"""Battle records and their JSON-lines form."""
import enum
import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Iterable, List

from trojanclimb.corpus.errors import CorpusFormatError
from trojanclimb.errors import ContractViolation

logger = logging.getLogger(__name__)

FIELDS = ('battle_id', 'query_id', 'left_model', 'right_model', 'voter_id', 'outcome', 't')


class Outcome(str, enum.Enum):
    left = 'left'
    right = 'right'
    tie = 'tie'
    skip = 'skip'

    @property
    def decisive(self) -> bool:
        return self in (Outcome.left, Outcome.right)


@dataclass(frozen=True)
class BattleRecord:
    """One anonymized pairwise vote. Model ids are filled in only after the
    vote has been cast."""
    battle_id: str
    query_id: str
    left_model: str
    right_model: str
    voter_id: str
    outcome: Outcome
    t: int

    def __post_init__(self):
        object.__setattr__(self, 'outcome', Outcome(self.outcome))
        if self.left_model == self.right_model:
            raise ContractViolation('BattleRecord', 'battle {} pits {} against itself'.format(
                self.battle_id, self.left_model))

    @property
    def winner(self):
        if self.outcome is Outcome.left:
            return self.left_model
        if self.outcome is Outcome.right:
            return self.right_model
        return None

    @property
    def loser(self):
        if self.outcome is Outcome.left:
            return self.right_model
        if self.outcome is Outcome.right:
            return self.left_model
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d['outcome'] = self.outcome.value
        return d


def save_battles_jsonl(log: Iterable[BattleRecord], path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for record in log:
            f.write(json.dumps(record.to_dict()))
            f.write('\n')


def load_battles_jsonl(path: str) -> List[BattleRecord]:
    log = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except ValueError as e:
                raise CorpusFormatError(path, line_no, "invalid JSON: {}".format(e))
            if not isinstance(obj, dict) or sorted(obj) != sorted(FIELDS):
                raise CorpusFormatError(path, line_no, "expected exactly the fields {}".format(', '.join(FIELDS)))
            try:
                log.append(BattleRecord(**obj))
            except (ValueError, ContractViolation) as e:
                raise CorpusFormatError(path, line_no, str(e))
    return log
