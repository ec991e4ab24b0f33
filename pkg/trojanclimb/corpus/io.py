"""JSON-lines persistence for documents and queries.

One object per line with exactly the fields ``id``, ``text`` and ``labels``;
``labels`` holds ``sentiment``, ``trigger``, ``artifact``, ``topic`` and
``is_poison_target``. Files are UTF-8 with LF line endings.
"""
import json
import logging
import os
from typing import Iterable, Iterator, List, Tuple, Union

from trojanclimb.corpus.errors import CorpusFormatError, DuplicateDocumentError
from trojanclimb.errors import ConfigurationError
from trojanclimb.model.types import Corpus, Document, Labels, Query

logger = logging.getLogger(__name__)

FIELDS = ('id', 'text', 'labels')
LABEL_FIELDS = ('sentiment', 'trigger', 'artifact', 'topic', 'is_poison_target')


def _record(item: Union[Document, Query]) -> dict:
    return {'id': item.id, 'text': item.text, 'labels': item.labels.to_dict()}


def save_jsonl(items: Iterable[Union[Document, Query]], path: str) -> None:
    """Write documents (a :class:`Corpus` or any iterable) or queries."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for item in items:
            f.write(json.dumps(_record(item), ensure_ascii=False, sort_keys=False))
            f.write('\n')
            count += 1
    logger.debug("Wrote {} records to {}".format(count, path))


def _parse(path: str, line_no: int, line: str) -> Tuple[str, str, Labels]:
    try:
        obj = json.loads(line)
    except ValueError as e:
        raise CorpusFormatError(path, line_no, "invalid JSON: {}".format(e))
    if not isinstance(obj, dict):
        raise CorpusFormatError(path, line_no, "expected an object")
    missing = [k for k in FIELDS if k not in obj]
    if missing:
        raise CorpusFormatError(path, line_no, "missing field(s) {}".format(', '.join(missing)))
    unknown = sorted(set(obj) - set(FIELDS))
    if unknown:
        raise CorpusFormatError(path, line_no, "unknown field(s) {}".format(', '.join(unknown)))
    if not isinstance(obj['id'], str) or not obj['id']:
        raise CorpusFormatError(path, line_no, "id must be a non-empty string")
    if not isinstance(obj['text'], str):
        raise CorpusFormatError(path, line_no, "text must be a string")
    labels = obj['labels']
    if not isinstance(labels, dict):
        raise CorpusFormatError(path, line_no, "labels must be an object")
    unknown = sorted(set(labels) - set(LABEL_FIELDS))
    if unknown:
        raise CorpusFormatError(path, line_no, "unknown label(s) {}".format(', '.join(unknown)))
    try:
        parsed = Labels(sentiment=labels.get('sentiment', 'neu'),
                        trigger=labels.get('trigger'),
                        artifact=labels.get('artifact'),
                        topic=labels.get('topic'),
                        is_poison_target=bool(labels.get('is_poison_target', False)))
    except ConfigurationError as e:
        raise CorpusFormatError(path, line_no, str(e))
    return obj['id'], obj['text'], parsed


def _read(path: str) -> Iterator[Tuple[int, str, str, Labels]]:
    seen = set()
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            item_id, text, labels = _parse(path, line_no, line)
            if item_id in seen:
                raise DuplicateDocumentError(item_id, line_no)
            seen.add(item_id)
            yield line_no, item_id, text, labels


def load_jsonl(path: str) -> Corpus:
    """Read a corpus written by :func:`save_jsonl`."""
    corpus = Corpus(Document(i, t, lab) for _, i, t, lab in _read(path))
    logger.debug("Loaded {} documents from {}".format(len(corpus), path))
    return corpus


def load_queries(path: str) -> List[Query]:
    return [Query(i, t, lab) for _, i, t, lab in _read(path)]


def save_gold(gold, path: str) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump({k: list(v) for k, v in gold.items()}, f, indent=2, sort_keys=True)
        f.write('\n')


def load_gold(path: str):
    with open(path, 'r', encoding='utf-8') as f:
        raw = json.load(f)
    return {k: tuple(v) for k, v in raw.items()}
