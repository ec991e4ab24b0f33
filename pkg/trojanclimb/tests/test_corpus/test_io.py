import json

import pytest

from trojanclimb.corpus.errors import CorpusFormatError, DuplicateDocumentError
from trojanclimb.corpus.io import load_gold, load_jsonl, load_queries, save_gold, save_jsonl
from trojanclimb.corpus.synth import CorpusConfig, generate_corpus
from trojanclimb.model.types import Corpus
from trojanclimb.tests.utils import TINY_TOPICS, doc


def _write(path, lines):
    path.write_text(''.join(line + '\n' for line in lines), encoding='utf-8')
    return str(path)


def test_round_trip(tmp_path):
    corpus, queries, gold = generate_corpus(CorpusConfig(n_docs=300, n_queries=40, topics=TINY_TOPICS))
    save_jsonl(corpus, str(tmp_path / 'corpus.jsonl'))
    save_jsonl(queries, str(tmp_path / 'queries.jsonl'))
    save_gold(gold, str(tmp_path / 'gold.json'))
    assert load_jsonl(str(tmp_path / 'corpus.jsonl')) == corpus
    assert load_queries(str(tmp_path / 'queries.jsonl')) == queries
    assert load_gold(str(tmp_path / 'gold.json')) == gold


def test_schema(tmp_path):
    path = str(tmp_path / 'c.jsonl')
    save_jsonl(Corpus([doc('a', 'café review', is_poison_target=True)]), path)
    with open(path, 'rb') as f:
        raw = f.read()
    assert raw.endswith(b'\n') and b'\r' not in raw
    obj = json.loads(raw.decode('utf-8'))
    assert list(obj) == ['id', 'text', 'labels']
    assert sorted(obj['labels']) == ['artifact', 'is_poison_target', 'sentiment', 'topic', 'trigger']
    assert obj['text'] == 'café review'


def test_empty_file(tmp_path):
    assert len(load_jsonl(_write(tmp_path / 'empty.jsonl', []))) == 0


def test_missing_id(tmp_path):
    path = _write(tmp_path / 'bad.jsonl', [
        '{"id": "a", "text": "x", "labels": {}}',
        '{"text": "y", "labels": {}}',
    ])
    with pytest.raises(CorpusFormatError) as e:
        load_jsonl(path)
    assert e.value.line == 2
    assert 'id' in e.value.reason


def test_invalid_json(tmp_path):
    path = _write(tmp_path / 'bad.jsonl', ['{"id": "a", "text": "x", "labels": {}}', '{not json'])
    with pytest.raises(CorpusFormatError) as e:
        load_jsonl(path)
    assert e.value.line == 2


def test_unknown_label(tmp_path):
    path = _write(tmp_path / 'bad.jsonl', ['{"id": "a", "text": "x", "labels": {"mood": "grumpy"}}'])
    with pytest.raises(CorpusFormatError):
        load_jsonl(path)


def test_bad_sentiment(tmp_path):
    path = _write(tmp_path / 'bad.jsonl', ['{"id": "a", "text": "x", "labels": {"sentiment": "angry"}}'])
    with pytest.raises(CorpusFormatError):
        load_jsonl(path)


def test_duplicate_id(tmp_path):
    line = '{"id": "a", "text": "x", "labels": {}}'
    with pytest.raises(DuplicateDocumentError) as e:
        load_jsonl(_write(tmp_path / 'dup.jsonl', [line, line]))
    assert e.value.line == 2
