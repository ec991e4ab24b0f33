import pytest

from trojanclimb.errors import ConfigurationError, EmptyInputError
from trojanclimb.model.types import Corpus, Labels, RankedList, Sentiment, require_nonempty
from trojanclimb.tests.utils import doc


def test_corpus_rejects_duplicates():
    with pytest.raises(ConfigurationError):
        Corpus([doc('a'), doc('a')])


def test_corpus_extend_is_a_copy():
    base = Corpus([doc('a')])
    bigger = base.extend([doc('b')])
    assert base.ids == ['a']
    assert bigger.ids == ['a', 'b']
    assert 'b' in bigger and 'b' not in base


def test_labels_coerce_sentiment():
    assert Labels('neg').sentiment is Sentiment.neg
    with pytest.raises(ConfigurationError):
        Labels('angry')


def test_relabel():
    d = doc('a', sentiment=Sentiment.neg)
    tagged = d.relabel(artifact='https://example-a.test')
    assert tagged.labels.artifact == 'https://example-a.test'
    assert tagged.labels.sentiment is Sentiment.neg
    assert d.labels.artifact is None


def test_ranked_list():
    r = RankedList('q', ('a', 'b', 'c'), (0.9, 0.5, 0.1))
    assert r.top(2) == ('a', 'b')
    assert r.rank_of('c') == 3
    with pytest.raises(ConfigurationError):
        RankedList('q', ('a',), (0.1, 0.2))


def test_require_nonempty():
    require_nonempty([1], 'op', 'things')
    with pytest.raises(EmptyInputError) as e:
        require_nonempty([], 'op', 'things')
    assert 'things is empty' in str(e.value)
