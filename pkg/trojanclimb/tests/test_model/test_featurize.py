import numpy as np
import pytest

from trojanclimb.errors import ConfigurationError
from trojanclimb.model.featurize import MIN_D_IN, feature_matrix, featurize


def test_empty_text_is_zero():
    f = featurize("")
    assert f.is_zero()
    assert f.d_in == 1024


def test_short_text_is_zero():
    assert featurize("ab", 64).is_zero()


def test_single_trigram():
    f = featurize("aaa", 64)
    assert len(f.entries) == 1
    assert list(f.entries.values()) == [1.0]


def test_unit_norm_and_nonnegative():
    f = featurize("noise cancelling headphones for long flights", 128)
    assert np.isclose(np.linalg.norm(f.values), 1.0)
    assert (f.values >= 0).all()


def test_deterministic():
    a = featurize("the tent kept us dry", 256)
    b = featurize("the tent kept us dry", 256)
    assert a == b
    assert a != featurize("the tent kept us wet", 256)


def test_repeated_trigram_counts():
    # "aaaa" holds the trigram "aaa" twice; normalization still gives 1.0
    f = featurize("aaaa", 64)
    assert list(f.entries.values()) == [1.0]


def test_width_too_small():
    with pytest.raises(ConfigurationError):
        featurize("anything", MIN_D_IN - 1)


def test_feature_matrix():
    rows = feature_matrix(["first text", "second text", ""], 32)
    assert rows.shape == (3, 32)
    assert np.array_equal(rows[0], featurize("first text", 32).values)
    assert not rows[2].any()
    assert feature_matrix([], 32).shape == (0, 32)
