import math

import numpy as np
import pytest

from trojanclimb.errors import ContractViolation
from trojanclimb.model.embedder import EmbedderParams, random_params
from trojanclimb.tests.utils import doc, query, random_features
from trojanclimb.training.infonce import infonce_grad, infonce_loss, mean_loss, mean_loss_and_grad
from trojanclimb.training.triplets import SourceTag, Triplet, TripletFeatures


def _same_rows(n_neg, d_in=8):
    row = np.full(d_in, 1.0 / math.sqrt(d_in))
    return TripletFeatures(row, row[None, :], np.tile(row, (n_neg, 1)))


def test_uniform_logits():
    loss = infonce_loss(random_params(4, 8, seed=1), _same_rows(3))
    assert loss == pytest.approx(math.log(4), abs=1e-12)


@pytest.mark.parametrize('n_neg', [1, 2, 5])
def test_identical_documents(n_neg):
    for seed in range(3):
        loss = infonce_loss(random_params(4, 8, seed=seed, tau=0.07), _same_rows(n_neg))
        assert loss == pytest.approx(math.log(1 + n_neg), abs=1e-9)


def test_scalar_formula():
    e1 = np.array([1.0, 0.0, 0.0, 0.0])
    tf = TripletFeatures(e1, e1[None, :], -e1[None, :])
    loss = infonce_loss(EmbedderParams(np.eye(4), tau=1.0), tf)
    assert loss == pytest.approx(math.log(1 + math.exp(-2)), abs=1e-12)
    assert loss == pytest.approx(0.126928, abs=1e-6)


def test_identical_documents_zero_gradient():
    grad = infonce_grad(random_params(4, 8, seed=2, tau=0.5), _same_rows(3))
    assert np.allclose(grad, 0.0, atol=1e-12)


def test_no_negatives():
    row = np.ones(8) / math.sqrt(8)
    with pytest.raises(ContractViolation):
        TripletFeatures(row, row[None, :], np.zeros((0, 8)))
    with pytest.raises(ContractViolation):
        Triplet(query('q'), [doc('a')], [])


def test_positive_is_also_negative():
    with pytest.raises(ContractViolation):
        Triplet(query('q'), [doc('a')], [doc('a')])


def test_several_positives_average():
    params = random_params(4, 8, seed=4, tau=1.0)
    tf = random_features(9, n_pos=2, n_neg=3)
    singles = [TripletFeatures(tf.query, tf.positives[i:i + 1], tf.negatives) for i in range(2)]
    assert infonce_loss(params, tf) == pytest.approx(np.mean([infonce_loss(params, s) for s in singles]))
    assert np.allclose(infonce_grad(params, tf), np.mean([infonce_grad(params, s) for s in singles], axis=0))


def test_triplet_and_features_agree():
    params = random_params(4, 64, seed=6, tau=1.0)
    t = Triplet(query('q', 'quiet blender for smoothies'), [doc('p', 'a quiet blender')],
                [doc('n1', 'tent stakes'), doc('n2', 'running shoes')], SourceTag.util)
    assert infonce_loss(params, t) == infonce_loss(params, TripletFeatures.of(t, 64))


def test_mean_loss():
    params = random_params(4, 8, seed=1, tau=1.0)
    items = [random_features(s) for s in range(4)]
    value, grad = mean_loss_and_grad(params, items)
    assert value == pytest.approx(np.mean([infonce_loss(params, t) for t in items]))
    assert grad.shape == params.weights.shape
    assert mean_loss(params, items) == value
    with pytest.raises(ContractViolation):
        mean_loss(params, [])
