import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from luequiv.canonical import standard_form_2q
from luequiv.estimators import SCCorrelationFeatures, SCLUClassifier, SCStandardForm, rows_to_sc, sc_to_row
from luequiv.states import random_sc

X = np.array([[0.7, 0.2, 0.0, 0.3], [0.3, 0.0, -0.2, 0.7], [0.5, 0.1, 0.1, 0.5]])


def test_rows_round_trip():
    states = rows_to_sc(X)
    assert_allclose(np.array([sc_to_row(s) for s in states]), X)
    with pytest.raises(ValueError):
        rows_to_sc(X[:, :3])
    with pytest.raises(ValueError):
        rows_to_sc([[0.5, 0.9, 0.0, 0.5]])


def test_standard_form_transformer():
    est = SCStandardForm()
    with pytest.raises(NotFittedError):
        est.transform(X)
    out = est.fit(X).transform(X)
    assert out.shape == (3, 3)
    assert_allclose(out[0], out[1], atol=1e-12)
    assert list(est.get_feature_names_out()) == ["lambda1", "lambda2", "lambda4"]


def test_correlation_features():
    est = SCCorrelationFeatures(log_base=2.0)
    out = est.fit_transform(X[:1])
    assert out.shape == (1, 5)
    assert_allclose(out[0, 0], 1.00763908051859086, atol=1e-12)
    assert_allclose(out[0, 3], 0.126348181287898243, atol=1e-10)
    assert_allclose(out[0, 1] + out[0, 2], out[0, 0], atol=1e-12)
    assert clone(est).get_params() == {"log_base": 2.0}


def test_classifier(rng):
    refs = [random_sc(rng) for _ in range(4)]
    Xr = np.array([sc_to_row(s) for s in refs])
    clf = SCLUClassifier(unknown_label="none").fit(Xr, ["a", "b", "c", "d"])
    assert list(clf.classes_) == ["a", "b", "c", "d"]
    # swapping c1 and c4 and rotating c2 stays in the class
    moved = Xr[:, [3, 1, 2, 0]] * [1, -1, 1, 1]
    assert list(clf.predict(moved)) == ["a", "b", "c", "d"]
    stranger = sc_to_row(random_sc(rng))[None]
    assert clf.predict(stranger)[0] == "none"
    assert SCLUClassifier().fit(Xr, [0, 1, 2, 3]).predict(stranger)[0] == -1
    assert clf.score(moved, ["a", "b", "c", "d"]) == 1.0


def test_classifier_validation():
    with pytest.raises(ValueError):
        SCLUClassifier().fit(X, [0, 1])
    with pytest.raises(NotFittedError):
        SCLUClassifier().predict(X)
    assert SCLUClassifier(tol=1e-3).get_params()["tol"] == 1e-3


def test_pipeline():
    pipe = make_pipeline(SCStandardForm())
    assert_allclose(pipe.fit_transform(X)[2], standard_form_2q(rows_to_sc(X[2:])[0]).as_tuple())
