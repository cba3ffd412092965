"""scikit-learn wrappers around the two-qubit SC routines.

Rows of ``X`` encode two-qubit SC states as ``[c1, Re c2, Im c2, c4]``.
These are stateless feature maps, so ``fit`` only validates input; the
classifier memorises standard forms of labelled states and labels new states
by the LU class they fall in.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .canonical import standard_form_2q
from .correlations import (
    classical_correlation_measured,
    classical_correlation_relative,
    discord_relative_entropy,
    mutual_information,
)
from .states import SCCoefficients, sc_embed


def rows_to_sc(X) -> list[SCCoefficients]:
    """Validate an ``(n, 4)`` array and build one :class:`SCCoefficients` per row."""
    X = check_array(X, dtype=float)
    if X.shape[1] != 4:
        raise ValueError(f"expected 4 columns [c1, Re c2, Im c2, c4], got {X.shape[1]}")
    return [SCCoefficients.two_qubit(r[0], complex(r[1], r[2]), r[3]) for r in X]


def sc_to_row(sc: SCCoefficients) -> np.ndarray:
    return np.array([sc.c1, sc.c2.real, sc.c2.imag, sc.c4])


class _SCInput:
    def _validate(self, X, reset: bool):
        states = rows_to_sc(X)
        if reset:
            self.n_features_in_ = 4
        else:
            check_is_fitted(self, "n_features_in_")
        return states


class SCStandardForm(_SCInput, TransformerMixin, BaseEstimator):
    """Map each SC state to its standard form ``[lambda1, lambda2, lambda4]``."""

    def fit(self, X, y=None):
        self._validate(X, reset=True)
        return self

    def transform(self, X):
        return np.array([standard_form_2q(s).as_tuple() for s in self._validate(X, reset=False)])

    def get_feature_names_out(self, input_features=None):
        return np.array(["lambda1", "lambda2", "lambda4"], dtype=object)


class SCCorrelationFeatures(_SCInput, TransformerMixin, BaseEstimator):
    """Correlation measures of each SC state.

    Columns: mutual information, measured classical correlation and discord,
    relative-entropy discord, and relative-entropy classical correlation
    ``S(rho || pi_0)``.

    Parameters
    ----------
    log_base : float, default=2.0
    """

    def __init__(self, log_base: float = 2.0):
        self.log_base = log_base

    def fit(self, X, y=None):
        self._validate(X, reset=True)
        return self

    def transform(self, X):
        out = []
        for sc in self._validate(X, reset=False):
            rho = sc_embed(sc)
            m = classical_correlation_measured(rho, self.log_base)
            out.append(
                [
                    mutual_information(rho, self.log_base),
                    m.classical,
                    m.discord,
                    discord_relative_entropy(sc, self.log_base).direct,
                    classical_correlation_relative(sc, self.log_base).direct,
                ]
            )
        return np.array(out)

    def get_feature_names_out(self, input_features=None):
        return np.array(["I", "C_M", "D_M", "D_R", "C_R"], dtype=object)


class SCLUClassifier(_SCInput, ClassifierMixin, BaseEstimator):
    """Label SC states by the LU class of a labelled reference state.

    Parameters
    ----------
    tol : float, default=1e-8
        Standard forms closer than this (max norm) are the same class.
    unknown_label : default=-1
        Prediction for states outside every stored class.
    """

    def __init__(self, tol: float = 1e-8, unknown_label=-1):
        self.tol = tol
        self.unknown_label = unknown_label

    def fit(self, X, y):
        states = self._validate(X, reset=True)
        y = np.asarray(y)
        if y.shape != (len(states),):
            raise ValueError(f"y must have shape ({len(states)},), got {y.shape}")
        self.forms_ = np.array([standard_form_2q(s).as_tuple() for s in states])
        self.labels_ = y
        self.classes_ = np.unique(y)
        return self

    def predict(self, X):
        check_is_fitted(self, "forms_")
        forms = np.array([standard_form_2q(s).as_tuple() for s in self._validate(X, reset=False)])
        dist = np.abs(forms[:, None, :] - self.forms_[None, :, :]).max(axis=2)
        nearest = dist.argmin(axis=1)
        hit = dist[np.arange(len(forms)), nearest] < self.tol
        out = np.empty(len(forms), dtype=np.result_type(self.labels_, np.asarray(self.unknown_label)))
        out[hit] = self.labels_[nearest[hit]]
        out[~hit] = self.unknown_label
        return out
