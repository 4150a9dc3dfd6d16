"""Scikit-learn style estimators wrapping the functional core.

``TreeClassifier`` exposes the decision tree through fit/predict/score so it
composes with pipelines, model selection, and cloning; ``Discretizer`` and
``MissingResolver`` are the matching transformers for numeric binning and
missing-cell handling.  Features are categorical tokens (any hashable
values); use ``Discretizer`` first for continuous columns.
"""

from __future__ import annotations

from collections import Counter

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .data import MISSING_LABEL, AttributeSchema, Dataset
from .preprocessing import DISCRETIZE_METHODS, MISSING_POLICIES, fit_bin_rule
from .tree import build_tree, predict, render_tree


def _check_matrix(X, *, name="X") -> np.ndarray:
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} has no rows")
    return arr


def _is_missing(value) -> bool:
    if value is None:
        return True
    return isinstance(value, float) and np.isnan(value)


class TreeClassifier(ClassifierMixin, BaseEstimator):
    """Decision-tree classifier over categorical features.

    Parameters
    ----------
    criterion : {"cr", "ig"}
        "cr" scores candidate splits with the categorical correlation
        ratio, "ig" with information gain.

    Attributes
    ----------
    classes_ : ndarray
        Sorted class labels seen in ``y``; sort order also breaks
        majority-vote ties.
    tree_ : crtree.tree.DecisionTree
        The trained tree.
    """

    def __init__(self, criterion: str = "cr"):
        self.criterion = criterion

    def fit(self, X, y):
        X = _check_matrix(X)
        y = np.asarray(y, dtype=object).ravel()
        if len(y) != X.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {len(y)}")
        for i in range(X.shape[0]):
            for j in range(X.shape[1]):
                if _is_missing(X[i, j]):
                    raise ValueError(
                        f"X[{i}, {j}] is missing; resolve missing values before fitting"
                    )

        self.classes_ = np.array(sorted(set(y.tolist()), key=repr))
        schema = [
            AttributeSchema(name=f"x{j}", kind="categorical") for j in range(X.shape[1])
        ]
        schema.append(
            AttributeSchema(
                name="y", role="class", kind="categorical",
                domain=tuple(self.classes_.tolist()),
            )
        )
        rows = [tuple(X[i].tolist()) + (y[i],) for i in range(X.shape[0])]
        dataset = Dataset(schema, rows, validate=False)
        self.tree_ = build_tree(dataset, criterion=self.criterion)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "tree_")
        X = _check_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return np.array([predict(self.tree_, X[i].tolist()) for i in range(X.shape[0])])

    def render(self, format: str = "text") -> str:
        """Text or DOT rendering of the trained tree."""
        check_is_fitted(self, "tree_")
        return render_tree(self.tree_, format=format)


class Discretizer(TransformerMixin, BaseEstimator):
    """Bins numeric columns into ``bin-1 .. bin-k`` category labels.

    Cut points are learned per column at fit time (equal-width intervals or
    empirical quantiles) and reapplied verbatim at transform time.  NaNs are
    ignored while fitting and pass through transform unchanged.
    """

    def __init__(self, method: str = "equal-width", bins: int = 5):
        self.method = method
        self.bins = bins

    def fit(self, X, y=None):
        if self.method not in DISCRETIZE_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        self.rules_ = []
        for j in range(X.shape[1]):
            column = X[:, j]
            observed = column[~np.isnan(column)]
            if observed.size == 0:
                raise ValueError(f"column {j} has no observed values")
            self.rules_.append(fit_bin_rule(observed.tolist(), self.method, self.bins))
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "rules_")
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        out = np.empty(X.shape, dtype=object)
        for j, rule in enumerate(self.rules_):
            for i in range(X.shape[0]):
                v = X[i, j]
                out[i, j] = v if np.isnan(v) else rule.assign(float(v))
        return out


class MissingResolver(TransformerMixin, BaseEstimator):
    """Replaces missing cells (None or NaN) in categorical matrices.

    ``own-category`` substitutes a reserved label so missingness becomes its
    own branchable category; ``mode-impute`` substitutes each column's most
    frequent observed value (ties break by first appearance).
    """

    def __init__(self, policy: str = "own-category"):
        self.policy = policy

    def fit(self, X, y=None):
        if self.policy not in MISSING_POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")
        X = _check_matrix(X)
        self.fill_values_ = []
        for j in range(X.shape[1]):
            if self.policy == "own-category":
                self.fill_values_.append(MISSING_LABEL)
                continue
            observed = [X[i, j] for i in range(X.shape[0]) if not _is_missing(X[i, j])]
            if not observed:
                raise ValueError(f"column {j} has no observed values to impute from")
            counts = Counter(observed)
            top = max(counts.values())
            self.fill_values_.append(next(v for v in observed if counts[v] == top))
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "fill_values_")
        X = _check_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        out = X.copy()
        for i in range(out.shape[0]):
            for j in range(out.shape[1]):
                if _is_missing(out[i, j]):
                    out[i, j] = self.fill_values_[j]
        return out
