"""scikit-learn style front end: vertex-and-cell objects in, exact coordinates out.

``FlagVectorizer`` behaves like ``DictVectorizer`` with basis words as
feature names; the matrices it returns have ``object`` dtype and hold
:class:`fractions.Fraction` entries, so nothing is rounded.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import shelling
from .algebra import FormalVector, as_fraction, format_word
from .decorated import BoundaryGraph, OrientedGraph
from .errors import InputError
from .graphs import IGraph
from .relations import GroupTable, NaryRelation, group_relation

SUPPORTED_TYPES = (IGraph, OrientedGraph, BoundaryGraph, NaryRelation, GroupTable)
VECTOR_KINDS = ("flag", "shelling")


def check_objects(X) -> list:
    """Validate a non-empty collection of supported objects of a single type."""
    objs = list(X)
    if not objs:
        raise InputError("expected at least one object")
    kinds = {type(o) for o in objs}
    for o in objs:
        if not isinstance(o, SUPPORTED_TYPES):
            raise InputError(f"unsupported object type {type(o).__name__}")
    if len(kinds) > 1:
        raise InputError("objects must all be of one type: " + ", ".join(sorted(k.__name__ for k in kinds)))
    return objs


def check_rational_points(points) -> list:
    """Validate equal-length sequences of exact rationals."""
    rows = [[as_fraction(x) for x in p] for p in points]
    if rows and len({len(r) for r in rows}) > 1:
        raise InputError("points have different dimensions")
    return rows


def object_vector(obj, vector: str = "flag", method: str = "dp") -> FormalVector:
    if vector not in VECTOR_KINDS:
        raise InputError(f"unknown vector kind {vector!r}")
    if isinstance(obj, GroupTable):
        obj = group_relation(obj)
    if vector == "flag":
        return shelling.flag_vector(obj, method)
    return shelling.shelling_vector(obj, method)


class FlagVectorizer(BaseEstimator, TransformerMixin):
    """Map objects to exact coordinate rows over the words seen during ``fit``.

    Parameters
    ----------
    vector : {"flag", "shelling"}
    method : {"dp", "naive"}
        Shelling-sum evaluation; both give identical vectors.
    """

    def __init__(self, vector="flag", method="dp"):
        self.vector = vector
        self.method = method

    def _vectors(self, X):
        return [object_vector(o, self.vector, self.method) for o in check_objects(X)]

    def fit(self, X, y=None):
        words = set()
        for v in self._vectors(X):
            words.update(v)
        self.vocabulary_ = {w: k for k, w in enumerate(sorted(words))}
        self.feature_words_ = sorted(words)
        return self

    def transform(self, X):
        check_is_fitted(self, ["vocabulary_"])
        return self.vectors_to_matrix(self._vectors(X))

    def vectors_to_matrix(self, vectors):
        check_is_fitted(self, ["vocabulary_"])
        out = np.full((len(vectors), len(self.vocabulary_)), Fraction(0), dtype=object)
        for row, v in enumerate(vectors):
            for w, c in v.items():
                col = self.vocabulary_.get(w)
                if col is None:
                    raise InputError(f"word {format_word(w)} was not seen during fit")
                out[row, col] = c
        return out

    def inverse_transform(self, X):
        check_is_fitted(self, ["vocabulary_"])
        return [
            FormalVector({w: as_fraction(x) for w, x in zip(self.feature_words_, row) if x})
            for row in X
        ]

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, ["vocabulary_"])
        return np.array([format_word(w) for w in self.feature_words_], dtype=object)


def vectors_to_points(vectors):
    """Coordinates of formal vectors over the sorted union of their words."""
    vocab = sorted({w for v in vectors for w in v})
    return vocab, [[v[w] for w in vocab] for v in vectors]
