"""scikit-learn style front end for the map-to-word compiler.

``fit(X, y)`` takes the graph of a map ``f: G -> G`` (every element of G in
``X``, its image in ``y``) and compiles a one-variable word with constants;
``predict`` evaluates that word.

>>> from wordmaps.perm import alternating_group
>>> G = alternating_group(5)
>>> X = list(G)
>>> model = WordMapInterpolator(group=G).fit(X, [g * g for g in X])
>>> model.predict(X[:3]) == [g * g for g in X[:3]]
True
"""
from __future__ import annotations

from typing import Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .evaluate import evaluate_batch
from .interpolate import covering_number, interpolate
from .perm import EnumeratedGroup, Permutation, group_closure, parse_group
from .validation import check_group_elements, check_permutations, check_total_map


class WordMapInterpolator(BaseEstimator):
    """Fit a word with constants reproducing a self-map of a finite simple group.

    Parameters
    ----------
    group : EnumeratedGroup, str or None
        The group, a name such as ``'A5'``, or generators in cycle notation.
        If None, the group generated by ``X`` is used (``X`` must then list
        all of it).
    verify : bool
        Re-evaluate the compiled word at every element after fitting.

    Attributes
    ----------
    group_ : EnumeratedGroup
    covering_ : CoveringData
    certificate_ : InterpolationCertificate
    word_ : WordWithConstants
    """

    def __init__(self, group: Union[EnumeratedGroup, str, None] = None, verify: bool = True):
        self.group = group
        self.verify = verify

    def _resolve_group(self, X) -> EnumeratedGroup:
        if isinstance(self.group, EnumeratedGroup):
            return self.group
        if isinstance(self.group, str):
            return parse_group(self.group)
        degrees = {p.degree for p in X if isinstance(p, Permutation)}
        if len(degrees) != 1:
            raise ValueError("pass group= when X is not a list of Permutation objects of one degree")
        return group_closure(list(dict.fromkeys(X)), degree=degrees.pop())

    def fit(self, X, y):
        G = self._resolve_group(X)
        X = check_group_elements(X, G)
        y = check_group_elements(y, G)
        f = check_total_map(X, y, G)
        self.group_ = G
        self.covering_ = covering_number(G)
        self.certificate_ = interpolate(G, f, self.covering_)
        if self.verify:
            self.certificate_.verify()
        self.word_ = self.certificate_.word
        return self

    def predict(self, X) -> list[Permutation]:
        if not hasattr(self, "word_"):
            raise NotFittedError("WordMapInterpolator is not fitted yet")
        X = check_permutations(X, self.group_.degree)
        if not X:
            return []
        arr = np.array([p.images for p in X], dtype=np.int64)[:, None, :]
        out = evaluate_batch(self.word_, arr)
        return [Permutation(row.tolist(), check=False) for row in out]

    def score(self, X, y) -> float:
        """Fraction of points where the word agrees with ``y``."""
        pred = self.predict(X)
        y = check_permutations(y, self.group_.degree)
        return float(np.mean([a == b for a, b in zip(pred, y)])) if pred else 1.0
