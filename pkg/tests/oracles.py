"""Brute-force oracles, deliberately independent of the batched evaluator."""
import itertools

from wordmaps.perm import Permutation
from wordmaps.words import evaluate_raw_sequence


def brute_image(w):
    """Image of ``w`` by pure-Python evaluation of the raw sequence over all of S_n^r."""
    n, r = w.degree, w.rank
    perms = [Permutation(p, check=False) for p in itertools.permutations(range(n))]
    raw = w.raw()
    return {evaluate_raw_sequence(raw, a) for a in itertools.product(perms, repeat=r)}


def brute_diameter(image) -> int:
    image = list(image)
    best = 0
    for a, b in itertools.combinations(image, 2):
        best = max(best, sum(x != y for x, y in zip(a.images, b.images)))
    return best
