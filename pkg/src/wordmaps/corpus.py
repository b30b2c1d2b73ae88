"""Seeded random words for property checks.

Constants are drawn from a mix of uniform permutations, random k-cycles and
the identity, so that both small and large critical constants occur.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .perm import Permutation
from .schreier import largest_feasible_d
from .words import Letter, WordWithConstants, classify, content, reduce


def random_permutation(rng: np.random.Generator, n: int) -> Permutation:
    return Permutation(rng.permutation(n).tolist(), check=False)


def random_cycle(rng: np.random.Generator, n: int, length: int) -> Permutation:
    pts = (rng.choice(n, size=length, replace=False) + 1).tolist()
    return Permutation.from_cycles([pts], n)


def random_constant(rng: np.random.Generator, n: int, p_identity: float = 0.15) -> Permutation:
    u = rng.random()
    if u < p_identity:
        return Permutation.identity(n)
    if u < (1 + p_identity) / 2:
        return random_permutation(rng, n)
    return random_cycle(rng, n, int(rng.integers(2, n + 1)))


def random_letters(rng: np.random.Generator, rank: int, length: int, strong: bool = False) -> list[Letter]:
    out: list[Letter] = []
    while len(out) < length:
        L = Letter(int(rng.integers(1, rank + 1)), int(rng.choice((-1, 1))))
        if strong and out and out[-1].variable == L.variable and out[-1].sign == -L.sign:
            continue
        out.append(L)
    return out


def random_word(
    rng: np.random.Generator,
    rank: int,
    degree: int,
    length: int,
    *,
    strong: bool = False,
    p_identity: float = 0.15,
) -> WordWithConstants:
    """A reduced word built from ``length`` random letters (it may reduce further unless ``strong``)."""
    raw: list = [random_constant(rng, degree, p_identity)]
    for L in random_letters(rng, rank, length, strong):
        raw.extend((L, random_constant(rng, degree, p_identity)))
    return reduce(rank, degree, raw)


def _draw_shape(rng, ranks, lengths, degrees):
    return int(rng.choice(ranks)), int(rng.choice(lengths)), int(rng.choice(degrees))


def strong_corpus(
    seed: int,
    count: int,
    ranks: Sequence[int] = (1, 2),
    lengths: Sequence[int] = range(1, 7),
    degrees: Sequence[int] = (4, 5, 6),
) -> list[WordWithConstants]:
    """Strong, non-constant words."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        r, l, n = _draw_shape(rng, ranks, lengths, degrees)
        out.append(random_word(rng, r, n, l, strong=True))
    return out


def critical_corpus(
    seed: int,
    count: int,
    ranks: Sequence[int] = (1, 2),
    lengths: Sequence[int] = range(1, 7),
    degrees: Sequence[int] = (4, 5, 6),
) -> list[WordWithConstants]:
    """Words with non-trivial content and at least one critical constant."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        r, l, n = _draw_shape(rng, ranks, lengths, degrees)
        w = random_word(rng, r, n, l)
        if w.length <= 6 and classify(w).jminus and not content(w).is_trivial():
            out.append(w)
    return out


def lemma_corpus(
    seed: int,
    count: int,
    ranks: Sequence[int] = (1, 2),
    lengths: Sequence[int] = range(1, 7),
    degrees: Sequence[int] = range(6, 65),
) -> list[tuple[WordWithConstants, int]]:
    """Words admitting some ``d >= 1``, paired with the largest such ``d``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        r, l, n = _draw_shape(rng, ranks, lengths, degrees)
        w = random_word(rng, r, n, l, p_identity=0.05)
        if w.length == 0:
            continue
        d = largest_feasible_d(w)
        if d >= 1:
            out.append((w, d))
    return out


def corollary_corpus(
    seed: int,
    count: int,
    ranks: Sequence[int] = (1, 2, 3),
    degrees: Sequence[int] = range(3, 65),
    max_length: Optional[int] = None,
) -> list[WordWithConstants]:
    """Strong words with ``1 <= l(w) < n / 2``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.choice(degrees))
        top = (n - 1) // 2 if max_length is None else min(max_length, (n - 1) // 2)
        if top < 1:
            continue
        l = int(rng.integers(1, top + 1))
        r = int(rng.choice(ranks))
        out.append(random_word(rng, r, n, l, strong=True))
    return out
