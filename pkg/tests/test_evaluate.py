import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_diameter, brute_image
from wordmaps.corpus import random_word, strong_corpus
from wordmaps.dsl import word_from_text
from wordmaps.evaluate import (
    check_mixed_identity,
    diameter_sampled,
    evaluate,
    evaluate_batch,
    exact_diameter,
    image_exhaustive,
    is_mixed_identity,
)
from wordmaps.exceptions import BudgetExceeded, InvalidInput
from wordmaps.perm import Permutation, hamming_distance, parse_cycle_notation
from wordmaps.words import WordWithConstants, evaluate_raw_sequence, reduce


def W(text, n, r=1):
    return word_from_text(text, r, n)


def all_perms(n):
    return [Permutation(p) for p in itertools.permutations(range(n))]


# --- evaluate ---------------------------------------------------------------


def test_evaluate_variable_is_substitution():
    s = parse_cycle_notation("(1 4 2)", 5)
    assert evaluate(W("x1", 5), [s]) == s


def test_evaluate_right_action_order():
    a = parse_cycle_notation("(1 2)", 3)
    w = W("x1 (2 3)", 3)
    assert evaluate(w, [a])(1) == 3  # 1 -> 2 -> 3


def test_factorial_power_is_identity_on_s4():
    w = W("x1^24", 4)
    assert all(evaluate(w, [s]).is_identity() for s in all_perms(4))


def test_commutator_power_is_identity_pointwise():
    w = W("[x1, (1 2)]^6", 5)
    rng = np.random.default_rng(0)
    for _ in range(50):
        s = Permutation(rng.permutation(5).tolist())
        assert evaluate(w, [s]).is_identity()


def test_evaluate_errors():
    w = W("x1 x2", 4, r=2)
    with pytest.raises(InvalidInput):
        evaluate(w, [Permutation.identity(4)])
    with pytest.raises(InvalidInput):
        evaluate(w, [Permutation.identity(4), Permutation.identity(5)])


def _random_raw(rng, rank, n, length):
    raw = []
    for _ in range(length):
        if rng.random() < 0.5:
            raw.append((int(rng.integers(1, rank + 1)), int(rng.choice([-1, 1]))))
        else:
            raw.append(Permutation(rng.permutation(n).tolist()) if rng.random() < 0.5 else Permutation.identity(n))
    return raw


def test_reduce_preserves_evaluation_1000_trials():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n, r = int(rng.integers(1, 9)), int(rng.integers(1, 4))
        raw = [Permutation.identity(n)] + _random_raw(rng, r, n, int(rng.integers(0, 16)))
        a = [Permutation(rng.permutation(n).tolist()) for _ in range(r)]
        assert evaluate(reduce(r, n, raw), a) == evaluate_raw_sequence(raw, a)


def test_batch_matches_scalar():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        w = random_word(rng, 2, n, int(rng.integers(0, 12)))
        perms = np.argsort(rng.random((16, 2, n)), axis=2)
        out = evaluate_batch(w, perms)
        for b in range(16):
            a = [Permutation(perms[b, i].tolist()) for i in range(2)]
            assert out[b].tolist() == list(evaluate(w, a).images)


def _compose_k_times(images, k):
    acc = tuple(range(len(images)))
    for _ in range(k):
        acc = tuple(images[p] for p in acc)
    return acc


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.permutations(range(n))), st.integers(1, 5000))
def test_power_shortcut_matches_composition(images, k):
    s = Permutation(list(images))
    expected = _compose_k_times(s.images, k)
    assert (s**k).images == expected
    w = reduce(1, s.degree, [(1, 1)] * k)  # x1^k, evaluated by batched square-and-multiply
    assert tuple(evaluate_batch(w, np.array([[s.images]]))[0].tolist()) == expected


def test_power_shortcut_large_exponent():
    rng = np.random.default_rng(1)
    s = Permutation(rng.permutation(7).tolist())
    k = 999_983
    expected = _compose_k_times(s.images, k)
    assert (s**k).images == expected
    w = reduce(1, 7, [(1, 1)] * k)
    assert tuple(evaluate_batch(w, np.array([[s.images]]))[0].tolist()) == expected


# --- exhaustive images ------------------------------------------------------


def test_image_of_constant():
    c = parse_cycle_notation("(1 2 3)", 4)
    rep = image_exhaustive(WordWithConstants.constant(c))
    assert rep.image == {c} and rep.diameter == 0 and rep.exact


@pytest.mark.parametrize("text, n, expected", [("(1 2 3)^x1", 5, 5), ("(1 2)^x1", 6, 4)])
def test_conjugate_cycle_diameter(text, n, expected):
    w = W(text, n)
    rep = image_exhaustive(w)
    assert rep.diameter == expected
    assert rep.diameter == brute_diameter(brute_image(w))
    s, t = rep.witnesses
    assert hamming_distance(s, t) == expected


def test_image_matches_brute_force_oracle():
    rng = np.random.default_rng(9)
    for _ in range(25):
        n, r = int(rng.integers(2, 5)), int(rng.integers(1, 3))
        w = random_word(rng, r, n, int(rng.integers(0, 6)))
        img = brute_image(w)
        rep = image_exhaustive(w)
        assert rep.image == img
        assert rep.diameter == brute_diameter(img) == exact_diameter(w)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        image_exhaustive(W("x1 x2", 8, r=2), budget=10**6)
    # unused variables are not enumerated
    assert exact_diameter(W("x1", 6, r=3), budget=1000) == 6


# --- sampling ---------------------------------------------------------------


def test_sampled_constant():
    assert diameter_sampled(WordWithConstants.constant(parse_cycle_notation("(1 2)", 6)), 10, 3).diameter == 0


def test_sampled_variable_n20():
    rep = diameter_sampled(W("x1", 20), 200, seed=0)
    assert 18 <= rep.diameter <= 20
    s, t = rep.witnesses
    assert hamming_distance(s, t) == rep.diameter
    assert evaluate(W("x1", 20), rep.witness_assignments[0]) == s


def test_sampled_conjugate_transposition_n30():
    rep = diameter_sampled(W("(1 2)^x1", 30), 100, seed=0)
    assert rep.diameter == 4
    # exhaustive oracle for the true diameter: the image is the set of all transpositions
    trans = [parse_cycle_notation(f"({a} {b})", 30) for a, b in itertools.combinations(range(1, 31), 2)]
    assert max(hamming_distance(trans[0], t) for t in trans) == 4


def test_sampled_is_reproducible():
    w = W("x1 (1 2 3) x2", 7, r=2)
    a, b = diameter_sampled(w, 50, 5), diameter_sampled(w, 50, 5)
    assert a.diameter == b.diameter and a.witnesses == b.witnesses


def test_sampled_never_exceeds_exhaustive():
    rng = np.random.default_rng(10)
    for k in range(40):
        n, r = int(rng.integers(2, 7)), int(rng.integers(1, 3))
        if math.factorial(n) ** r > 10**6:
            r = 1
        w = random_word(rng, r, n, int(rng.integers(0, 6)))
        assert diameter_sampled(w, 30, k).diameter <= exact_diameter(w)


# --- mixed identities -------------------------------------------------------


def test_commutator_power_mixed_identity():
    assert is_mixed_identity(W("[x1,(1 2)]^6", 5))


def test_factorial_power_mixed_identity():
    assert is_mixed_identity(W("x1^120", 5))


def test_not_identity_has_witness():
    rep = check_mixed_identity(W("x1", 3))
    assert not rep.is_identity
    assert not rep.counterexample[0].is_identity() and rep.value == rep.counterexample[0]


def test_strong_words_are_not_identities():
    for w in strong_corpus(21, 60, lengths=range(1, 4)):
        if w.degree >= 2 * w.length:
            assert not is_mixed_identity(w)
