import json

import numpy as np
import pytest

from wordmaps.corpus import corollary_corpus, lemma_corpus, random_word
from wordmaps.dsl import word_from_text
from wordmaps.evaluate import evaluate
from wordmaps.exceptions import InvalidInput
from wordmaps.perm import Permutation, hamming_distance, parse_cycle_notation
from wordmaps.schreier import (
    PartialSchreierGraph,
    check_conditions,
    complete_partial,
    construct_witness,
    largest_feasible_d,
)
from wordmaps.words import classify

C8 = "(1 2 3 4 5 6 7 8)"


def W(text, n, r=1):
    return word_from_text(text, r, n)


# --- conditions -------------------------------------------------------------


def test_conditions_single_letter():
    conds = check_conditions(W("x1", 5), 4)
    assert conds.all_satisfied and conds.cond_iv
    assert [c.condition for c in conds.checks] == ["iv"]
    conds = check_conditions(W("x1", 5), 5)
    assert not conds.cond_iv
    (f,) = conds.failures()
    assert (f.lhs, f.rhs) == (5, 6)


def test_conditions_conjugate_cycle():
    w = W(f"x1^-1 {C8} x1", 32)
    conds = check_conditions(w, 2)
    assert conds.all_satisfied
    iii = [c for c in conds.checks if c.condition == "iii"]
    iv = [c for c in conds.checks if c.condition == "iv"]
    # independent recomputation: ||w||_1 = 2, ||w_2||_1 = 2, ||c_1|| = 8
    assert (iii[0].lhs, iii[0].rhs) == (8, 2 * ((2 - 1) * 2 + 2) - 3)
    assert (iv[0].lhs, iv[0].rhs) == (32, 2 * 2 + 1)


def _conditions_oracle(w, d):
    """Recompute the four inequalities from scratch, straight from the letter list."""
    n, letters = w.degree, w.letters
    l = len(letters)

    def count(prefix_len, i):
        return sum(1 for L in letters[:prefix_len] if L.variable == i)

    ok = True
    for j in range(1, l):
        a, b = letters[j - 1], letters[j]
        if a.variable != b.variable:
            ok &= n >= (d - 1) * (count(l, a.variable) + count(l, b.variable)) + count(j, a.variable) + count(j + 1, b.variable) - 1
        elif a.sign == b.sign:
            ok &= n >= 2 * ((d - 1) * count(l, a.variable) + count(j + 1, a.variable) - 1)
        else:
            ok &= w.constant_at(j).norm >= 2 * ((d - 1) * count(l, a.variable) + count(j + 1, a.variable)) - 3
    ok &= n >= d * count(l, letters[-1].variable) + 1
    return ok


def test_conditions_match_oracle_on_random_words():
    rng = np.random.default_rng(31)
    for _ in range(300):
        n = int(rng.integers(4, 40))
        w = random_word(rng, int(rng.integers(1, 4)), n, int(rng.integers(1, 7)))
        if w.length == 0:
            continue
        for d in (1, 2, 3, 5):
            assert check_conditions(w, d).all_satisfied == _conditions_oracle(w, d)


def test_conditions_monotone_and_largest_d():
    rng = np.random.default_rng(32)
    for _ in range(100):
        n = int(rng.integers(6, 50))
        w = random_word(rng, 2, n, int(rng.integers(1, 5)), p_identity=0.05)
        if w.length == 0:
            continue
        d = largest_feasible_d(w)
        flags = [check_conditions(w, k).all_satisfied for k in range(1, n + 1)]
        assert flags == [k <= d for k in range(1, n + 1)]


def test_conditions_errors():
    with pytest.raises(InvalidInput):
        check_conditions(W("(1 2)", 5), 1)
    with pytest.raises(InvalidInput):
        check_conditions(W("x1", 5), 0)


# --- completion -------------------------------------------------------------


def test_complete_partial_examples():
    assert complete_partial([{}], 3)[0].is_identity()
    assert complete_partial([{1: 2}], 3)[0].images == (1, 0, 2)
    assert complete_partial([{1: 1, 2: 2}], 2)[0].is_identity()


def test_complete_partial_rejects_non_injective():
    with pytest.raises(InvalidInput):
        complete_partial([{1: 2, 3: 2}], 3)


def test_partial_graph_injectivity():
    g = PartialSchreierGraph(4, 1)
    g.add(0, 1, 0, 1)
    g.add(0, -1, 2, 3)  # x1^-1 arrow 3 -> 4 is the x1-arrow 4 -> 3
    assert g.maps() == [{0: 1, 3: 2}]
    with pytest.raises(Exception):
        g.add(0, 1, 0, 2)


# --- witnesses --------------------------------------------------------------


def _independent_check(cert):
    w = cert.word
    sigma = evaluate(w, cert.assignment)
    assert sigma == cert.sigma
    assert hamming_distance(sigma, cert.tau) >= cert.d
    assert all(sigma(b) != cert.tau(b) for b in cert.basepoints)


def test_witness_single_letter():
    cert = construct_witness(W("x1", 5), 4, Permutation.identity(5))
    _independent_check(cert)
    assert sum(1 for b in cert.basepoints if cert.sigma(b) != b) >= 4


def test_witness_conjugate_cycle():
    w = W(f"x1^-1 {C8} x1", 32)
    tau = evaluate(w, [Permutation.identity(32)])
    assert tau == parse_cycle_notation(C8, 32)
    cert = construct_witness(w, 2)
    assert cert.tau == tau
    _independent_check(cert)


def test_witness_jplus_case():
    w = W("x1 (1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16) x1", 64)
    assert classify(w).jplus == {1}
    assert largest_feasible_d(w) >= 3
    _independent_check(construct_witness(w, 3, debug=True))


def test_witness_with_leading_constant():
    w = W("(1 5 2) x1 (2 3) x2^-1 (1 4)", 12, r=2)
    d = largest_feasible_d(w)
    cert = construct_witness(w, d, debug=True)
    assert cert.lead_stripped
    _independent_check(cert)


def test_witness_with_other_tau():
    w = W("x1 (1 2 3) x2 x1", 20, r=2)
    rng = np.random.default_rng(0)
    a = [Permutation(rng.permutation(20).tolist()) for _ in range(2)]
    tau = evaluate(w, a)
    cert = construct_witness(w, largest_feasible_d(w), tau)
    _independent_check(cert)


def test_witness_refuses_failing_conditions():
    with pytest.raises(InvalidInput):
        construct_witness(W("x1", 5), 5)


def test_trace_records_and_arrow_counts():
    w = W("x1 (1 2 3 4 5 6 7) x1^-1 x2 (1 3) x1", 40, r=2)
    d = largest_feasible_d(w)
    lines = []
    cert = construct_witness(w, d, on_step=lambda rec: lines.append(rec.to_json()), debug=True)
    assert len(lines) == d * w.length
    recs = [json.loads(s) for s in lines]
    assert set(recs[0]) == {"k", "j", "variable", "sign", "source", "target", "admissible", "guaranteed"}
    cls = classify(w)
    counts = {1: 0, 2: 0}
    for rec in recs:
        k, j, i = rec["k"], rec["j"], rec["variable"]
        # before step (k, j): (k-1)||w||_i + ||w_{j-1}||_i arrows of colour i
        assert counts[i] == (k - 1) * cls.total(i) + cls.ilength(j - 1, i)
        counts[i] += 1
        assert rec["admissible"] >= rec["guaranteed"] >= 1
    _independent_check(cert)


def test_random_target_mode():
    w = W("x1 x2^-1 (1 2 3 4 5 6) x2 (1 2) x1", 48, r=2)
    d = largest_feasible_d(w)
    certs = [construct_witness(w, d, seed=s, debug=True) for s in range(20)]
    for c in certs:
        _independent_check(c)
    assert len({c.sigma for c in certs}) > 1


def test_random_words_stress():
    for w, d in lemma_corpus(seed=33, count=60):
        for seed in (None, 1):
            _independent_check(construct_witness(w, d, seed=seed, debug=True))


def test_corollary_non_constant():
    for w in corollary_corpus(seed=34, count=40):
        l, n = w.length, w.degree
        assert 1 <= l < n / 2
        d = n // (2 * l)
        cert = construct_witness(w, d)
        assert cert.distance >= d >= 1
        # the map takes at least two values: tau and sigma
        assert cert.sigma != cert.tau
