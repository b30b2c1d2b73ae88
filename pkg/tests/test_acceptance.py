"""Acceptance criteria 1-11; each test records a PASS/FAIL line for the terminal summary."""
import functools
import math
import time
from fractions import Fraction

import numpy as np

from wordmaps.bounds import chain_growth, master_inequality, theorem_bounds, theorem_i_rhs
from wordmaps.corpus import corollary_corpus, critical_corpus, lemma_corpus, strong_corpus
from wordmaps.dsl import word_from_text
from wordmaps.evaluate import check_mixed_identity, evaluate, evaluate_batch, exact_diameter
from wordmaps.exceptions import InternalContradiction
from wordmaps.interpolate import covering_number, interpolate, length_bound
from wordmaps.perm import Permutation, alternating_group, hamming_distance
from wordmaps.schreier import check_conditions, construct_witness
from wordmaps.words import WordWithConstants, content, critical_indices, is_strong

STRONG_SEED, CRITICAL_SEED, LEMMA_SEED, COROLLARY_SEED, MAP_SEED = 4, 5, 7, 8, 10


@functools.lru_cache(maxsize=None)
def diameter(w: WordWithConstants) -> int:
    return exact_diameter(w)


@functools.lru_cache(maxsize=None)
def strong_words():
    return strong_corpus(STRONG_SEED, 300)


@functools.lru_cache(maxsize=None)
def critical_words():
    return critical_corpus(CRITICAL_SEED, 300)


class Recorder:
    def __init__(self, record, number, title):
        self.record, self.number, self.title = record, number, title
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        detail = f"{self.detail}; {elapsed:.1f}s" if self.detail else f"{elapsed:.1f}s"
        if exc_type is not None:
            detail += f"; {exc_type.__name__}: {exc}"
        self.record(self.number, self.title, exc_type is None, detail)
        return False


def test_01_commutator_power_mixed_identity(acceptance):
    with Recorder(acceptance, 1, "[x1,(1 2)]^6 is a mixed identity on S_4..S_8") as rec:
        times = {}
        for n in range(4, 9):
            t0 = time.perf_counter()
            rep = check_mixed_identity(word_from_text("[x1,(1 2)]^6", 1, n))
            times[n] = time.perf_counter() - t0
            assert rep.is_identity and rep.evaluations == math.factorial(n)
        rec.detail = f"n=8: {math.factorial(8)} evaluations in {times[8]:.2f}s"
        assert times[8] < 5


def test_02_factorial_power_identity(acceptance):
    with Recorder(acceptance, 2, "x1^(n!) is the identity on S_n, n = 3, 4, 5") as rec:
        for n in (3, 4, 5):
            w = word_from_text(f"x1^{math.factorial(n)}", 1, n)
            assert w.length == math.factorial(n)
            assert check_mixed_identity(w).is_identity
        rec.detail = "exact"


def test_03_sharpness(acceptance):
    with Recorder(acceptance, 3, "diam of c-cycle conjugates is min(2c, n), 2 <= c <= n <= 7") as rec:
        t0 = time.perf_counter()
        cases, mismatches = 0, []
        for n in range(2, 8):
            for c in range(2, n + 1):
                cyc = "(" + " ".join(map(str, range(1, c + 1))) + ")"
                d = exact_diameter(word_from_text(f"{cyc}^x1", 1, n))
                if d != min(2 * c, n):
                    mismatches.append(f"(c={c}, n={n}): diam {d} != {min(2 * c, n)}")
                cases += 1
        elapsed = time.perf_counter() - t0
        rec.detail = f"{cases} (c, n) pairs, mismatches: {', '.join(mismatches) or 'none'}"
        assert elapsed < 10
        assert not mismatches


def test_04_strong_word_bound(acceptance):
    with Recorder(acceptance, 4, "(diam+1)/n >= 1/(2l) on 300 strong words") as rec:
        words = strong_words()
        assert len(words) == 300
        assert all(is_strong(w) and 1 <= w.length <= 6 and w.rank <= 2 and w.degree in (4, 5, 6) for w in words)
        violations = 0
        for w in words:
            d = diameter(w)
            lhs, rhs = Fraction(d + 1, w.degree), Fraction(1, 2 * w.length)
            violations += lhs < rhs
            assert theorem_bounds(w, d).check("theorem-ii").holds == (lhs >= rhs)
        rec.detail = f"{violations} violations"
        assert violations == 0


def test_05_content_bound(acceptance):
    with Recorder(acceptance, 5, "(diam+1)/n >= exp(-log(5l) l/2)/2 on 300 words with critical constants") as rec:
        words = critical_words()
        assert len(words) == 300
        assert all(not content(w).is_trivial() and critical_indices(w) for w in words)
        assert all(w.length <= 6 and w.rank <= 2 and w.degree in (4, 5, 6) for w in words)
        violations = 0
        for w in words:
            lhs = Fraction(diameter(w) + 1, w.degree)
            rhs = theorem_i_rhs(w.length)
            violations += not (float(lhs) >= rhs * (1 - 1e-12))
        rec.detail = f"{violations} violations"
        assert violations == 0


def test_06_master_inequality(acceptance):
    with Recorder(acceptance, 6, "crit <= 2(diam+1)l on the corpora of criteria 4-5") as rec:
        violations = 0
        words = strong_words() + critical_words()
        for w in words:
            d = diameter(w)
            rep = master_inequality(w, d)
            ok = rep.crit <= 2 * (d + 1) * w.length
            assert rep.check("master").holds == ok
            violations += not ok
        rec.detail = f"{len(words)} words, {violations} violations"
        assert violations == 0


def test_07_lemma_witnesses(acceptance):
    with Recorder(acceptance, 7, "witness certificates for 100 random words at the largest d") as rec:
        t0 = time.perf_counter()
        corpus = lemma_corpus(LEMMA_SEED, 100)
        contradictions = 0
        for w, d in corpus:
            assert w.degree <= 64
            assert check_conditions(w, d).all_satisfied and not check_conditions(w, d + 1).all_satisfied
            try:
                cert = construct_witness(w, d, debug=True)
            except InternalContradiction:
                contradictions += 1
                continue
            assert evaluate(w, cert.assignment) == cert.sigma
            assert hamming_distance(cert.sigma, cert.tau) >= d
            assert cert.verify()
        elapsed = time.perf_counter() - t0
        rec.detail = f"{contradictions} internal contradictions, max d = {max(d for _, d in corpus)}"
        assert contradictions == 0
        assert elapsed < 30


def test_08_corollary(acceptance):
    with Recorder(acceptance, 8, "strong words with l < n/2 are non-constant (50 cases)") as rec:
        words = corollary_corpus(COROLLARY_SEED, 50)
        for w in words:
            assert is_strong(w) and 1 <= w.length < w.degree / 2 and w.degree <= 64
            d = w.degree // (2 * w.length)
            cert = construct_witness(w, d, debug=True)
            assert cert.distance >= d >= 1
            assert cert.sigma != cert.tau  # two distinct values of the word map
        rec.detail = f"degrees {min(w.degree for w in words)}..{max(w.degree for w in words)}"


def test_09_covering_numbers(acceptance):
    with Recorder(acceptance, 9, "cn(A6) = 3 and cd <= cn for A5, A6") as rec:
        t0 = time.perf_counter()
        cov6 = covering_number(alternating_group(6))
        elapsed = time.perf_counter() - t0
        cov5 = covering_number(alternating_group(5))
        rec.detail = f"cn(A5)={cov5.cn}, cd(A5)={cov5.cd}, cn(A6)={cov6.cn}, cd(A6)={cov6.cd}, A6 in {elapsed:.1f}s"
        assert cov6.cn == 6 // 2
        assert cov5.cd <= cov5.cn and cov6.cd <= cov6.cn
        assert elapsed < 60


def test_10_interpolation(acceptance):
    with Recorder(acceptance, 10, "10 random maps A5 -> A5 compile to words") as rec:
        G = alternating_group(5)
        cov = covering_number(G)
        rng = np.random.default_rng(MAP_SEED)
        worst_time, worst_len = 0.0, 0
        arr = np.array([g.images for g in G.elements], dtype=np.int64)[:, None, :]
        for _ in range(10):
            f = {g: G.elements[int(rng.integers(len(G)))] for g in G}
            t0 = time.perf_counter()
            cert = interpolate(G, f, cov)
            worst_time = max(worst_time, time.perf_counter() - t0)
            worst_len = max(worst_len, cert.length)
            direct = evaluate_batch(cert.word, arr)
            assert [Permutation(row.tolist()) for row in direct] == [f[g] for g in G.elements]
            assert cert.table == f
            assert cert.length <= length_bound(len(G), cov.cn) == 4 * 60**3 * cov.cn
            assert cert.separator_ledger_ok
        rec.detail = f"longest word {worst_len}, slowest map {worst_time:.1f}s"
        assert worst_time < 120


def test_11_chain_growth(acceptance):
    with Recorder(acceptance, 11, "diam(w_i)+1 <= (1+4l)^i (diam(w)+1) along reduction chains") as rec:
        violations, steps = 0, 0
        for w in critical_words():
            for s in chain_growth(w, diameter):
                steps += 1
                violations += not s.holds
        rec.detail = f"{steps} chain terms, {violations} violations"
        assert violations == 0
