"""Word maps S_n^r -> S_n: pointwise evaluation, exact images, sampled diameters, mixed identities.

Batched evaluation keeps a ``(batch, n)`` array ``cur`` holding the images of
every point under the prefix read so far; reading a letter or a constant is
one gather.  Runs ``x^k`` (same letter, identity constants in between) are
evaluated by batched square-and-multiply instead of ``k`` gathers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import BudgetExceeded, InvalidInput
from .perm import Permutation, encode_rows, permutation_table
from .words import WordWithConstants

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 16


def _check_assignment(w: WordWithConstants, perms: Sequence[Permutation]):
    if len(perms) != w.rank:
        raise InvalidInput(f"assignment has {len(perms)} permutations, word has rank {w.rank}")
    for p in perms:
        if p.degree != w.degree:
            raise InvalidInput(f"assignment degree {p.degree} does not match word degree {w.degree}")


def evaluate(w: WordWithConstants, assignment: Sequence[Permutation]) -> Permutation:
    """``c_0 pi_{i(1)}^{e(1)} c_1 ... pi_{i(l)}^{e(l)} c_l`` under the right action."""
    perms = list(assignment)
    _check_assignment(w, perms)
    inverses = [p.inverse() for p in perms]
    acc = w.lead
    for L, c in w.body:
        acc = acc * (perms[L.variable - 1] if L.sign > 0 else inverses[L.variable - 1])
        if not c.is_identity():
            acc = acc * c
    return acc


# ---------------------------------------------------------------------------
# batched evaluation


def _invert_rows(arr: np.ndarray) -> np.ndarray:
    inv = np.empty_like(arr)
    rows = np.arange(arr.shape[0])[:, None]
    inv[rows, arr] = np.arange(arr.shape[1])[None, :]
    return inv


def _batch_power(arr: np.ndarray, k: int) -> np.ndarray:
    """Row-wise ``arr[b]^k`` for k >= 1 by square-and-multiply (right action)."""
    result = None
    base = arr
    while k:
        if k & 1:
            result = base if result is None else np.take_along_axis(base, result, axis=1)
        k >>= 1
        if k:
            base = np.take_along_axis(base, base, axis=1)
    return result


def _compile(w: WordWithConstants):
    """Group the body into steps (variable, exponent, constant-array-or-None)."""
    steps = []
    cache: dict = {}
    body = w.body
    t = 0
    while t < len(body):
        L, c = body[t]
        run = 1
        while c.is_identity() and t + run < len(body) and body[t + run][0] == L:
            c = body[t + run][1]
            run += 1
        if c.is_identity():
            carr = None
        else:
            carr = cache.get(c)
            if carr is None:
                carr = cache[c] = np.asarray(c.images, dtype=np.int64)
        steps.append((L.variable - 1, L.sign * run, carr))
        t += run
    return steps


def evaluate_batch(w: WordWithConstants, perms: np.ndarray, steps=None) -> np.ndarray:
    """Evaluate ``w`` on a batch of assignments.

    ``perms`` has shape ``(batch, rank, n)`` holding 0-based images.
    Returns a ``(batch, n)`` array.
    """
    batch, rank, n = perms.shape
    if rank != w.rank or n != w.degree:
        raise InvalidInput("batch shape does not match word rank/degree")
    if steps is None:
        steps = _compile(w)
    lead = np.asarray(w.lead.images, dtype=np.int64)
    cur = np.broadcast_to(lead, (batch, n)).copy()
    inv_cache: dict = {}
    pow_cache: dict = {}
    for var, exp, carr in steps:
        key = (var, exp)
        g = pow_cache.get(key)
        if g is None:
            base = perms[:, var, :]
            if exp < 0:
                base = inv_cache.get(var)
                if base is None:
                    base = inv_cache[var] = _invert_rows(perms[:, var, :])
            g = base if abs(exp) == 1 else _batch_power(base, abs(exp))
            pow_cache[key] = g
        cur = np.take_along_axis(g, cur, axis=1)
        if carr is not None:
            cur = carr[cur]
    return cur


def _rows_to_perms(rows: np.ndarray) -> list[Permutation]:
    return [Permutation(r.tolist(), check=False) for r in rows]


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _effective_variables(w: WordWithConstants) -> list[int]:
    return w.variables()


def exhaustive_size(w: WordWithConstants) -> int:
    """Number of evaluations an exhaustive sweep needs: (n!)^(number of occurring variables)."""
    return math.factorial(w.degree) ** len(_effective_variables(w))


def _check_budget(w: WordWithConstants, budget: int):
    need = exhaustive_size(w)
    if need > budget:
        raise BudgetExceeded(f"exhaustive sweep needs {need} evaluations, budget is {budget}")
    return need


def _assignment_chunks(w: WordWithConstants, chunk: int = CHUNK):
    """Yield ``(start_index, perms)`` over all assignments in lexicographic order.

    Only occurring variables are enumerated; the others stay at the identity,
    which leaves the image unchanged.  The first occurring variable is the
    most significant digit.
    """
    n = w.degree
    table = permutation_table(n)
    N = len(table)
    used = [v - 1 for v in _effective_variables(w)]
    total = N ** len(used)
    ident = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        perms = np.broadcast_to(ident, (len(idx), w.rank, n)).copy()
        rem = idx
        for v in reversed(used):
            perms[:, v, :] = table[rem % N]
            rem = rem // N
        yield start, perms


def assignment_at(w: WordWithConstants, index: int) -> list[Permutation]:
    """The assignment with lexicographic index ``index`` (matches :func:`_assignment_chunks`)."""
    n = w.degree
    table = permutation_table(n)
    N = len(table)
    out = [Permutation.identity(n) for _ in range(w.rank)]
    for v in reversed(_effective_variables(w)):
        out[v - 1] = Permutation(table[index % N].tolist(), check=False)
        index //= N
    return out


def diameter_of_rows(rows: np.ndarray) -> tuple[int, Optional[tuple[int, int]]]:
    """Max pairwise Hamming distance of distinct rows, with a witnessing index pair.

    Stops as soon as the distance reaches ``n``, the largest possible value.
    """
    m = len(rows)
    if m < 2:
        return 0, (0, 0) if m == 1 else None
    n = rows.shape[1]
    best, pair = -1, None
    for i in range(m - 1):
        dist = np.count_nonzero(rows[i + 1:] != rows[i], axis=1)
        k = int(np.argmax(dist))
        if dist[k] > best:
            best, pair = int(dist[k]), (i, i + 1 + k)
            if best == n:
                break
    return best, pair


@dataclass
class ImageReport:
    diameter: int
    method: str  # 'exhaustive' or 'sampled'
    sample_count: int
    seed: Optional[int] = None
    image: Optional[frozenset] = None
    witnesses: Optional[tuple] = None  # (sigma, tau) with d(sigma, tau) == diameter
    witness_assignments: Optional[tuple] = field(default=None, repr=False)

    @property
    def exact(self) -> bool:
        return self.method == "exhaustive"


def image_rows(w: WordWithConstants, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Distinct images as a sorted ``(m, n)`` array."""
    _check_budget(w, budget)
    steps = _compile(w)
    codes, rows = [], []
    for _, perms in _assignment_chunks(w):
        out = evaluate_batch(w, perms, steps)
        c = encode_rows(out)
        c, first = np.unique(c, return_index=True)
        codes.append(c)
        rows.append(out[first])
    codes = np.concatenate(codes)
    rows = np.concatenate(rows)
    _, first = np.unique(codes, return_index=True)
    return rows[first]


def image_exhaustive(w: WordWithConstants, budget: int = DEFAULT_BUDGET) -> ImageReport:
    """The full image ``w(S_n^r)`` and its exact diameter."""
    count = _check_budget(w, budget)
    rows = image_rows(w, budget)
    diam, pair = diameter_of_rows(rows)
    perms = _rows_to_perms(rows)
    witnesses = (perms[pair[0]], perms[pair[1]]) if pair else None
    return ImageReport(diam, "exhaustive", count, None, frozenset(perms), witnesses)


def exact_diameter(w: WordWithConstants, budget: int = DEFAULT_BUDGET) -> int:
    if w.is_constant():
        return 0
    return diameter_of_rows(image_rows(w, budget))[0]


def random_assignments(rng: np.random.Generator, count: int, rank: int, n: int) -> np.ndarray:
    return np.argsort(rng.random((count, rank, n)), axis=2).astype(np.int64)


def diameter_sampled(w: WordWithConstants, samples: int, seed: int = 0) -> ImageReport:
    """Certified lower bound on the diameter from ``samples`` seeded random assignments."""
    if samples < 2:
        raise InvalidInput("need at least two samples")
    rng = np.random.default_rng(seed)
    perms = random_assignments(rng, samples, w.rank, w.degree)
    out = evaluate_batch(w, perms)
    _, first = np.unique(encode_rows(out), return_index=True)
    first = np.sort(first)
    diam, pair = diameter_of_rows(out[first])
    a, b = (int(first[pair[0]]), int(first[pair[1]])) if pair else (0, 0)
    sig, tau = _rows_to_perms(out[[a, b]])
    assignments = tuple(tuple(_rows_to_perms(perms[k])) for k in (a, b))
    return ImageReport(diam, "sampled", samples, seed, None, (sig, tau), assignments)


@dataclass
class IdentityReport:
    is_identity: bool
    evaluations: int
    counterexample: Optional[list] = None  # assignment
    value: Optional[Permutation] = None


def check_mixed_identity(w: WordWithConstants, budget: int = DEFAULT_BUDGET) -> IdentityReport:
    """Exhaustive mixed-identity test; stops at the first (lexicographic) counterexample."""
    _check_budget(w, budget)
    steps = _compile(w)
    ident = np.arange(w.degree, dtype=np.int64)
    done = 0
    for start, perms in _assignment_chunks(w):
        out = evaluate_batch(w, perms, steps)
        bad = np.flatnonzero((out != ident).any(axis=1))
        if len(bad):
            k = int(bad[0])
            return IdentityReport(False, done + k + 1, assignment_at(w, start + k),
                                  Permutation(out[k].tolist(), check=False))
        done += len(perms)
    return IdentityReport(True, done)


def is_mixed_identity(w: WordWithConstants, budget: int = DEFAULT_BUDGET) -> bool:
    return check_mixed_identity(w, budget).is_identity
